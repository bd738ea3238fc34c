#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "twinsieve/bigint.hpp"

namespace twinsieve {

struct SieveOptions {
  std::size_t segment_size = std::size_t{1} << 20;  // numbers per segment
};

// Odd-only primality bitmap over [0, limit], filled by a segmented sieve.
class PrimalityBitmap {
 public:
  explicit PrimalityBitmap(std::uint64_t limit, SieveOptions options = {});

  std::uint64_t limit() const { return limit_; }
  // Throws DomainError for n > limit().
  bool is_prime(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> odd_bits_;  // bit i <-> 2i + 1
};

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;  // ascending, all primes <= limit

  bool contains(std::uint64_t n) const;
};

// All primes <= limit (limit >= 2), segmented sieve of Eratosthenes.
PrimeTable primes_up_to(std::uint64_t limit, SieveOptions options = {});

// Process-wide table covering at least [2, limit]; grows on demand, thread safe.
std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit);

// Calls f(p) for every prime lo < p <= hi, ascending.
template <class F>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) {
  if (hi < 2 || hi <= lo) return;
  const auto table = shared_primes(hi);
  for (std::uint64_t p : table->primes) {
    if (p > hi) break;
    if (p > lo) f(p);
  }
}

// Deterministic Miller-Rabin, exact for all 64-bit n.
bool is_prime(std::uint64_t n);

// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);

// Index j with p_j = p, counting p_1 = 2. Throws DomainError unless p is prime.
std::size_t prime_index(std::uint64_t p);

// L(p_j) = product of the primes 5 <= p <= p_j. p_j must be a prime >= 5.
BigInt primorial_L(std::uint64_t p_j);
// Same product in 128-bit arithmetic; nullopt once it no longer fits.
std::optional<unsigned __int128> primorial_L_u128(std::uint64_t p_j);

// Arithmetic functions by direct factorization; n >= 1.
int mobius(std::uint64_t n);
int nu(std::uint64_t n);
std::uint64_t d3(std::uint64_t n);

// Smallest-prime-factor tables for mu, nu and d3 on [1, limit]. Lookups above
// the limit fall back to direct factorization.
class ArithmeticFunctionCache {
 public:
  explicit ArithmeticFunctionCache(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  int mu(std::uint64_t n) const;
  int nu(std::uint64_t n) const;
  std::uint64_t d3(std::uint64_t n) const;
  std::uint32_t smallest_prime_factor(std::uint32_t n) const;

  // Sum of d3(n) over 1 <= n < y for y - 1 <= limit.
  std::uint64_t d3_prefix(std::uint64_t y) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint8_t> nu_;
  std::vector<std::uint32_t> d3_;
};

// Exact sum of d3(n) over 1 <= n < y, counting ordered triples abc < y with the
// symmetric hyperbola method. y >= 1.
BigInt d3_summatory(std::uint64_t y);

// d3_summatory(y) / (y (log y)^2 / 2); y >= 2.
double d3_growth_ratio(std::uint64_t y);

}  // namespace twinsieve
