#include "twinsieve/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <span>
#include <string>

#include "twinsieve/errors.hpp"

namespace twinsieve {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t icbrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<long double>(n)));
  while (r > 0 && r * r * r > n) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes <= limit by a plain sieve; used as base primes for segments.
std::vector<std::uint32_t> small_odd_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 3) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
  }
  return out;
}

// Calls visit(lo, flags) for consecutive segments of odd numbers; flags[i]
// is nonzero when lo + 2i is prime (lo odd). Covers odd numbers in [3, limit].
template <typename Visitor>
void sieve_odd_segments(std::uint64_t limit, std::size_t segment_size, Visitor&& visit) {
  if (limit < 3) return;
  const std::uint64_t root = isqrt(limit);
  const auto base = small_odd_primes(root);
  const std::size_t span = std::max<std::size_t>(segment_size / 2, 64);  // odd slots
  std::vector<std::uint8_t> flags(span);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * span) {
    const std::uint64_t hi = std::min<std::uint64_t>(limit, lo + 2 * (span - 1));
    const std::size_t count = static_cast<std::size_t>((hi - lo) / 2 + 1);
    std::fill(flags.begin(), flags.begin() + count, 1);
    for (std::uint32_t p : base) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > hi) break;
      std::uint64_t start = std::max<std::uint64_t>(pp, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= hi; m += 2 * p) flags[(m - lo) / 2] = 0;
    }
    visit(lo, std::span<const std::uint8_t>(flags.data(), count));
  }
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

struct Factor {
  std::uint64_t p;
  int e;
};

std::vector<Factor> factorize(std::uint64_t n) {
  std::vector<Factor> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

void require_positive(std::uint64_t n, const char* what) {
  if (n == 0) throw DomainError(std::string(what) + ": n must be >= 1");
}

void require_primorial_arg(std::uint64_t p_j) {
  if (p_j < 5 || !is_prime(p_j)) {
    throw DomainError("primorial_L: p_j must be a prime >= 5, got " + std::to_string(p_j));
  }
}

std::uint64_t d3_from_factors(const std::vector<Factor>& fs) {
  std::uint64_t r = 1;
  for (const auto& f : fs) r *= static_cast<std::uint64_t>(f.e + 1) * (f.e + 2) / 2;
  return r;
}

}  // namespace

PrimalityBitmap::PrimalityBitmap(std::uint64_t limit, SieveOptions options)
    : limit_(limit), odd_bits_(limit / 128 + 1, 0) {
  sieve_odd_segments(limit, options.segment_size,
                     [&](std::uint64_t lo, std::span<const std::uint8_t> flags) {
                       for (std::size_t i = 0; i < flags.size(); ++i) {
                         if (!flags[i]) continue;
                         const std::uint64_t idx = (lo + 2 * i) / 2;
                         odd_bits_[idx / 64] |= std::uint64_t{1} << (idx % 64);
                       }
                     });
}

bool PrimalityBitmap::is_prime(std::uint64_t n) const {
  if (n > limit_) {
    throw DomainError("PrimalityBitmap: " + std::to_string(n) + " exceeds limit " +
                      std::to_string(limit_));
  }
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  const std::uint64_t idx = n / 2;
  return (odd_bits_[idx / 64] >> (idx % 64)) & 1;
}

bool PrimeTable::contains(std::uint64_t n) const {
  return std::binary_search(primes.begin(), primes.end(), n);
}

PrimeTable primes_up_to(std::uint64_t limit, SieveOptions options) {
  if (limit < 2) throw DomainError("primes_up_to: limit must be >= 2");
  PrimeTable table;
  table.limit = limit;
  table.primes.push_back(2);
  sieve_odd_segments(limit, options.segment_size,
                     [&](std::uint64_t lo, std::span<const std::uint8_t> flags) {
                       for (std::size_t i = 0; i < flags.size(); ++i) {
                         if (flags[i]) table.primes.push_back(lo + 2 * i);
                       }
                     });
  return table;
}

std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit) {
  static std::mutex mutex;
  static std::shared_ptr<const PrimeTable> table;
  std::lock_guard lock(mutex);
  if (!table || table->limit < limit) {
    const std::uint64_t grow = std::max<std::uint64_t>({limit, table ? 2 * table->limit : 0, 1 << 16});
    table = std::make_shared<const PrimeTable>(primes_up_to(grow));
  }
  return table;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::size_t prime_index(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("prime_index: " + std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  return primes_up_to(p).primes.size();
}

BigInt primorial_L(std::uint64_t p_j) {
  require_primorial_arg(p_j);
  // Accumulate in 128 bits while the product fits, then continue exactly.
  unsigned __int128 small = 1;
  BigInt big = 0;
  bool promoted = false;
  for (std::uint64_t p : primes_up_to(p_j).primes) {
    if (p < 5) continue;
    if (!promoted) {
      if (small > (~static_cast<unsigned __int128>(0)) / p) {
        big = BigInt(static_cast<std::uint64_t>(small >> 64));
        big <<= 64;
        big += static_cast<std::uint64_t>(small);
        promoted = true;
      } else {
        small *= p;
        continue;
      }
    }
    big *= p;
  }
  if (promoted) return big;
  BigInt out(static_cast<std::uint64_t>(small >> 64));
  out <<= 64;
  out += static_cast<std::uint64_t>(small);
  return out;
}

std::optional<unsigned __int128> primorial_L_u128(std::uint64_t p_j) {
  require_primorial_arg(p_j);
  unsigned __int128 prod = 1;
  for (std::uint64_t p : primes_up_to(p_j).primes) {
    if (p < 5) continue;
    if (prod > (~static_cast<unsigned __int128>(0)) / p) return std::nullopt;
    prod *= p;
  }
  return prod;
}

int mobius(std::uint64_t n) {
  require_positive(n, "mobius");
  int m = 1;
  for (const auto& f : factorize(n)) {
    if (f.e > 1) return 0;
    m = -m;
  }
  return m;
}

int nu(std::uint64_t n) {
  require_positive(n, "nu");
  return static_cast<int>(factorize(n).size());
}

std::uint64_t d3(std::uint64_t n) {
  require_positive(n, "d3");
  return d3_from_factors(factorize(n));
}

ArithmeticFunctionCache::ArithmeticFunctionCache(std::uint32_t limit)
    : limit_(limit), spf_(limit + 1, 0), mu_(limit + 1, 0), nu_(limit + 1, 0), d3_(limit + 1, 0) {
  if (limit < 1) throw DomainError("ArithmeticFunctionCache: limit must be >= 1");
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i]) continue;
    for (std::uint64_t j = i; j <= limit; j += i) {
      if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
  mu_[1] = 1;
  nu_[1] = 0;
  d3_[1] = 1;
  for (std::uint32_t n = 2; n <= limit; ++n) {
    const std::uint32_t p = spf_[n];
    std::uint32_t m = n / p;
    int e = 1;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    // n = p^e * m with gcd(p, m) = 1
    mu_[n] = static_cast<std::int8_t>(e > 1 ? 0 : -mu_[m]);
    nu_[n] = static_cast<std::uint8_t>(nu_[m] + 1);
    d3_[n] = d3_[m] * static_cast<std::uint32_t>((e + 1) * (e + 2) / 2);
  }
}

int ArithmeticFunctionCache::mu(std::uint64_t n) const {
  if (n == 0 || n > limit_) return mobius(n);
  return mu_[n];
}

int ArithmeticFunctionCache::nu(std::uint64_t n) const {
  if (n == 0 || n > limit_) return twinsieve::nu(n);
  return nu_[n];
}

std::uint64_t ArithmeticFunctionCache::d3(std::uint64_t n) const {
  if (n == 0 || n > limit_) return twinsieve::d3(n);
  return d3_[n];
}

std::uint32_t ArithmeticFunctionCache::smallest_prime_factor(std::uint32_t n) const {
  if (n < 2 || n > limit_) throw DomainError("smallest_prime_factor: out of cache range");
  return spf_[n];
}

std::uint64_t ArithmeticFunctionCache::d3_prefix(std::uint64_t y) const {
  if (y == 0 || y - 1 > limit_) throw DomainError("d3_prefix: y - 1 exceeds cache limit");
  std::uint64_t s = 0;
  for (std::uint64_t n = 1; n < y; ++n) s += d3_[n];
  return s;
}

BigInt d3_summatory(std::uint64_t y) {
  if (y == 0) throw DomainError("d3_summatory: y must be >= 1");
  const std::uint64_t n = y - 1;  // count abc <= n
  if (n == 0) return 0;
  BigInt total = 0;
  const std::uint64_t a_max = icbrt(n);
  for (std::uint64_t a = 1; a <= a_max; ++a) {
    const std::uint64_t na = n / a;
    total += 1;                                 // a = b = c
    total += 3 * BigInt(n / (a * a) - a);       // a = b < c
    const std::uint64_t b_max = isqrt(na);
    total += 3 * BigInt(b_max - a);             // a < b = c
    BigInt distinct = 0;                        // a < b < c
    for (std::uint64_t b = a + 1; b <= b_max; ++b) distinct += na / b - b;
    total += 6 * distinct;
  }
  return total;
}

double d3_growth_ratio(std::uint64_t y) {
  if (y < 2) throw DomainError("d3_growth_ratio: y must be >= 2");
  const double ly = std::log(static_cast<double>(y));
  return d3_summatory(y).convert_to<double>() / (static_cast<double>(y) * ly * ly / 2.0);
}

}  // namespace twinsieve
