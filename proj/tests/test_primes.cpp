#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twinsieve/errors.hpp"
#include "twinsieve/primes.hpp"

using namespace twinsieve;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int naive_mobius(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

int naive_nu(std::uint64_t n) {
  int c = 0;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p == 0 && trial_division_prime(p)) ++c;
  }
  return c;
}

// Ordered triples (a, b, c) with abc = n.
std::uint64_t triple_count(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t a = 1; a <= n; ++a) {
    if (n % a) continue;
    for (std::uint64_t b = 1; b <= n / a; ++b) {
      if ((n / a) % b == 0) ++c;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("prime table against trial division") {
  const auto table = primes_up_to(20000);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t n = 2; n <= 20000; ++n) {
    if (trial_division_prime(n)) expect.push_back(n);
  }
  CHECK(table.primes == expect);
  CHECK(table.contains(19997));
  CHECK_FALSE(table.contains(19999));
  CHECK_THROWS_AS(primes_up_to(1), DomainError);
}

TEST_CASE("segmented sieve with small segments matches the default") {
  const auto a = primes_up_to(300000);
  const auto b = primes_up_to(300000, SieveOptions{4096});
  CHECK(a.primes == b.primes);
  const PrimalityBitmap bits(300000, SieveOptions{1000});
  for (std::uint64_t n = 0; n <= 3000; ++n) CHECK(bits.is_prime(n) == trial_division_prime(n));
  CHECK_THROWS_AS(bits.is_prime(300001), DomainError);
}

TEST_CASE("Miller-Rabin against trial division") {
  for (std::uint64_t n = 0; n < 50000; ++n) REQUIRE(is_prime(n) == trial_division_prime(n));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = 1'000'000'000'000ULL + rng() % 1'000'000'000ULL;
    CHECK(is_prime(n) == trial_division_prime(n));
  }
  CHECK(is_prime((1ULL << 61) - 1));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(next_prime(31) == 37);
  CHECK(next_prime(1) == 2);
  CHECK(prime_index(2) == 1);
  CHECK(prime_index(31) == 11);
  CHECK_THROWS_AS(prime_index(33), DomainError);
}

TEST_CASE("primorial L") {
  CHECK(primorial_L(5) == 5);
  CHECK(primorial_L(7) == 35);
  CHECK(primorial_L(31) == BigInt(5) * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31);
  BigInt big = 1;
  for (std::uint64_t p = 5; p <= 113; ++p) {
    if (trial_division_prime(p)) big *= p;
  }
  CHECK(primorial_L(113) == big);
  CHECK_FALSE(primorial_L_u128(113).has_value());
  CHECK(primorial_L_u128(31).has_value());
  CHECK_THROWS_AS(primorial_L(9), DomainError);
  CHECK_THROWS_AS(primorial_L(3), DomainError);
}

TEST_CASE("arithmetic functions") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(30) == -1);
  CHECK(mobius(12) == 0);
  CHECK(nu(12) == 2);
  CHECK(d3(12) == 18);
  const ArithmeticFunctionCache cache(3000);
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    REQUIRE(cache.mu(n) == naive_mobius(n));
    REQUIRE(mobius(n) == naive_mobius(n));
  }
  for (std::uint64_t n = 1; n <= 600; ++n) {
    REQUIRE(cache.nu(n) == naive_nu(n));
    REQUIRE(cache.d3(n) == triple_count(n));
    REQUIRE(d3(n) == triple_count(n));
  }
  CHECK(cache.mu(3001) == naive_mobius(3001));
  CHECK_THROWS_AS(mobius(0), DomainError);
}

TEST_CASE("d3 summatory function") {
  std::uint64_t running = 0;
  const ArithmeticFunctionCache cache(5000);
  for (std::uint64_t y = 1; y <= 5001; ++y) {
    if (y <= 400 || y % 97 == 0) {
      REQUIRE(d3_summatory(y) == running);
      REQUIRE(cache.d3_prefix(y) == running);
    }
    if (y <= 5000) running += cache.d3(y);
  }
  CHECK(d3_summatory(1000) == 29325);
  CHECK(d3_growth_ratio(1000) == doctest::Approx(1.22912).epsilon(1e-5));
}

TEST_CASE("shared prime table and iteration") {
  std::vector<std::uint64_t> seen;
  for_each_prime(10, 30, [&](std::uint64_t p) { seen.push_back(p); });
  CHECK(seen == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  CHECK(shared_primes(1000)->limit >= 1000);
}
