#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twinsieve/errors.hpp"
#include "twinsieve/legendre.hpp"

using namespace twinsieve;

namespace {

bool slow_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

struct Weight {
  bool admissible = false;
  std::int64_t w = 0;  // mu(n) 2^nu(n)
};

// n squarefree with every prime factor in (p_j, x].
Weight brute_weight(std::uint64_t n, std::uint64_t p_j) {
  std::int64_t w = 1;
  std::uint64_t m = n;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    if (p <= p_j) return {};
    m /= p;
    if (m % p == 0) return {};
    w *= -2;
  }
  if (m > 1) {
    if (m <= p_j) return {};
    w *= -2;
  }
  return {true, w};
}

std::int64_t brute_legendre(std::uint64_t p_j, std::uint64_t x) {
  std::int64_t s = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    const auto w = brute_weight(n, p_j);
    if (w.admissible) s += w.w * static_cast<std::int64_t>(x / n);
  }
  return s;
}

}  // namespace

TEST_CASE("p_j = 7 hand values") {
  const auto ctx = make_context(7);
  const auto e = enumerate_smooth_squarefree(ctx);
  CHECK(e.x == 15);
  REQUIRE(e.terms.size() == 3);
  CHECK(e.terms[1].n == 11);
  CHECK(e.terms[1].mu == -1);
  CHECK(legendre_sum(e) == 11);
  const auto report = legendre_report(ctx);
  CHECK(report.R0 == 15);
  CHECK(report.pi2_true == 7);
  CHECK(report.discrepancy == -19);
  const auto rem = remainder_RE(ctx);
  REQUIRE(rem.exact_available);
  CHECK(rem.minus_RE == BigRational(-148, 143));
  CHECK(rem.minus_RE_float == doctest::Approx(-148.0 / 143.0).epsilon(1e-14));
}

TEST_CASE("twin prime count against trial division") {
  std::uint64_t count = 0;
  for (std::uint64_t limit = 7; limit <= 20000; ++limit) {
    if (limit % 6 == 1 && slow_prime(limit) && slow_prime(limit - 2)) ++count;
    if (limit % 173 == 0 || limit < 200) REQUIRE(pi2_brute(limit) == count);
  }
  CHECK(pi2_brute(91) == 7);
  CHECK_THROWS_AS(pi2_brute(6), DomainError);
}

TEST_CASE("Legendre sum against brute force") {
  for (std::uint64_t p_j : {11, 13, 17}) {
    const auto ctx = make_context(p_j);
    const auto e = enumerate_smooth_squarefree(ctx);
    CHECK(legendre_sum(e) == brute_legendre(p_j, e.x));
    for (const auto& t : e.terms) {
      const auto w = brute_weight(t.n, p_j);
      REQUIRE(w.admissible);
      REQUIRE(w.w == t.mu * (std::int64_t{1} << t.nu));
    }
  }
}

TEST_CASE("fractional remainder is the rational sum minus the floor sum") {
  for (std::uint64_t p_j : {11, 13}) {
    const auto ctx = make_context(p_j);
    const auto e = enumerate_smooth_squarefree(ctx);
    const auto rem = remainder_RE(ctx);
    REQUIRE(rem.exact_available);
    CHECK(rem.minus_RE == legendre_ratio_sum(e) - BigRational(legendre_sum(e)));
    CHECK(rem.minus_RE_float == doctest::Approx(to_double(rem.minus_RE)).epsilon(1e-12));
  }
  const auto fast = remainder_RE(make_context(13), RemainderOptions{.exact = false});
  CHECK_FALSE(fast.exact_available);
}

TEST_CASE("reports and limits") {
  CHECK_THROWS_AS(enumerate_smooth_squarefree(make_context(5)), DomainError);
  CHECK_THROWS_AS(enumerate_smooth_squarefree(make_context(13), EnumerationOptions{10}), CapacityError);
  const auto j = to_json(legendre_report(make_context(11)));
  CHECK(j.contains("discrepancy"));
  CHECK(remainder_bound_shape(1e6, 1.0) > 0);
}
