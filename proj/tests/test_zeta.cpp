#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "twinsieve/errors.hpp"
#include "twinsieve/integrands.hpp"
#include "twinsieve/zeta.hpp"

using namespace twinsieve;

namespace {

constexpr double kGamma = 0.57721566490153286061;

// Plain partial sum with the integral tail and two end corrections; valid for
// Re s > -1 once N is well beyond |t|.
Complex zeta_direct(Complex s, int N = 20000) {
  Complex sum = 0;
  for (int n = 1; n < N; ++n) sum += std::pow(static_cast<double>(n), -s);
  const double dN = N;
  sum += std::pow(dN, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(dN, -s) + s * std::pow(dN, -s - 1.0) / 12.0;
  return sum;
}

bool slow_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Complex twin_rest_direct(std::uint64_t p_j, std::uint64_t cutoff, Complex s) {
  Complex num = 1, den = 1;
  for (std::uint64_t p = 2; p <= cutoff; ++p) {
    if (!slow_prime(p)) continue;
    const Complex u = std::pow(static_cast<double>(p), -s);
    den *= (1.0 - u) * (1.0 - u);
    if (p > p_j) num *= 1.0 - 2.0 * u;
  }
  return num / den;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("zeta at classical points") {
  const double pi = std::numbers::pi;
  CHECK(zeta(2.0).real() == doctest::Approx(pi * pi / 6).epsilon(1e-14));
  CHECK(zeta(4.0).real() == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-14));
  CHECK(zeta(3.0).real() == doctest::Approx(1.2020569031595942854).epsilon(1e-14));
  CHECK(zeta(0.5).real() == doctest::Approx(-1.4603545088095868129).epsilon(1e-13));
  CHECK(zeta(0.0).real() == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(zeta(-1.0).real() == doctest::Approx(-1.0 / 12).epsilon(1e-12));
  CHECK(std::abs(zeta({0.5, 14.134725141734693790})) < 1e-12);
  CHECK(std::abs(zeta({0.5, 21.022039638771554993})) < 1e-12);
}

TEST_CASE("zeta against the direct partial sum") {
  for (Complex s : {Complex{2, 0}, Complex{1.5, 2}, Complex{1.2, 5}, Complex{0.75, 30},
                    Complex{1.1, 100}, Complex{0.55, 77.7}, Complex{3, -40}}) {
    CAPTURE(s);
    CHECK(rel(zeta(s), zeta_direct(s)) < 1e-10);
  }
}

TEST_CASE("conjugate symmetry and validated region") {
  const Complex s{0.8, 123.4};
  CHECK(std::abs(zeta(std::conj(s)) - std::conj(zeta(s))) < 1e-13 * std::abs(zeta(s)));
  CHECK(evaluate_zeta({0.7, 50}).validated);
  CHECK_FALSE(evaluate_zeta({0.3, 2}).validated);
  CHECK_FALSE(evaluate_zeta({2, 1500}).validated);
  CHECK_THROWS_AS(zeta(1.0), PoleError);
  CHECK_THROWS_AS(zeta(-30.0), DomainError);
}

TEST_CASE("regular part and reciprocal through the pole") {
  CHECK(zeta_regular(1.0).real() == doctest::Approx(kGamma).epsilon(1e-13));
  CHECK(std::abs(reciprocal_zeta(1.0)) == 0.0);
  const Complex near{1.0 + 1e-7, 0};
  CHECK(rel(zeta_regular(near), zeta(near) - 1.0 / (near - 1.0)) < 1e-6);
  const Complex s{1.3, 7};
  CHECK(rel(reciprocal_zeta(s), 1.0 / zeta(s)) < 1e-13);
}

TEST_CASE("line evaluator agrees with pointwise evaluation") {
  const LineGrid grid{0.75, 10.0, 0.37, 3000};
  const auto line = zeta_regular_on_line(grid);
  REQUIRE(line.size() == grid.count);
  double worst = 0;
  for (std::size_t k = 0; k < grid.count; k += 7) worst = std::max(worst, rel(line[k], zeta_regular(grid.s(k))));
  CHECK(worst < 1e-11);
  const LineGrid neg{1.1, -50.0, 0.1, 1001};
  const auto line2 = zeta_regular_on_line(neg);
  for (std::size_t k = 0; k < neg.count; k += 50) CHECK(rel(line2[k], zeta_regular(neg.s(k))) < 1e-11);
}

TEST_CASE("fractional kernel") {
  CHECK(cor36_kernel(1.0).real() == doctest::Approx(1 - kGamma).epsilon(1e-13));
  const Complex s{1.5, 3};
  CHECK(rel(cor36_kernel(s), 1.0 / (s - 1.0) - zeta(s) / s) < 1e-13);
  CHECK_THROWS_AS(cor36_kernel(0.0), PoleError);
}

TEST_CASE("twin rest against direct products") {
  for (Complex s : {Complex{2, 0}, Complex{1.5, 3}, Complex{0.8, 20}}) {
    CAPTURE(s);
    CHECK(rel(twin_rest(7, 2000, s), twin_rest_direct(7, 2000, s)) < 1e-12);
    CHECK(rel(twin_rest(13, 500, s), twin_rest_direct(13, 500, s)) < 1e-12);
  }
  const LineGrid grid{1.1, -20.0, 0.05, 1500};
  const auto line = twin_rest_on_line(11, 3000, grid);
  for (std::size_t k = 0; k < grid.count; k += 31) CHECK(rel(line[k], twin_rest(11, 3000, grid.s(k))) < 1e-11);
  CHECK(twin_rest_tail_bound(1000, 2.0) < twin_rest_tail_bound(100, 2.0));
}

TEST_CASE("integrand forms") {
  const auto ctx = make_context(7);
  const double pi = std::numbers::pi;
  const auto v = theorem34_integrand(2.0, ctx, 2000);
  const double x = 15;
  const double expect = twin_rest_direct(7, 2000, 2.0).real() / (pi * pi / 6) * x * x / 2;
  CHECK(v.value.real() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(v.value.imag()) < 1e-15 * std::abs(v.value.real()));
  CHECK_FALSE(v.conditioned);
  for (Complex s : {Complex{1.3, 4}, Complex{0.9, 17}, Complex{1.1, -250}}) {
    CAPTURE(s);
    CHECK(rel(theorem34_integrand(s, ctx, 2000).value, theorem34_integrand_factorwise(s, ctx, 2000)) < 1e-11);
  }
  const auto near_zero = theorem34_integrand({0.5 + 1e-8, 14.134725141734693790}, ctx, 2000);
  CHECK(near_zero.conditioned);
}

TEST_CASE("D factor and its removable singularities") {
  for (Complex s : {Complex{0.6, 0}, Complex{1.2, 3}, Complex{2, -1}}) {
    CHECK(rel(twin_d_factor_naive(7, s), twin_d_factor(7, s)) < 1e-13);
  }
  const double s0 = std::log(2.0) / std::log(5.0);
  CHECK_THROWS_AS(twin_d_factor_naive(5, s0), SingularFactorError);
  CHECK(twin_d_factor(5, s0).real() == doctest::Approx(0.25).epsilon(1e-14));
  for (std::uint64_t p : {3, 5, 7, 11}) {
    const auto r = pole_cancellation_limits(p);
    CHECK(r.s0 == doctest::Approx(std::log(2.0) / std::log(double(p))));
    CHECK(r.closed_form == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.left == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(r.right == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(std::abs(r.difference) < 1e-8);
  }
}

TEST_CASE("zero-free width and inverse zeta probe") {
  CHECK(zero_free_delta(0, 0.1) == doctest::Approx(1 - 0.1 / std::log(2.0)).epsilon(1e-15));
  const std::vector<double> ts{30.0, 14.134725141734693790};
  const auto rows = inverse_zeta_bound_probe(ts, 0.1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sigma == doctest::Approx(zero_free_delta(30, 0.1)));
  CHECK(rows[0].inv_abs == doctest::Approx(1 / std::abs(zeta({rows[0].sigma, 30}))).epsilon(1e-12));
  CHECK(rows[0].log_scale == doctest::Approx(std::log(32.0)));
  CHECK_FALSE(rows[0].flagged);
}

TEST_CASE("sample CSV") {
  const LineGrid grid{0.5, 14.0, 0.1, 3};
  const auto rows = zeta_samples(grid);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].t == doctest::Approx(14.1));
  std::ostringstream out;
  write_line_samples_csv(out, rows);
  CHECK(out.str().rfind("sigma,t,re,im,abs,denom_min\n", 0) == 0);
  const auto irows = integrand_samples(make_context(7), 500, grid);
  CHECK(irows.size() == 3);
}
