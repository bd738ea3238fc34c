#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "twinsieve/errors.hpp"
#include "twinsieve/legendre.hpp"
#include "twinsieve/perron.hpp"

using namespace twinsieve;

namespace {

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

// sum_{n <= x} f(n) with half weight on n = x.
template <class F>
double half_weight_sum(double x, F f) {
  double s = 0;
  for (std::uint64_t n = 1; static_cast<double>(n) <= x; ++n) {
    s += static_cast<double>(n) == x ? 0.5 * f(n) : f(n);
  }
  return s;
}

bool within(const PerronEstimate& e, double target) {
  return std::abs(e.value.real() - target) <= e.quad_error + e.truncation_bound + e.series_tail;
}

}  // namespace

TEST_CASE("targets against direct sums") {
  CHECK(line_target(zeta_series(), 10.5) == 10);
  CHECK(line_target(zeta_series(), 10) == 9.5);
  CHECK(line_target(unit_series(), 1) == 0.5);
  CHECK(line_target(unit_series(), 0.5) == 0);
  const double x = 40;
  CHECK(line_target(mobius_series(), x) == half_weight_sum(x, [](auto n) { return naive_mobius(n); }));
  const double divisor = half_weight_sum(x, [](std::uint64_t n) {
    double d = 0;
    for (std::uint64_t k = 1; k <= n; ++k) d += n % k == 0;
    return d;
  });
  CHECK(floor_target(zeta_series(), x) == divisor);
  double frac = 0;
  for (std::uint64_t n = 1; n < 40; ++n) frac += naive_mobius(n) * (x / n - std::floor(x / n));
  CHECK(fractional_target(mobius_series(), 40.0) == doctest::Approx(frac + 0.5 * (0 - naive_mobius(40))));
}

TEST_CASE("line integrals recover partial sums within their bounds") {
  for (double T : {200.0, 500.0}) {
    const ContourSpec c{1.5, T, 0, QuadratureRule::Simpson};
    for (double x : {10.5, 37.0, 100.25}) {
      CAPTURE(T);
      CAPTURE(x);
      const auto z = perron_line_integral(zeta_series(), x, c);
      CHECK(within(z, line_target(zeta_series(), x)));
      const auto m = perron_line_integral(mobius_series(), x, c);
      CHECK(within(m, line_target(mobius_series(), x)));
      CHECK(std::abs(z.value.imag()) <= 10 * z.quad_error + 1e-12);
    }
  }
  const auto u = perron_line_integral(unit_series(), 0.5, {1.5, 200, 0, QuadratureRule::Simpson});
  CHECK(within(u, 0.0));
}

TEST_CASE("midpoint rule and step halving") {
  const ContourSpec mid{1.5, 200, 0, QuadratureRule::Midpoint};
  const auto e = perron_line_integral(zeta_series(), 20.5, mid);
  CHECK(within(e, 20));
  const ContourSpec coarse{1.5, 200, 1.0, QuadratureRule::Simpson};
  const ContourSpec fine{1.5, 200, 0.25, QuadratureRule::Simpson};
  const auto a = perron_line_integral(zeta_series(), 20.5, coarse);
  const auto b = perron_line_integral(zeta_series(), 20.5, fine);
  CHECK(b.samples > a.samples);
  CHECK(b.quad_error < a.quad_error);
  CHECK_THROWS_AS(perron_line_integral(zeta_series(), 20.5, {1.5, 200, 3.0, QuadratureRule::Simpson}), DomainError);
}

TEST_CASE("truncation bound shrinks with T") {
  double prev = INFINITY;
  for (double T : {100.0, 300.0, 1000.0}) {
    const auto e = perron_line_integral(zeta_series(), 50.5, {1.5, T, 0, QuadratureRule::Simpson});
    CHECK(e.truncation_bound < prev);
    prev = e.truncation_bound;
  }
}

TEST_CASE("floor and fractional sums") {
  const ContourSpec c{1.5, 300, 0, QuadratureRule::Simpson};
  CHECK(within(perron_floor_sum(unit_series(), 7.5, c), 7));
  CHECK(within(perron_floor_sum(zeta_series(), 30.5, c), floor_target(zeta_series(), 30.5)));
  CHECK(within(perron_fractional_sum(mobius_series(), 30.5, c), fractional_target(mobius_series(), 30.5)));
  const auto zero = perron_line_integral(zero_series(), 30.5, c);
  CHECK(std::abs(zero.value) == 0.0);
}

TEST_CASE("twin floor sum reproduces the Legendre sum") {
  const auto ctx = make_context(7);
  const auto model = twin_series(7, 20000);
  const double legendre = static_cast<double>(legendre_sum(enumerate_smooth_squarefree(ctx)));
  CHECK(floor_target(model, 15.5) == legendre);
  const auto e = perron_floor_sum(model, 15.5, {1.5, 500, 0, QuadratureRule::Simpson});
  CHECK(within(e, legendre));
}

TEST_CASE("twin count driver") {
  CHECK_THROWS_AS(theorem34_pi2(make_context(5), {}, 1000), DomainError);
  const auto rec = theorem34_pi2(make_context(7), {1.5, 200, 0, QuadratureRule::Simpson}, 5000);
  CHECK(rec.x == 15);
  CHECK(rec.pi2_true == 7);
  CHECK(rec.R0 == 15);
  CHECK(rec.target == doctest::Approx(static_cast<double>(rec.legendre_sum) - rec.c_x / 2));
  CHECK(rec.integral_match);
}

TEST_CASE("bound calculator") {
  const auto r = theorem37_bound_calculator(1e6, 1.0);
  CHECK(std::log(r.T) == doctest::Approx(std::sqrt(std::log(1e6))).epsilon(1e-12));
  CHECK(std::log(r.T) == doctest::Approx(3.717).epsilon(1e-3));
  CHECK(r.middle == doctest::Approx(r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3]));
  CHECK(r.bound_over_x == doctest::Approx(r.bound / 1e6));
  CHECK(r.middle_at_argmin <= r.middle * (1 + 1e-12));
}

TEST_CASE("bound over x falls once log x exceeds 36 / c") {
  double prev = INFINITY;
  for (double x : {1e4, 1e6, 1e8, 1e10, 1e12}) {
    const double r = theorem37_bound_calculator(x, 10.0).bound_over_x;
    CHECK(r < prev);
    prev = r;
  }
  // With c = 1 the (log x)^3 factor still dominates below log x = 36.
  CHECK(theorem37_bound_calculator(1e12, 1.0).bound_over_x > theorem37_bound_calculator(1e6, 1.0).bound_over_x);
}

TEST_CASE("rectangle picks up the residue at 0") {
  const double x = 2;
  const auto f = [x](Complex s) { return std::pow(x, s) / s; };
  const auto r = rectangle_integral(f, {1.5, -0.5, 10}, 0.01);
  REQUIRE(r.segments.size() == 4);
  CHECK(r.segments[0].name == "right");
  CHECK(std::abs(r.total - 1.0) < 1e-8 + r.quad_error);
  const auto g = rectangle_integral(f, {1.5, 0.5, 10}, 0.01);
  CHECK(std::abs(g.total) < 1e-8 + g.quad_error);
}

TEST_CASE("contour scan flags the first zeros") {
  const std::vector<double> sigmas{0.55, 1.25};
  const auto rows = contour_shift_scan(make_context(7), sigmas, 30, 0.02, 2000);
  REQUIRE(rows.size() == 2);
  bool near_first = false, near_second = false;
  for (double t : rows[0].flagged_t) {
    near_first |= std::abs(std::abs(t) - 14.1347) < 0.2;
    near_second |= std::abs(std::abs(t) - 21.0220) < 0.2;
  }
  CHECK(near_first);
  CHECK(near_second);
  CHECK(rows[1].flagged_samples == 0);
  CHECK(rows[0].x_pow_sigma == doctest::Approx(std::pow(15.0, 0.55)));
  std::ostringstream out;
  write_scan_csv(out, rows);
  CHECK(out.str().rfind("sigma,T,step,value_re,value_im,quad_err,trunc_bound,flagged_samples,"
                        "max_abs_integrand,x_pow_sigma,series_tail,flagged_t\n",
                        0) == 0);
  CHECK_THROWS_AS(contour_shift_scan(make_context(7), std::vector<double>{0.4}, 30, 0.02, 2000), DomainError);
  CHECK(to_string(FlagKind::ZeroAdjacent) == "zero-adjacent");
}
