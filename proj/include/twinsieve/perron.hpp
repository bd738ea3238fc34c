#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twinsieve/bigint.hpp"
#include "twinsieve/integrands.hpp"
#include "twinsieve/pairsieve.hpp"
#include "twinsieve/zeta.hpp"

namespace twinsieve {

enum class QuadratureRule { Midpoint, Simpson };

struct ContourSpec {
  double sigma = 1.5;
  double T = 100;
  double step = 0;  // 0 picks default_step(x, T); must not exceed T / 100
  QuadratureRule rule = QuadratureRule::Simpson;
};

// min(T / 100, 0.5 / (log x + log 2T + 1)): resolves the x^{it} and n^{-it}
// oscillations of the integrands used here.
double default_step(double x, double T);

enum class FlagKind { Refined, Excluded, ZeroAdjacent };

struct FlaggedSample {
  double t = 0;
  double zeta_abs = 0;
  FlagKind kind = FlagKind::Refined;
};

std::string to_string(FlagKind kind);

struct PerronEstimate {
  Complex value;               // (1 / 2 pi i) * integral over sigma - iT .. sigma + iT
  double quad_error = 0;       // step-halving estimate
  double truncation_bound = 0; // explicit remainder sum, constant 1; inf when sigma <= 1
  double series_tail = 0;      // effect of truncating the Euler product inside A(s)
  double step = 0;
  std::size_t samples = 0;
  double max_abs_integrand = 0;
  double abs_integral = 0;     // (1 / 2 pi) * integral of |f| dt
  std::vector<FlaggedSample> flags;
  std::size_t excluded = 0;
};

// A(s) = zeta(s)^zeta_power * rest(s) with coefficients a_n, plus majorant
// series used by the remainder bounds:
//   line_majorant(n)  >= |a_n|,             sum m_n n^-sigma = line_series(sigma)
//   floor_majorant(n) >= sum_{d | n} |a_d|, sum m_n n^-sigma = floor_series(sigma)
struct SeriesModel {
  std::string name;
  int zeta_power = 0;
  std::function<Complex(Complex)> rest;  // empty means 1
  std::function<std::vector<Complex>(const LineGrid&)> rest_on_line;
  std::function<double(double)> rest_tail_bound;  // relative; empty means exact
  std::function<std::vector<double>(std::uint64_t)> coefficients;  // a_0 .. a_n (a_0 unused)
  std::function<std::vector<double>(std::uint64_t)> line_majorant;
  std::function<double(double)> line_series;
  std::function<std::vector<double>(std::uint64_t)> floor_majorant;
  std::function<double(double)> floor_series;
};

SeriesModel unit_series();     // a_n = [n = 1]
SeriesModel zeta_series();     // a_n = 1
SeriesModel mobius_series();   // a_n = mu(n)
SeriesModel zero_series();     // a_n = 0
// a_n = mu(n) 2^nu(n) for n free of primes <= p_j, else 0; Euler product cut at cutoff.
SeriesModel twin_series(std::uint64_t p_j, std::uint64_t cutoff);

struct PerronOptions {
  double zero_threshold = 1e-3;    // |zeta| below this: refine at step / 8, else exclude
  double adjacent_threshold = 0.1; // local minima of |zeta| below this are reported
  unsigned threads = 0;            // 0: default_thread_count()
};

// sum'_{n <= x} a_n, sum' a_n floor(x/n), sum_{n < x} a_n {x/n};
// primes mark the half weight at n = x.
PerronEstimate perron_line_integral(const SeriesModel& model, double x, const ContourSpec& contour,
                                    const PerronOptions& options = {});
PerronEstimate perron_floor_sum(const SeriesModel& model, double x, const ContourSpec& contour,
                                const PerronOptions& options = {});
PerronEstimate perron_fractional_sum(const SeriesModel& model, double x, const ContourSpec& contour,
                                     const PerronOptions& options = {});

// Exact values the three integrals approximate, including the half-weight
// corrections at integer x.
double line_target(const SeriesModel& model, double x);
double floor_target(const SeriesModel& model, double x);
double fractional_target(const SeriesModel& model, double x);

struct Theorem34Record {
  std::uint64_t p_j = 0;
  std::uint64_t x = 0;
  ContourSpec contour;
  std::uint64_t cutoff = 0;
  BigInt R0;
  BigInt legendre_sum;
  double c_x = 0;     // sum_{d | x} a_d, weight of the boundary term
  double target = 0;  // legendre_sum - c_x / 2
  PerronEstimate integral;
  std::uint64_t pi2_true = 0;
  double estimate = 0;             // R0 + Re integral
  double residual = 0;             // pi2_true - estimate
  double error_term_zeta = 0;      // zeta(sigma)^3 x^sigma / T
  double error_term_log = 0;       // x log^3 x / T
  double combined_error = 0;       // quad + truncation + series tail + both terms above
  bool match = false;              // |residual| <= combined_error
  double integral_residual = 0;    // Re integral - target
  double integral_error = 0;       // quad + truncation + series tail
  bool integral_match = false;
};

Theorem34Record theorem34_pi2(const SieveContext& ctx, const ContourSpec& contour, std::uint64_t cutoff,
                              const PerronOptions& options = {});

struct Cor36Record {
  std::uint64_t p_j = 0;
  std::uint64_t x = 0;
  ContourSpec contour;
  std::uint64_t cutoff = 0;
  BigRational minus_RE;   // exact
  double boundary = 0;    // (c_x - a_x) / 2
  double target = 0;      // -R_E + boundary
  PerronEstimate integral;
  double residual = 0;    // Re integral - target
  double error = 0;       // quad + truncation + series tail
  bool match = false;
};

Cor36Record cor36_fractional_sum(const SieveContext& ctx, const ContourSpec& contour, std::uint64_t cutoff,
                                 const PerronOptions& options = {});

struct ContourScanRow {
  double sigma = 0, T = 0, step = 0;
  Complex value;
  double quad_err = 0;
  double trunc_bound = 0;
  std::size_t flagged_samples = 0;
  double max_abs_integrand = 0;
  double x_pow_sigma = 0;
  double series_tail = 0;
  std::vector<double> flagged_t;
};

// Twin-count integrand integrated over |t| <= T for each sigma in (1/2, 2].
std::vector<ContourScanRow> contour_shift_scan(const SieveContext& ctx, std::span<const double> sigmas, double T,
                                               double step, std::uint64_t cutoff, const PerronOptions& options = {});
void write_scan_csv(std::ostream& out, const std::vector<ContourScanRow>& rows);

struct Theorem37Record {
  double x = 0, c = 0, a = 0, b = 0, alpha = 0;
  double T = 0;
  double terms[4] = {0, 0, 0, 0};
  double middle = 0;        // sum of the four terms
  double bound = 0;         // x exp(-sqrt(c log x)) (log x)^3
  double bound_over_x = 0;
  double balance = 0;       // largest / smallest term at T
  double T_argmin = 0;      // minimiser of the middle section over a log-spaced T grid
  double middle_at_argmin = 0;
  double argmin_ratio = 0;  // log T_argmin / log T
};

// T defaults to exp(sqrt(c log x)); b defaults to c.
Theorem37Record theorem37_bound_calculator(double x, double c, std::optional<double> T = std::nullopt,
                                           double a = 0.0, std::optional<double> b = std::nullopt,
                                           double alpha = 1.5);

struct RectangleSpec {
  double sigma_right = 1.5;
  double sigma_left = 0.5;
  double T = 10;
};

struct SegmentIntegral {
  std::string name;  // right, top, left, bottom
  Complex value;     // contribution to (1 / 2 pi i) * contour integral
  double quad_error = 0;
};

struct RectangleIntegral {
  std::vector<SegmentIntegral> segments;
  Complex total;
  double quad_error = 0;
};

// Counter-clockwise boundary integral of f, Simpson with step halving per segment.
RectangleIntegral rectangle_integral(const std::function<Complex(Complex)>& f, const RectangleSpec& rect,
                                     double step);

}  // namespace twinsieve
