#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "twinsieve/pairsieve.hpp"
#include "twinsieve/zeta.hpp"

namespace twinsieve {

// Zeta-free part of the twin series truncated at primes <= cutoff:
//   P_j(s) zeta(s)^2 = (1 - 2^-s)^-2 / (prod_{3<=p<=p_j} (1 - p^-s)^2 prod_{p_j<p<=cutoff} D_p(s))
// where (1 - 2 p^-s) D_p(s) = (1 - p^-s)^2 removes the points p^s = 2 for p <= p_j.
// Evaluated as prod_{p_j<p<=cutoff} (1 - 2 p^-s) / prod_{p<=cutoff} (1 - p^-s)^2.
Complex twin_rest(std::uint64_t p_j, std::uint64_t cutoff, Complex s);
std::vector<Complex> twin_rest_on_line(std::uint64_t p_j, std::uint64_t cutoff, const LineGrid& grid);
// Bound on the relative error from the D factors with p > cutoff.
double twin_rest_tail_bound(std::uint64_t cutoff, double sigma);

struct IntegrandValue {
  Complex value;
  double denom_min = 0;  // smallest of |zeta(s)|, |1 - 2 p^-s| (2 < p <= p_j), |D(s)|
  bool conditioned = false;  // denom_min below 1e-6
};

// (1 - 2^-s)^-2 x^s / (s zeta(s) prod_{2<p<=p_j} (1 - 2/p^s) D(s)), D truncated at
// cutoff. Uses the combined factor internally. Re s > 1/2, s != 0.
IntegrandValue theorem34_integrand(Complex s, const SieveContext& ctx, std::uint64_t cutoff);
// Same expression multiplied out factor by factor; singular wherever p^s = 2.
Complex theorem34_integrand_factorwise(Complex s, const SieveContext& ctx, std::uint64_t cutoff);

// 1/(s - 1) - zeta(s)/s = (1 - zeta_regular(s)) / s, finite at s = 1.
// PoleError at s = 0.
Complex cor36_kernel(Complex s);

// (1 - 2 p^-s)(1 + 1/(p^s (p^s - 2))) as written; SingularFactorError at p^s = 2.
Complex twin_d_factor_naive(std::uint64_t p, Complex s);
// The same function in closed form (1 - p^-s)^2.
Complex twin_d_factor(std::uint64_t p, Complex s);

struct PoleLimitReport {
  std::uint64_t p = 0;
  double s0 = 0;  // log 2 / log p
  double left = 0, right = 0;  // extrapolated one-sided limits
  double difference = 0;
  double closed_form = 0;  // (1 - p^-s0)^2 = 1/4
};
// Richardson-extrapolated limits of the naive factor along the real axis.
PoleLimitReport pole_cancellation_limits(std::uint64_t p);

// delta_t = 1 - c / log(|t| + 2).
double zero_free_delta(double t, double c);

struct InverseZetaProbeRow {
  double t = 0;
  double sigma = 0;
  double inv_abs = 0;  // |1 / zeta(sigma + i t)|
  double log_scale = 0;  // log(|t| + 2)
  double ratio = 0;
  bool flagged = false;  // |zeta| < 1e-3
};
std::vector<InverseZetaProbeRow> inverse_zeta_bound_probe(std::span<const double> t_samples, double c);

// Rows of (sigma, t, re, im, abs, denom_min).
struct LineSample {
  double sigma = 0, t = 0;
  Complex value;
  double denom_min = 0;
};
std::vector<LineSample> zeta_samples(const LineGrid& grid);
std::vector<LineSample> integrand_samples(const SieveContext& ctx, std::uint64_t cutoff, const LineGrid& grid);
void write_line_samples_csv(std::ostream& out, const std::vector<LineSample>& rows);

}  // namespace twinsieve
