#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace twinsieve {

using Complex = std::complex<double>;

// s = sigma + i t.
struct ComplexPoint {
  double sigma = 0;
  double t = 0;

  Complex s() const { return {sigma, t}; }
};

struct ZetaOptions {
  // Euler-Maclaurin cutoff N = max(min_cutoff, ceil(cutoff_per_t * |t|)).
  std::size_t min_cutoff = 50;
  double cutoff_per_t = 2.0;
  int bernoulli_order = 12;  // correction terms B_2 .. B_{2 * order}, at most 12
};

struct ZetaEvaluation {
  Complex value;
  bool validated = true;  // sigma >= 1/2 and |t| <= 1000
};

// Riemann zeta by Euler-Maclaurin summation. Throws PoleError at s = 1 and
// DomainError far left of the critical strip, where the expansion breaks down.
ZetaEvaluation evaluate_zeta(Complex s, const ZetaOptions& options = {});
Complex zeta(Complex s, const ZetaOptions& options = {});

// zeta(s) - 1/(s - 1); entire, equal to Euler's gamma at s = 1.
Complex zeta_regular(Complex s, const ZetaOptions& options = {});

// 1 / zeta(s), continued through s = 1 where it vanishes.
Complex reciprocal_zeta(Complex s, const ZetaOptions& options = {});

bool zeta_validated_region(Complex s);

// Uniform grid t_k = t0 + k * step, k in [0, count), on the line Re s = sigma.
struct LineGrid {
  double sigma = 0;
  double t0 = 0;
  double step = 0;
  std::size_t count = 0;

  double t(std::size_t k) const { return t0 + static_cast<double>(k) * step; }
  Complex s(std::size_t k) const { return {sigma, t(k)}; }
};

// zeta_regular along a grid. The n^{-s} terms advance by a fixed phase
// rotation per step (reseeded periodically), so the cost per sample is one
// complex multiply per Euler-Maclaurin term.
std::vector<Complex> zeta_regular_on_line(const LineGrid& grid, const ZetaOptions& options = {});

}  // namespace twinsieve
