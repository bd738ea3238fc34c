#include "twinsieve/zeta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "twinsieve/errors.hpp"

namespace twinsieve {
namespace {

constexpr int kMaxOrder = 12;

// B_{2k} / (2k)! for k = 1..12.
const std::array<double, kMaxOrder>& bernoulli_coefficients() {
  static const std::array<double, kMaxOrder> coeffs = [] {
    const std::array<double, kMaxOrder> num = {1.0,       -1.0,     1.0,        -1.0,
                                               5.0,       -691.0,   7.0,        -3617.0,
                                               43867.0,   -174611.0, 854513.0,  -236364091.0};
    const std::array<double, kMaxOrder> den = {6.0,   30.0,  42.0,  30.0,  66.0,  2730.0,
                                               6.0,   510.0, 798.0, 330.0, 138.0, 2730.0};
    std::array<double, kMaxOrder> out{};
    double fact = 1.0;
    for (int k = 1; k <= kMaxOrder; ++k) {
      fact *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
      out[k - 1] = num[k - 1] / den[k - 1] / fact;
    }
    return out;
  }();
  return coeffs;
}

std::size_t cutoff_for(double t, const ZetaOptions& o) {
  const double want = std::ceil(o.cutoff_per_t * std::fabs(t));
  return std::max<std::size_t>(o.min_cutoff, want > 0 ? static_cast<std::size_t>(want) : 0);
}

void check_domain(Complex s, const ZetaOptions& o) {
  if (o.bernoulli_order < 1 || o.bernoulli_order > kMaxOrder) {
    throw DomainError("zeta: bernoulli_order must be in [1, 12]");
  }
  if (o.min_cutoff < 2) throw DomainError("zeta: min_cutoff must be >= 2");
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("zeta: non-finite argument");
  if (s.real() <= 1.0 - 2.0 * o.bernoulli_order) {
    throw DomainError("zeta: Re s too small for the configured expansion");
  }
}

// (e^z - 1) / z.
Complex expm1_over(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex term = 1.0, sum = 1.0;
    for (int k = 2; k < 24; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

// Everything after the partial sum over n < N.
Complex em_tail(Complex s, std::size_t N, int order) {
  const double logN = std::log(static_cast<double>(N));
  const Complex n_pow = std::exp(-s * logN);  // N^{-s}
  // (N^{1-s} - 1) / (s - 1) = -log N * expm1((1-s) log N) / ((1-s) log N)
  Complex out = -logN * expm1_over((1.0 - s) * logN);
  out += 0.5 * n_pow;
  const auto& b = bernoulli_coefficients();
  const double inv_n = 1.0 / static_cast<double>(N);
  const double inv_n2 = inv_n * inv_n;
  Complex poch = s;  // s (s+1) ... (s+2k-2)
  double n_scale = inv_n;
  for (int k = 1; k <= order; ++k) {
    out += b[k - 1] * poch * n_pow * n_scale;
    poch *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    n_scale *= inv_n2;
  }
  return out;
}

}  // namespace

bool zeta_validated_region(Complex s) { return s.real() >= 0.5 && std::fabs(s.imag()) <= 1000.0; }

Complex zeta_regular(Complex s, const ZetaOptions& options) {
  check_domain(s, options);
  const std::size_t N = cutoff_for(s.imag(), options);
  Complex sum = 0.0;
  for (std::size_t n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  return sum + em_tail(s, N, options.bernoulli_order);
}

ZetaEvaluation evaluate_zeta(Complex s, const ZetaOptions& options) {
  if (s == Complex(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
  return {zeta_regular(s, options) + 1.0 / (s - 1.0), zeta_validated_region(s)};
}

Complex zeta(Complex s, const ZetaOptions& options) { return evaluate_zeta(s, options).value; }

Complex reciprocal_zeta(Complex s, const ZetaOptions& options) {
  const Complex w = s - 1.0;
  return w / (1.0 + w * zeta_regular(s, options));
}

std::vector<Complex> zeta_regular_on_line(const LineGrid& grid, const ZetaOptions& options) {
  std::vector<Complex> out(grid.count);
  if (grid.count == 0) return out;
  check_domain(grid.s(0), options);
  check_domain(grid.s(grid.count - 1), options);

  std::size_t n_max = 0;
  for (std::size_t k : {std::size_t{0}, grid.count - 1}) n_max = std::max(n_max, cutoff_for(grid.t(k), options));
  if (grid.t0 < 0 && grid.t(grid.count - 1) > 0) n_max = std::max(n_max, cutoff_for(0, options));
  const std::size_t terms = n_max - 1;  // n = 1 .. n_max - 1

  std::vector<double> logn(terms), amp(terms), rot_re(terms), rot_im(terms), re(terms), im(terms);
  for (std::size_t i = 0; i < terms; ++i) {
    logn[i] = std::log(static_cast<double>(i + 1));
    amp[i] = std::exp(-grid.sigma * logn[i]);
    rot_re[i] = std::cos(grid.step * logn[i]);
    rot_im[i] = -std::sin(grid.step * logn[i]);
  }
  auto seed = [&](std::size_t from, std::size_t to, double t) {
    for (std::size_t i = from; i < to; ++i) {
      re[i] = amp[i] * std::cos(t * logn[i]);
      im[i] = -amp[i] * std::sin(t * logn[i]);
    }
  };

  constexpr std::size_t kReseed = 1024;
  std::size_t active = 0;
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double t = grid.t(k);
    const std::size_t N = cutoff_for(t, options);
    const std::size_t need = N - 1;
    if (k % kReseed == 0) {
      seed(0, need, t);
    } else {
      const std::size_t keep = std::min(active, need);
      for (std::size_t i = 0; i < keep; ++i) {
        const double a = re[i], b = im[i];
        re[i] = a * rot_re[i] - b * rot_im[i];
        im[i] = a * rot_im[i] + b * rot_re[i];
      }
      if (need > active) seed(active, need, t);
    }
    active = need;
    double sr = 0, si = 0;
    for (std::size_t i = 0; i < need; ++i) {
      sr += re[i];
      si += im[i];
    }
    out[k] = Complex(sr, si) + em_tail(grid.s(k), N, options.bernoulli_order);
  }
  return out;
}

}  // namespace twinsieve
