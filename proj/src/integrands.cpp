#include "twinsieve/integrands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "twinsieve/dirichlet.hpp"
#include "twinsieve/errors.hpp"
#include "twinsieve/primes.hpp"

namespace twinsieve {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex power_neg(std::uint64_t p, Complex s) { return std::exp(-s * std::log(static_cast<double>(p))); }

double log_x(const SieveContext& ctx) { return std::log(static_cast<double>(ctx.x_value())); }

// min over 2 < p <= p_j of |1 - 2 p^-s|.
double finite_factor_min(std::uint64_t p_j, Complex s) {
  double m = kInf;
  for_each_prime(2, p_j, [&](std::uint64_t p) { m = std::min(m, std::abs(1.0 - 2.0 * power_neg(p, s))); });
  return m;
}

// |prod_{2<p<=cutoff} D_p(s)|, infinite on a pole.
double d_abs(std::uint64_t cutoff, Complex s) {
  Complex num = 1.0, den = 1.0;
  for_each_prime(2, cutoff, [&](std::uint64_t p) {
    const Complex u = power_neg(p, s);
    num *= (1.0 - u) * (1.0 - u);
    den *= 1.0 - 2.0 * u;
  });
  return std::abs(den) == 0 ? kInf : std::abs(num / den);
}

// Neville extrapolation to h = 0.
double extrapolate_to_zero(const std::vector<double>& h, std::vector<double> f) {
  const std::size_t n = h.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      f[i] = (h[i + m] * f[i] - h[i] * f[i + 1]) / (h[i + m] - h[i]);
    }
  }
  return f[0];
}

}  // namespace

Complex twin_rest(std::uint64_t p_j, std::uint64_t cutoff, Complex s) {
  if (cutoff < p_j) throw DomainError("twin_rest: cutoff below p_j");
  Complex twin = 1.0, base = 1.0;
  for_each_prime(1, cutoff, [&](std::uint64_t p) {
    const Complex u = power_neg(p, s);
    base *= 1.0 - u;
    if (p > p_j) twin *= 1.0 - 2.0 * u;
  });
  return twin / (base * base);
}

std::vector<Complex> twin_rest_on_line(std::uint64_t p_j, std::uint64_t cutoff, const LineGrid& grid) {
  if (cutoff < p_j) throw DomainError("twin_rest: cutoff below p_j");
  std::vector<double> logp, amp, rot_re, rot_im, re, im;
  std::size_t first_twin = 0;
  for_each_prime(1, cutoff, [&](std::uint64_t p) {
    const double l = std::log(static_cast<double>(p));
    logp.push_back(l);
    amp.push_back(std::exp(-grid.sigma * l));
    rot_re.push_back(std::cos(grid.step * l));
    rot_im.push_back(-std::sin(grid.step * l));
    if (p <= p_j) ++first_twin;
  });
  const std::size_t n = logp.size();
  re.resize(n);
  im.resize(n);

  constexpr std::size_t kReseed = 1024;
  constexpr std::size_t kLanes = 4;
  std::vector<Complex> out(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    if (k % kReseed == 0) {
      const double t = grid.t(k);
      for (std::size_t i = 0; i < n; ++i) {
        re[i] = amp[i] * std::cos(t * logp[i]);
        im[i] = -amp[i] * std::sin(t * logp[i]);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double a = re[i], b = im[i];
        re[i] = a * rot_re[i] - b * rot_im[i];
        im[i] = a * rot_im[i] + b * rot_re[i];
      }
    }
    // Independent partial products per lane shorten the dependency chain.
    Complex base[kLanes], twin[kLanes];
    for (std::size_t l = 0; l < kLanes; ++l) base[l] = twin[l] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex u(re[i], im[i]);
      base[i % kLanes] *= 1.0 - u;
      if (i >= first_twin) twin[i % kLanes] *= 1.0 - 2.0 * u;
    }
    Complex b = 1.0, w = 1.0;
    for (std::size_t l = 0; l < kLanes; ++l) {
      b *= base[l];
      w *= twin[l];
    }
    out[k] = w / (b * b);
  }
  return out;
}

double twin_rest_tail_bound(std::uint64_t cutoff, double sigma) {
  if (sigma <= 0.5) return kInf;
  const double logP = std::log(static_cast<double>(cutoff));
  const double q = 2.0 * std::exp(-sigma * logP);
  if (q >= 1.0) return kInf;
  // 1/D over the omitted primes: |1/(1+g) - 1| <= |g| / (1 - |g|) per factor.
  const double B = std::exp((1.0 - 2.0 * sigma) * logP) / ((2.0 * sigma - 1.0) * (1.0 - q));
  return B < 0.5 ? std::expm1(B / (1.0 - B)) : kInf;
}

IntegrandValue theorem34_integrand(Complex s, const SieveContext& ctx, std::uint64_t cutoff) {
  if (s.real() <= 0.5) throw DomainError("theorem34_integrand: Re s must exceed 1/2");
  if (s == Complex(0.0, 0.0)) throw PoleError("theorem34_integrand: s = 0");
  const Complex zinv = reciprocal_zeta(s);
  IntegrandValue v;
  v.value = twin_rest(ctx.p_j, cutoff, s) * zinv * std::exp(s * log_x(ctx)) / s;
  const double zeta_abs = zinv == Complex(0.0, 0.0) ? kInf : 1.0 / std::abs(zinv);
  v.denom_min = std::min({zeta_abs, finite_factor_min(ctx.p_j, s), d_abs(cutoff, s)});
  v.conditioned = v.denom_min < 1e-6;
  return v;
}

Complex theorem34_integrand_factorwise(Complex s, const SieveContext& ctx, std::uint64_t cutoff) {
  const Complex two = 1.0 - std::exp(-s * std::log(2.0));
  const Complex finite = euler_product({EulerProductKind::FiniteFactor, ctx.p_j, cutoff, false}, s).value;
  const Complex d = euler_product({EulerProductKind::D, 2, cutoff, false}, s).value;
  return std::exp(s * log_x(ctx)) / (two * two * s * zeta(s) * finite * d);
}

Complex cor36_kernel(Complex s) {
  if (s == Complex(0.0, 0.0)) throw PoleError("cor36_kernel: s = 0");
  return (1.0 - zeta_regular(s)) / s;
}

Complex twin_d_factor_naive(std::uint64_t p, Complex s) {
  const Complex ps = std::exp(s * std::log(static_cast<double>(p)));
  if (std::abs(ps - 2.0) == 0.0) throw SingularFactorError("twin_d_factor_naive: p^s = 2");
  return (1.0 - 2.0 / ps) * (1.0 + 1.0 / (ps * (ps - 2.0)));
}

Complex twin_d_factor(std::uint64_t p, Complex s) {
  const Complex u = power_neg(p, s);
  return (1.0 - u) * (1.0 - u);
}

PoleLimitReport pole_cancellation_limits(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw DomainError("pole_cancellation_limits: p must be an odd prime");
  PoleLimitReport r;
  r.p = p;
  r.s0 = std::log(2.0) / std::log(static_cast<double>(p));
  std::vector<double> h, left, right;
  for (int k = 0; k < 6; ++k) {
    const double step = 1e-3 * std::ldexp(1.0, -k);
    h.push_back(step);
    left.push_back(twin_d_factor_naive(p, r.s0 - step).real());
    right.push_back(twin_d_factor_naive(p, r.s0 + step).real());
  }
  r.left = extrapolate_to_zero(h, left);
  r.right = extrapolate_to_zero(h, right);
  r.difference = std::fabs(r.left - r.right);
  r.closed_form = twin_d_factor(p, r.s0).real();
  return r;
}

double zero_free_delta(double t, double c) {
  if (!(c > 0)) throw DomainError("zero_free_delta: c must be positive");
  return 1.0 - c / std::log(std::fabs(t) + 2.0);
}

std::vector<InverseZetaProbeRow> inverse_zeta_bound_probe(std::span<const double> t_samples, double c) {
  std::vector<InverseZetaProbeRow> rows;
  rows.reserve(t_samples.size());
  for (double t : t_samples) {
    InverseZetaProbeRow r;
    r.t = t;
    r.sigma = zero_free_delta(t, c);
    r.inv_abs = std::abs(reciprocal_zeta({r.sigma, t}));
    r.log_scale = std::log(std::fabs(t) + 2.0);
    r.ratio = r.inv_abs / r.log_scale;
    r.flagged = r.inv_abs > 1e3;
    rows.push_back(r);
  }
  return rows;
}

std::vector<LineSample> zeta_samples(const LineGrid& grid) {
  const auto eta = zeta_regular_on_line(grid);
  std::vector<LineSample> rows(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const Complex s = grid.s(k);
    const Complex w = s - 1.0;
    rows[k].sigma = grid.sigma;
    rows[k].t = grid.t(k);
    rows[k].value = w == Complex(0.0, 0.0) ? Complex(kInf, 0.0) : eta[k] + 1.0 / w;
    rows[k].denom_min = std::abs(rows[k].value);
  }
  return rows;
}

std::vector<LineSample> integrand_samples(const SieveContext& ctx, std::uint64_t cutoff, const LineGrid& grid) {
  const auto eta = zeta_regular_on_line(grid);
  const auto rest = twin_rest_on_line(ctx.p_j, cutoff, grid);
  const double lx = log_x(ctx);
  std::vector<LineSample> rows(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const Complex s = grid.s(k);
    const Complex w = s - 1.0;
    const Complex zinv = w / (1.0 + w * eta[k]);
    rows[k].sigma = grid.sigma;
    rows[k].t = grid.t(k);
    rows[k].value = rest[k] * zinv * std::exp(s * lx) / s;
    const double zeta_abs = zinv == Complex(0.0, 0.0) ? kInf : 1.0 / std::abs(zinv);
    rows[k].denom_min = std::min(zeta_abs, finite_factor_min(ctx.p_j, s));
  }
  return rows;
}

void write_line_samples_csv(std::ostream& out, const std::vector<LineSample>& rows) {
  const auto old = out.precision(17);
  out << "sigma,t,re,im,abs,denom_min\n";
  for (const auto& r : rows) {
    out << r.sigma << ',' << r.t << ',' << r.value.real() << ',' << r.value.imag() << ','
        << std::abs(r.value) << ',' << r.denom_min << '\n';
  }
  out.precision(old);
}

}  // namespace twinsieve
