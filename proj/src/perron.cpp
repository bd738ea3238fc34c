#include "twinsieve/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "twinsieve/errors.hpp"
#include "twinsieve/legendre.hpp"
#include "twinsieve/primes.hpp"
#include "twinsieve/threads.hpp"

namespace twinsieve {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Kernel { Line, Floor, Fractional };

// Neumaier-compensated complex sum.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(re_, cre_, v.real());
    add_part(im_, cim_, v.imag());
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double v) {
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

double real_zeta(double sigma) { return zeta({sigma, 0.0}).real(); }

ArithmeticFunctionCache cache_for(std::uint64_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("series coefficients: range too large");
  return ArithmeticFunctionCache(static_cast<std::uint32_t>(std::max<std::uint64_t>(n, 1)));
}

std::vector<double> divisor_count_table(std::uint64_t n) {
  std::vector<double> d(n + 1, 0.0);
  for (std::uint64_t i = 1; i <= n; ++i) {
    for (std::uint64_t j = i; j <= n; j += i) d[j] += 1.0;
  }
  return d;
}

bool is_integer(double x) { return x == std::floor(x); }

// Evaluates the integrand A(s) K(s) x^s / s on grids and at single points.
class Integrand {
 public:
  Integrand(const SeriesModel& model, double x, Kernel kernel)
      : model_(model), lx_(std::log(x)), kernel_(kernel),
        zeta_exp_(model.zeta_power + (kernel == Kernel::Floor ? 1 : 0)),
        needs_eta_(zeta_exp_ != 0 || kernel == Kernel::Fractional) {}

  bool tracks_zeta() const { return needs_eta_; }

  void line(const LineGrid& g, std::vector<Complex>& f, std::vector<double>& zabs) const {
    std::vector<Complex> eta, rest;
    if (needs_eta_) eta = zeta_regular_on_line(g);
    if (model_.rest_on_line) rest = model_.rest_on_line(g);
    f.resize(g.count);
    zabs.resize(g.count);
    for (std::size_t k = 0; k < g.count; ++k) {
      const Complex s = g.s(k);
      const Complex r = model_.rest_on_line ? rest[k] : (model_.rest ? model_.rest(s) : Complex(1.0));
      f[k] = combine(s, needs_eta_ ? eta[k] : Complex(0.0), r, zabs[k]);
    }
  }

  Complex point(Complex s, double& zabs) const {
    const Complex eta = needs_eta_ ? zeta_regular(s) : Complex(0.0);
    const Complex r = model_.rest ? model_.rest(s) : Complex(1.0);
    return combine(s, eta, r, zabs);
  }

 private:
  Complex combine(Complex s, Complex eta, Complex rest, double& zabs) const {
    Complex v = rest * std::exp(s * lx_) / s;
    zabs = kInf;
    if (needs_eta_) {
      const Complex w = s - 1.0;
      const Complex den = 1.0 + w * eta;
      const Complex zinv = w / den;
      if (w != Complex(0.0)) zabs = std::abs(den) / std::abs(w);
      if (zeta_exp_ > 0 && zinv == Complex(0.0)) throw PoleError("perron integrand: zeta pole on the contour");
      for (int i = 0; i < std::abs(zeta_exp_); ++i) v = zeta_exp_ > 0 ? v / zinv : v * zinv;
      if (kernel_ == Kernel::Fractional) v *= 1.0 - eta;
    }
    return v;
  }

  const SeriesModel& model_;
  double lx_;
  Kernel kernel_;
  int zeta_exp_;
  bool needs_eta_;
};

// Samples f on the grid, splitting it into contiguous chunks across threads.
void sample(const Integrand& in, const LineGrid& g, unsigned threads, std::vector<Complex>& f,
            std::vector<double>& zabs) {
  f.assign(g.count, 0.0);
  zabs.assign(g.count, kInf);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, g.count / 4096));
  const std::size_t per = (g.count + chunks - 1) / chunks;
  auto work = [&](std::size_t c) {
    const std::size_t lo = c * per, hi = std::min(g.count, lo + per);
    if (lo >= hi) return;
    const LineGrid sub{g.sigma, g.t(lo), g.step, hi - lo};
    std::vector<Complex> fs;
    std::vector<double> zs;
    in.line(sub, fs, zs);
    std::copy(fs.begin(), fs.end(), f.begin() + static_cast<std::ptrdiff_t>(lo));
    std::copy(zs.begin(), zs.end(), zabs.begin() + static_cast<std::ptrdiff_t>(lo));
  };
  if (chunks == 1) {
    work(0);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(work, c);
}

// Flags small |zeta| samples: refined by an 8-point cell average, or excluded.
void treat_zeros(const Integrand& in, const LineGrid& g, const PerronOptions& o, std::vector<Complex>& f,
                 const std::vector<double>& zabs, PerronEstimate& est) {
  if (!in.tracks_zeta()) return;
  for (std::size_t k = 0; k < g.count; ++k) {
    if (zabs[k] < o.zero_threshold) {
      Complex avg = 0.0;
      bool ok = true;
      for (int j = 0; j < 8; ++j) {
        double z;
        avg += in.point({g.sigma, g.t(k) + (j - 3.5) * g.step / 8.0}, z);
        ok = ok && z >= o.zero_threshold;
      }
      if (ok) {
        f[k] = avg / 8.0;
        est.flags.push_back({g.t(k), zabs[k], FlagKind::Refined});
      } else {
        f[k] = 0.0;
        ++est.excluded;
        est.flags.push_back({g.t(k), zabs[k], FlagKind::Excluded});
      }
    } else if (k > 0 && k + 1 < g.count && zabs[k] < o.adjacent_threshold && zabs[k] < zabs[k - 1] &&
               zabs[k] <= zabs[k + 1]) {
      est.flags.push_back({g.t(k), zabs[k], FlagKind::ZeroAdjacent});
    }
  }
}

// Simpson sums with step h and 2h over samples f_0 .. f_n, n divisible by 4.
std::pair<Complex, Complex> simpson_pair(const std::vector<Complex>& f, double h) {
  const std::size_t n = f.size() - 1;
  CompensatedSum fine, coarse;
  for (std::size_t k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    fine.add(w * f[k]);
    if (k % 2 == 0) {
      const std::size_t m = k / 2;
      const double wc = (m == 0 || m == n / 2) ? 1.0 : (m % 2 ? 4.0 : 2.0);
      coarse.add(wc * f[k]);
    }
  }
  return {fine.value() * (h / 3.0), coarse.value() * (2.0 * h / 3.0)};
}

std::size_t interval_count(double length, double step) {
  auto n = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
  n = std::max<std::size_t>(n, 4);
  return (n + 3) / 4 * 4;
}

PerronEstimate integrate(const SeriesModel& model, double x, const ContourSpec& c, Kernel kernel,
                         const PerronOptions& o) {
  if (!(x > 0)) throw DomainError("perron: x must be positive");
  if (!(c.T > 0)) throw DomainError("perron: T must be positive");
  if (!(c.sigma > 0)) throw DomainError("perron: sigma must be positive");
  if (c.step < 0 || c.step > c.T / 100.0) throw DomainError("perron: step must lie in (0, T/100]");
  if (kernel == Kernel::Fractional && !(c.sigma > 1)) throw DomainError("perron: fractional sum needs sigma > 1");
  const double want = c.step > 0 ? c.step : default_step(x, c.T);
  const std::size_t n = interval_count(2.0 * c.T, want);
  const double h = 2.0 * c.T / static_cast<double>(n);
  const unsigned threads = o.threads ? o.threads : default_thread_count();
  const Integrand in(model, x, kernel);

  PerronEstimate est;
  est.step = h;
  std::vector<Complex> f;
  std::vector<double> zabs;
  Complex fine, coarse;
  CompensatedSum abs_sum;
  double abs_scale = 0;
  if (c.rule == QuadratureRule::Simpson) {
    const LineGrid g{c.sigma, -c.T, h, n + 1};
    sample(in, g, threads, f, zabs);
    treat_zeros(in, g, o, f, zabs, est);
    std::tie(fine, coarse) = simpson_pair(f, h);
    std::vector<Complex> mag(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) mag[k] = std::abs(f[k]);
    abs_scale = simpson_pair(mag, h).first.real();
    est.samples = g.count;
  } else {
    const LineGrid g{c.sigma, -c.T + h / 2, h, n};
    sample(in, g, threads, f, zabs);
    treat_zeros(in, g, o, f, zabs, est);
    const LineGrid gc{c.sigma, -c.T + h, 2 * h, n / 2};
    std::vector<Complex> fc;
    std::vector<double> zc;
    sample(in, gc, threads, fc, zc);
    PerronEstimate scratch;
    treat_zeros(in, gc, o, fc, zc, scratch);
    CompensatedSum a, b;
    for (const auto& v : f) a.add(v);
    for (const auto& v : fc) b.add(v);
    fine = a.value() * h;
    coarse = b.value() * (2 * h);
    for (const auto& v : f) abs_sum.add(std::abs(v));
    abs_scale = abs_sum.value().real() * h;
    est.samples = g.count + gc.count;
  }
  for (const auto& v : f) est.max_abs_integrand = std::max(est.max_abs_integrand, std::abs(v));
  const double richardson = c.rule == QuadratureRule::Simpson ? 15.0 : 3.0;
  est.value = fine / kTwoPi;
  est.quad_error = std::abs(fine - coarse) / richardson / kTwoPi;
  est.abs_integral = abs_scale / kTwoPi;
  const double rel = model.rest_tail_bound ? model.rest_tail_bound(c.sigma) : 0.0;
  est.series_tail = rel == 0.0 ? 0.0 : rel * est.abs_integral;
  return est;
}

// sum_{n <= 10x, n != x} (x/n)^sigma m_n min(1, 1/(T |log(x/n)|)) plus the tail
// beyond 10x through the closed-form majorant series.
double remainder_sum(const std::vector<double>& m, double series, double x, double sigma, double T) {
  const std::size_t nmax = m.size() - 1;
  double explicit_part = 0, head = 0;
  for (std::size_t n = 1; n <= nmax; ++n) {
    if (m[n] == 0) continue;
    const double dn = static_cast<double>(n);
    head += m[n] * std::pow(dn, -sigma);
    if (dn == x) continue;
    const double lg = std::fabs(std::log(x / dn));
    explicit_part += std::pow(x / dn, sigma) * m[n] * std::min(1.0, 1.0 / (T * lg));
  }
  const double rest = std::max(series - head, 0.0) + 1e-15 * series;
  return explicit_part + std::pow(x, sigma) / (T * std::log(10.0)) * rest;
}

std::uint64_t remainder_range(double x) { return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(10.0 * x)); }

double coefficient_at(const SeriesModel& model, std::uint64_t n) { return model.coefficients(n)[n]; }

double divisor_sum_at(const SeriesModel& model, std::uint64_t n) {
  const auto a = model.coefficients(n);
  double s = 0;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) s += a[d];
  }
  return s;
}

double line_bound(const SeriesModel& model, double x, const ContourSpec& c) {
  if (c.sigma <= 1.0) return kInf;
  return remainder_sum(model.line_majorant(remainder_range(x)), model.line_series(c.sigma), x, c.sigma, c.T);
}

double floor_bound(const SeriesModel& model, double x, const ContourSpec& c) {
  if (c.sigma <= 1.0) return kInf;
  return remainder_sum(model.floor_majorant(remainder_range(x)), model.floor_series(c.sigma), x, c.sigma, c.T);
}

double boundary_error(double weight, double sigma, double T) { return std::fabs(weight) * sigma / (std::numbers::pi * T); }

}  // namespace

double default_step(double x, double T) {
  return std::min(T / 100.0, 0.5 / (std::fabs(std::log(x)) + std::log(2.0 * T) + 1.0));
}

std::string to_string(FlagKind kind) {
  switch (kind) {
    case FlagKind::Refined: return "refined";
    case FlagKind::Excluded: return "excluded";
    case FlagKind::ZeroAdjacent: return "zero-adjacent";
  }
  return "unknown";
}

SeriesModel unit_series() {
  SeriesModel m;
  m.name = "unit";
  m.coefficients = [](std::uint64_t n) {
    std::vector<double> a(n + 1, 0.0);
    if (n >= 1) a[1] = 1.0;
    return a;
  };
  m.line_majorant = m.coefficients;
  m.line_series = [](double) { return 1.0; };
  m.floor_majorant = [](std::uint64_t n) {
    std::vector<double> a(n + 1, 1.0);
    a[0] = 0;
    return a;
  };
  m.floor_series = real_zeta;
  return m;
}

SeriesModel zeta_series() {
  SeriesModel m;
  m.name = "zeta";
  m.zeta_power = 1;
  m.coefficients = [](std::uint64_t n) {
    std::vector<double> a(n + 1, 1.0);
    a[0] = 0;
    return a;
  };
  m.line_majorant = m.coefficients;
  m.line_series = real_zeta;
  m.floor_majorant = divisor_count_table;
  m.floor_series = [](double s) { return std::pow(real_zeta(s), 2); };
  return m;
}

SeriesModel mobius_series() {
  SeriesModel m;
  m.name = "mobius";
  m.zeta_power = -1;
  m.coefficients = [](std::uint64_t n) {
    const auto cache = cache_for(n);
    std::vector<double> a(n + 1, 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) a[k] = cache.mu(k);
    return a;
  };
  m.line_majorant = [](std::uint64_t n) {
    const auto cache = cache_for(n);
    std::vector<double> a(n + 1, 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) a[k] = std::abs(cache.mu(k));
    return a;
  };
  m.line_series = [](double s) { return real_zeta(s) / real_zeta(2 * s); };
  m.floor_majorant = [](std::uint64_t n) {
    const auto cache = cache_for(n);
    std::vector<double> a(n + 1, 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) a[k] = std::ldexp(1.0, cache.nu(k));
    return a;
  };
  m.floor_series = [](double s) { return std::pow(real_zeta(s), 2) / real_zeta(2 * s); };
  return m;
}

SeriesModel zero_series() {
  SeriesModel m;
  m.name = "zero";
  m.rest = [](Complex) { return Complex(0.0); };
  m.coefficients = [](std::uint64_t n) { return std::vector<double>(n + 1, 0.0); };
  m.line_majorant = m.coefficients;
  m.line_series = [](double) { return 0.0; };
  m.floor_majorant = m.coefficients;
  m.floor_series = [](double) { return 0.0; };
  return m;
}

SeriesModel twin_series(std::uint64_t p_j, std::uint64_t cutoff) {
  SeriesModel m;
  m.name = "twin";
  m.zeta_power = -2;
  m.rest = [=](Complex s) { return twin_rest(p_j, cutoff, s); };
  m.rest_on_line = [=](const LineGrid& g) { return twin_rest_on_line(p_j, cutoff, g); };
  m.rest_tail_bound = [=](double sigma) { return twin_rest_tail_bound(cutoff, sigma); };
  m.coefficients = [=](std::uint64_t n) {
    const auto cache = cache_for(n);
    std::vector<double> a(n + 1, 0.0);
    if (n >= 1) a[1] = 1.0;
    for (std::uint64_t k = 2; k <= n; ++k) {
      if (cache.smallest_prime_factor(static_cast<std::uint32_t>(k)) > p_j && cache.mu(k) != 0) {
        a[k] = cache.mu(k) * std::ldexp(1.0, cache.nu(k));
      }
    }
    return a;
  };
  m.line_majorant = [](std::uint64_t n) {
    const auto cache = cache_for(n);
    std::vector<double> a(n + 1, 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) a[k] = std::ldexp(1.0, cache.nu(k));
    return a;
  };
  m.line_series = [](double s) { return std::pow(real_zeta(s), 2) / real_zeta(2 * s); };
  m.floor_majorant = [](std::uint64_t n) {
    const auto cache = cache_for(n);
    std::vector<double> a(n + 1, 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) a[k] = static_cast<double>(cache.d3(k));
    return a;
  };
  m.floor_series = [](double s) { return std::pow(real_zeta(s), 3); };
  return m;
}

double line_target(const SeriesModel& model, double x) {
  if (x < 1) return 0;
  const auto n = static_cast<std::uint64_t>(std::floor(x));
  const auto a = model.coefficients(n);
  double s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) s += a[k];
  if (is_integer(x)) s -= a[n] / 2;
  return s;
}

double floor_target(const SeriesModel& model, double x) {
  if (x < 1) return 0;
  const auto n = static_cast<std::uint64_t>(std::floor(x));
  const auto a = model.coefficients(n);
  double s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) s += a[k] * std::floor(x / static_cast<double>(k));
  if (is_integer(x)) s -= divisor_sum_at(model, n) / 2;
  return s;
}

double fractional_target(const SeriesModel& model, double x) {
  if (x < 1) return 0;
  const auto n = static_cast<std::uint64_t>(std::floor(x));
  const auto a = model.coefficients(n);
  const bool integral = is_integer(x);
  double s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    if (a[k] == 0) continue;
    const double frac = integral ? static_cast<double>(n % k) / static_cast<double>(k)
                                 : x / static_cast<double>(k) - std::floor(x / static_cast<double>(k));
    s += a[k] * frac;
  }
  if (integral) s += (divisor_sum_at(model, n) - a[n]) / 2;
  return s;
}

PerronEstimate perron_line_integral(const SeriesModel& model, double x, const ContourSpec& c, const PerronOptions& o) {
  auto est = integrate(model, x, c, Kernel::Line, o);
  est.truncation_bound = line_bound(model, x, c);
  if (is_integer(x) && x >= 1) {
    est.truncation_bound += boundary_error(coefficient_at(model, static_cast<std::uint64_t>(x)), c.sigma, c.T);
  }
  return est;
}

PerronEstimate perron_floor_sum(const SeriesModel& model, double x, const ContourSpec& c, const PerronOptions& o) {
  auto est = integrate(model, x, c, Kernel::Floor, o);
  est.truncation_bound = floor_bound(model, x, c);
  if (is_integer(x) && x >= 1) {
    est.truncation_bound += boundary_error(divisor_sum_at(model, static_cast<std::uint64_t>(x)), c.sigma, c.T);
  }
  return est;
}

PerronEstimate perron_fractional_sum(const SeriesModel& model, double x, const ContourSpec& c,
                                     const PerronOptions& o) {
  auto est = integrate(model, x, c, Kernel::Fractional, o);
  est.truncation_bound = line_bound(model, x, c) + floor_bound(model, x, c);
  if (is_integer(x) && x >= 1) {
    const auto n = static_cast<std::uint64_t>(x);
    est.truncation_bound += boundary_error(coefficient_at(model, n), c.sigma - 1.0, c.T) +
                            boundary_error(divisor_sum_at(model, n), c.sigma, c.T);
  }
  return est;
}

Theorem34Record theorem34_pi2(const SieveContext& ctx, const ContourSpec& contour, std::uint64_t cutoff,
                              const PerronOptions& options) {
  if (!(contour.sigma > 1)) throw DomainError("theorem34_pi2: sigma must exceed 1");
  Theorem34Record r;
  r.p_j = ctx.p_j;
  r.x = ctx.x_value();
  r.contour = contour;
  r.cutoff = cutoff;
  const double x = static_cast<double>(r.x);
  const auto model = twin_series(ctx.p_j, cutoff);
  r.R0 = remnant_count_R0(ctx.p_j);
  r.legendre_sum = legendre_sum(enumerate_smooth_squarefree(ctx));
  r.c_x = divisor_sum_at(model, r.x);
  r.target = static_cast<double>(r.legendre_sum) - r.c_x / 2;
  r.integral = perron_floor_sum(model, x, contour, options);
  r.pi2_true = pi2_brute(6 * r.x + 1);
  r.estimate = static_cast<double>(r.R0) + r.integral.value.real();
  r.residual = static_cast<double>(r.pi2_true) - r.estimate;
  const double lx = std::log(x);
  r.error_term_zeta = std::pow(real_zeta(contour.sigma), 3) * std::pow(x, contour.sigma) / contour.T;
  r.error_term_log = x * lx * lx * lx / contour.T;
  r.integral_error = r.integral.quad_error + r.integral.truncation_bound + r.integral.series_tail;
  r.combined_error = r.integral_error + r.error_term_zeta + r.error_term_log;
  r.match = std::fabs(r.residual) <= r.combined_error;
  r.integral_residual = r.integral.value.real() - r.target;
  r.integral_match = std::fabs(r.integral_residual) <= r.integral_error;
  return r;
}

Cor36Record cor36_fractional_sum(const SieveContext& ctx, const ContourSpec& contour, std::uint64_t cutoff,
                                 const PerronOptions& options) {
  if (!(contour.sigma > 1)) throw DomainError("cor36_fractional_sum: sigma must exceed 1");
  Cor36Record r;
  r.p_j = ctx.p_j;
  r.x = ctx.x_value();
  r.contour = contour;
  r.cutoff = cutoff;
  const auto model = twin_series(ctx.p_j, cutoff);
  r.minus_RE = remainder_RE(ctx).minus_RE;
  r.boundary = (divisor_sum_at(model, r.x) - coefficient_at(model, r.x)) / 2;
  r.target = to_double(r.minus_RE) + r.boundary;
  r.integral = perron_fractional_sum(model, static_cast<double>(r.x), contour, options);
  r.residual = r.integral.value.real() - r.target;
  r.error = r.integral.quad_error + r.integral.truncation_bound + r.integral.series_tail;
  r.match = std::fabs(r.residual) <= r.error;
  return r;
}

std::vector<ContourScanRow> contour_shift_scan(const SieveContext& ctx, std::span<const double> sigmas, double T,
                                               double step, std::uint64_t cutoff, const PerronOptions& options) {
  const double x = static_cast<double>(ctx.x_value());
  const auto model = twin_series(ctx.p_j, cutoff);
  std::vector<ContourScanRow> rows;
  for (double sigma : sigmas) {
    if (!(sigma > 0.5 && sigma <= 2.0)) throw DomainError("contour_shift_scan: sigma must lie in (1/2, 2]");
    const ContourSpec c{sigma, T, step, QuadratureRule::Simpson};
    const auto est = perron_floor_sum(model, x, c, options);
    ContourScanRow r;
    r.sigma = sigma;
    r.T = T;
    r.step = est.step;
    r.value = est.value;
    r.quad_err = est.quad_error;
    r.trunc_bound = est.truncation_bound;
    r.flagged_samples = est.flags.size();
    r.max_abs_integrand = est.max_abs_integrand;
    r.x_pow_sigma = std::pow(x, sigma);
    r.series_tail = est.series_tail;
    for (const auto& f : est.flags) r.flagged_t.push_back(f.t);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ContourScanRow>& rows) {
  const auto old = out.precision(17);
  out << "sigma,T,step,value_re,value_im,quad_err,trunc_bound,flagged_samples,max_abs_integrand,x_pow_sigma,"
         "series_tail,flagged_t\n";
  for (const auto& r : rows) {
    out << r.sigma << ',' << r.T << ',' << r.step << ',' << r.value.real() << ',' << r.value.imag() << ','
        << r.quad_err << ',' << r.trunc_bound << ',' << r.flagged_samples << ',' << r.max_abs_integrand << ','
        << r.x_pow_sigma << ',' << r.series_tail << ',';
    for (std::size_t i = 0; i < r.flagged_t.size(); ++i) out << (i ? ";" : "") << r.flagged_t[i];
    out << '\n';
  }
  out.precision(old);
}

Theorem37Record theorem37_bound_calculator(double x, double c, std::optional<double> T, double a,
                                           std::optional<double> b, double alpha) {
  if (!(x > std::numbers::e)) throw DomainError("theorem37_bound_calculator: x must exceed e");
  if (!(c > 0)) throw DomainError("theorem37_bound_calculator: c must be positive");
  Theorem37Record r;
  r.x = x;
  r.c = c;
  r.a = a;
  r.b = b.value_or(c);
  r.alpha = alpha;
  const double lx = std::log(x);
  r.T = T.value_or(std::exp(std::sqrt(c * lx)));
  if (!(r.T > 1)) throw DomainError("theorem37_bound_calculator: T must exceed 1");

  auto terms_at = [&](double logT, double out[4]) {
    const double la = std::log(lx);
    out[0] = std::exp((1 + a / logT) * lx + 3 * std::log(logT) - logT);
    out[1] = std::exp(lx + 3 * la - logT);
    out[2] = std::exp((1 - r.b / logT) * lx + 3 * std::log(logT) + alpha * la);
    out[3] = std::exp((1 + a / logT) * lx + 2 * std::log(logT) + alpha * la - logT);
  };
  const double logT = std::log(r.T);
  terms_at(logT, r.terms);
  r.middle = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
  r.balance = *std::max_element(r.terms, r.terms + 4) / *std::min_element(r.terms, r.terms + 4);
  r.bound = x * std::exp(-std::sqrt(c * lx)) * lx * lx * lx;
  r.bound_over_x = r.bound / x;

  r.middle_at_argmin = kInf;
  constexpr int kGrid = 2000;
  const double hi = std::max(2.0 * lx, 2.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double lt = hi * i / kGrid;
    double t[4];
    terms_at(lt, t);
    const double m = t[0] + t[1] + t[2] + t[3];
    if (m < r.middle_at_argmin) {
      r.middle_at_argmin = m;
      r.T_argmin = std::exp(lt);
    }
  }
  r.argmin_ratio = std::log(r.T_argmin) / logT;
  return r;
}

RectangleIntegral rectangle_integral(const std::function<Complex(Complex)>& f, const RectangleSpec& rect,
                                     double step) {
  if (!(rect.sigma_left < rect.sigma_right)) throw DomainError("rectangle_integral: sigma_left must be < sigma_right");
  if (!(rect.T > 0) || !(step > 0)) throw DomainError("rectangle_integral: T and step must be positive");
  const Complex i(0.0, 1.0);
  struct Edge {
    const char* name;
    Complex from, to;
  };
  const Edge edges[4] = {
      {"right", {rect.sigma_right, -rect.T}, {rect.sigma_right, rect.T}},
      {"top", {rect.sigma_right, rect.T}, {rect.sigma_left, rect.T}},
      {"left", {rect.sigma_left, rect.T}, {rect.sigma_left, -rect.T}},
      {"bottom", {rect.sigma_left, -rect.T}, {rect.sigma_right, -rect.T}},
  };
  RectangleIntegral out;
  CompensatedSum total;
  for (const auto& e : edges) {
    const Complex d = e.to - e.from;
    const std::size_t n = interval_count(std::abs(d), step);
    std::vector<Complex> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) v[k] = f(e.from + d * (static_cast<double>(k) / static_cast<double>(n)));
    // Parametrise by u in [0, 1]: ds = d du.
    auto [fine, coarse] = simpson_pair(v, 1.0 / static_cast<double>(n));
    SegmentIntegral seg;
    seg.name = e.name;
    seg.value = fine * d / (kTwoPi * i);
    seg.quad_error = std::abs(fine - coarse) * std::abs(d) / 15.0 / kTwoPi;
    total.add(seg.value);
    out.quad_error += seg.quad_error;
    out.segments.push_back(seg);
  }
  out.total = total.value();
  return out;
}

}  // namespace twinsieve
