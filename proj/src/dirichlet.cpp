#include "twinsieve/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "twinsieve/errors.hpp"
#include "twinsieve/primes.hpp"

namespace twinsieve {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex power_neg(std::uint64_t p, Complex s) { return std::exp(-s * std::log(static_cast<double>(p))); }

Complex checked_twin_factor(std::uint64_t p, Complex s) {
  const Complex f = 1.0 - 2.0 * power_neg(p, s);
  if (std::abs(f) < 1e-14) throw SingularFactorError("euler_product: 1 - 2 p^-s vanishes");
  return f;
}

// 1 + 1 / (p^s (p^s - 2)) written in u = p^-s.
Complex checked_d_factor(std::uint64_t p, Complex s) {
  const Complex u = power_neg(p, s);
  const Complex den = 1.0 - 2.0 * u;
  if (std::abs(den) < 1e-14) throw SingularFactorError("euler_product: p^s = 2");
  return 1.0 + u * u / den;
}

// sum over k >= k0 of weight(k) P_{>P}(k s), truncated when the next term's
// majorant falls below 1e-17. Returns {sum, first omitted majorant}.
template <class W>
std::pair<Complex, double> prime_power_expansion(Complex s, std::uint64_t P, int k0, W&& weight) {
  const double sigma = s.real();
  const double logP = std::log(static_cast<double>(P));
  Complex sum = 0.0;
  for (int k = k0;; ++k) {
    const double ks = k * sigma;
    const double majorant = std::fabs(weight(k)) * std::exp((1.0 - ks) * logP) / (ks - 1.0);
    if (majorant < 1e-17 || k > 200) return {sum, majorant};
    sum += weight(k) * prime_zeta_tail(static_cast<double>(k) * s, P);
  }
}

std::vector<std::uint32_t> divisor_counts(std::uint64_t N) {
  std::vector<std::uint32_t> d(N + 1, 0);
  for (std::uint64_t i = 1; i <= N; ++i) {
    for (std::uint64_t j = i; j <= N; j += i) ++d[j];
  }
  return d;
}

}  // namespace

Complex prime_zeta_tail(Complex w, std::uint64_t P) {
  if (w.real() <= 1.0) throw DomainError("prime_zeta_tail: Re w must exceed 1");
  if (P < 2) throw DomainError("prime_zeta_tail: P must be >= 2");
  const double logP = std::log(static_cast<double>(P));
  Complex sum = 0.0;
  for (std::uint64_t m = 1;; ++m) {
    const double ms = static_cast<double>(m) * w.real();
    if (std::exp((1.0 - ms) * logP) / (ms - 1.0) < 1e-18 || m > 200) break;
    const int mu = mobius(m);
    if (mu == 0) continue;
    const Complex v = static_cast<double>(m) * w;
    Complex z = zeta(v);
    for_each_prime(1, P, [&](std::uint64_t p) { z *= 1.0 - power_neg(p, v); });
    if (std::abs(z - 1.0) >= 0.5) throw DomainError("prime_zeta_tail: cutoff too small for this w");
    sum += static_cast<double>(mu) / static_cast<double>(m) * std::log(z);
  }
  return sum;
}

EulerProductValue euler_product(const EulerProductSpec& spec, Complex s) {
  EulerProductValue out;
  out.cutoff = spec.cutoff;
  const double sigma = s.real();
  const double logP = std::log(static_cast<double>(std::max<std::uint64_t>(spec.cutoff, 2)));

  switch (spec.kind) {
    case EulerProductKind::FiniteFactor: {
      Complex v = 1.0;
      for_each_prime(2, spec.p_j, [&](std::uint64_t p) { v *= checked_twin_factor(p, s); });
      out.value = v;
      return out;
    }
    case EulerProductKind::Pj:
    case EulerProductKind::P1: {
      if (sigma <= 1.0) throw DomainError("euler_product: twin product needs Re s > 1");
      const std::uint64_t lo = spec.kind == EulerProductKind::P1 ? 2 : spec.p_j;
      if (spec.cutoff < lo) throw DomainError("euler_product: cutoff below p_j");
      Complex v = 1.0;
      for_each_prime(lo, spec.cutoff, [&](std::uint64_t p) { v *= checked_twin_factor(p, s); });
      if (spec.accelerate_tail) {
        if (2.0 * std::exp(-sigma * logP) >= 1.0) throw DomainError("euler_product: cutoff too small");
        auto [log_tail, omitted] =
            prime_power_expansion(s, spec.cutoff, 1, [](int k) { return -std::ldexp(1.0, k) / k; });
        v *= std::exp(log_tail);
        out.accelerated = true;
        out.tail_bound = std::expm1(omitted) + 1e-13;
      } else {
        out.tail_bound = std::expm1(2.0 * std::exp((1.0 - sigma) * logP) / (sigma - 1.0));
      }
      out.value = v;
      return out;
    }
    case EulerProductKind::D: {
      if (sigma <= 0.5) throw DomainError("euler_product: D needs Re s > 1/2");
      const double q = 2.0 * std::exp(-sigma * logP);
      if (q >= 1.0) throw DomainError("euler_product: cutoff too small for this s");
      Complex v = 1.0;
      for_each_prime(2, spec.cutoff, [&](std::uint64_t p) { v *= checked_d_factor(p, s); });
      if (spec.accelerate_tail) {
        if (2.0 * sigma <= 1.0) throw DomainError("euler_product: acceleration needs Re s > 1/2");
        auto [log_tail, omitted] = prime_power_expansion(
            s, spec.cutoff, 2, [](int k) { return (std::ldexp(1.0, k) - 2.0) / k; });
        v *= std::exp(log_tail);
        out.accelerated = true;
        out.tail_bound = std::expm1(omitted) + 1e-13;
      } else {
        // |g(p)| <= p^{-2 sigma} / (1 - 2 p^{-sigma}), summed by the integral majorant.
        const double B = std::exp((1.0 - 2.0 * sigma) * logP) / ((2.0 * sigma - 1.0) * (1.0 - q));
        out.tail_bound = std::expm1(B);
      }
      out.value = v;
      return out;
    }
  }
  throw DomainError("euler_product: unknown kind");
}

double divisor_tail_bound(double sigma, std::uint64_t N) {
  if (sigma <= 1.0) return kInf;
  // Partial summation with sum_{n <= u} d(n) <= u (1 + log u).
  const double n = static_cast<double>(std::max<std::uint64_t>(N, 1));
  const double a = sigma - 1.0;
  return sigma * std::pow(n, -a) * ((1.0 + std::log(n)) / a + 1.0 / (a * a));
}

SeriesValue twin_weight_series(Complex s, std::uint64_t terms) {
  if (terms > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("twin_weight_series: too many terms");
  const ArithmeticFunctionCache cache(static_cast<std::uint32_t>(std::max<std::uint64_t>(terms, 1)));
  Complex sum = 0.0;
  for (std::uint64_t n = 1; n <= terms; ++n) {
    const int mu = cache.mu(n);
    if (mu == 0) continue;
    sum += static_cast<double>(mu) * std::ldexp(1.0, cache.nu(n)) * power_neg(n, s);
  }
  return {sum, divisor_tail_bound(s.real(), terms)};
}

DirichletSeriesTable D_coefficients(std::uint64_t N_max) {
  if (N_max < 1) throw DomainError("D_coefficients: N_max must be >= 1");
  DirichletSeriesTable t;
  t.N_max = N_max;
  t.coeffs.assign(N_max + 1, 0);
  std::vector<std::uint64_t> odd_primes;
  const auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N_max))) + 1;
  for_each_prime(2, r, [&](std::uint64_t p) {
    if (p * p <= N_max) odd_primes.push_back(p);
  });
  auto gen = [&](auto&& self, std::uint64_t n, std::uint64_t coef, std::size_t from) -> void {
    t.coeffs[n] = coef;
    for (std::size_t i = from; i < odd_primes.size(); ++i) {
      const std::uint64_t p = odd_primes[i];
      if (n > N_max / (p * p)) break;
      std::uint64_t m = n * p * p, c = 1;
      for (;;) {
        self(self, m, coef * c, i + 1);
        if (m > N_max / p) break;
        m *= p;
        c *= 2;
      }
    }
  };
  gen(gen, 1, 1, 0);
  return t;
}

Complex DirichletSeriesTable::evaluate(Complex s) const {
  Complex sum = 0.0;
  for (std::uint64_t n = 1; n <= N_max; ++n) {
    if (coeffs[n] != 0) sum += static_cast<double>(coeffs[n]) * power_neg(n, s);
  }
  return sum;
}

double DirichletSeriesTable::tail_bound(double sigma) const {
  const double theta_min = std::log(2.0) / std::log(3.0);
  if (sigma <= theta_min + 1e-9) return kInf;
  constexpr std::uint64_t kPrimes = 100'000;
  const double logX = std::log(static_cast<double>(N_max));
  double best = kInf;
  constexpr int kGrid = 40;
  for (int i = 1; i <= kGrid; ++i) {
    const double theta = theta_min + (sigma - theta_min) * i / kGrid;
    const double q = 2.0 * std::exp(-theta * std::log(static_cast<double>(kPrimes)));
    if (q >= 1.0 || 2.0 * theta <= 1.0) continue;
    double log_d = 0;
    bool ok = true;
    for_each_prime(2, kPrimes, [&](std::uint64_t p) {
      const double u = std::exp(-theta * std::log(static_cast<double>(p)));
      if (2.0 * u >= 1.0) ok = false;
      else log_d += std::log1p(u * u / (1.0 - 2.0 * u));
    });
    if (!ok) continue;
    const double B = std::exp((1.0 - 2.0 * theta) * std::log(static_cast<double>(kPrimes))) /
                     ((2.0 * theta - 1.0) * (1.0 - q));
    const double d_upper = std::exp(log_d + B) * (1.0 + 1e-13);
    double head = 0;
    for (std::uint64_t n = 1; n <= N_max; ++n) {
      if (coeffs[n] != 0) head += static_cast<double>(coeffs[n]) * std::exp(-theta * std::log(static_cast<double>(n)));
    }
    const double rest = std::max(d_upper - head, 0.0) + 1e-15 * d_upper;
    best = std::min(best, std::exp((theta - sigma) * logX) * rest);
  }
  return best;
}

CoefficientFormulaReport compare_exponent_formula(const DirichletSeriesTable& table, std::size_t keep) {
  CoefficientFormulaReport r;
  r.N_max = table.N_max;
  for (std::uint64_t n = 1; n <= table.N_max; ++n) {
    if (table.coeffs[n] == 0) continue;
    ++r.support;
    long long re = 0, ro = 0, rbe = 0, rbo = 0;
    std::uint64_t m = n;
    for (std::uint64_t p = 3; p * p <= m; p += 2) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (e == 0) continue;
      if (e % 2 == 0) {
        const int v = e / 2 - 1;
        re += v;
        rbe += v > 0;
      } else {
        const int mu = (e - 3) / 2;
        ro += mu + 3;
        rbo += mu > 0;
      }
    }
    // Support elements have no prime to the first power, so m == 1 here.
    const long long exponent = 2 * re + 2 * ro - 2 * rbe - 2 * rbo;
    const std::uint64_t formula = (exponent >= 0 && exponent < 64) ? (std::uint64_t{1} << exponent) : 0;
    if (formula == table.coeffs[n]) {
      ++r.agreements;
    } else if (r.mismatches.size() < keep) {
      r.mismatches.push_back({n, table.coeffs[n], formula});
    }
  }
  return r;
}

std::size_t check_multiplicative(const DirichletSeriesTable& table, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> support;
  for (std::uint64_t n = 2; n <= table.N_max; ++n) {
    if (table.coeffs[n] != 0) support.push_back(n);
  }
  const std::uint64_t N = table.N_max;
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N)));
  if (root < 2) return 0;
  std::size_t checked = 0, bad = 0;
  for (std::size_t attempt = 0; checked < samples && attempt < 100 * samples; ++attempt) {
    std::uint64_t m, n;
    if (attempt % 2 == 0 && support.size() >= 2) {
      m = support[rng() % support.size()];
      n = support[rng() % support.size()];
    } else {
      m = 2 + rng() % (root - 1);
      n = 2 + rng() % (N / m - 1 > 0 ? N / m - 1 : 1);
    }
    if (m > N / n || std::gcd(m, n) != 1) continue;
    ++checked;
    if (table.coeffs[m * n] != table.coeffs[m] * table.coeffs[n]) ++bad;
  }
  return bad;
}

Lemma33Report verify_lemma33(Complex s, const Lemma33Options& o) {
  if (s.real() <= 1.0) throw DomainError("verify_lemma33: Re s must exceed 1");
  Lemma33Report r;
  r.s = s;
  const auto p1 = euler_product({EulerProductKind::P1, 2, o.p1_cutoff, true}, s);
  const auto d = euler_product({EulerProductKind::D, 2, o.d_cutoff, false}, s);
  r.P1 = p1.value;
  r.P1_tail = p1.tail_bound;
  r.D_product = d.value;
  r.D_product_tail = d.tail_bound;
  r.zeta = zeta(s);
  const Complex two = 1.0 - std::exp(-s * std::log(2.0));
  r.identity_residual = std::abs(r.P1 * r.zeta * r.zeta * r.D_product * two * two - 1.0);
  const auto table = D_coefficients(o.series_terms);
  r.D_series = table.evaluate(s);
  r.D_series_tail = table.tail_bound(s.real());
  r.series_residual = std::abs(r.D_series - r.D_product);
  // Rounding floor: each n^-s carries a relative error of order |s| log n eps.
  const double abs_sum = table.evaluate(s.real()).real();
  const double rounding = 4e-16 * (8.0 + std::abs(s) * std::log(static_cast<double>(o.series_terms))) * abs_sum;
  r.series_allowance = std::abs(r.D_product) * r.D_product_tail + r.D_series_tail + rounding;
  return r;
}

MajorantReport majorant_check(std::uint64_t N_max, Complex s) {
  if (s.real() <= 1.0) throw DomainError("majorant_check: Re s must exceed 1");
  if (N_max < 1 || N_max > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("majorant_check: N_max out of range");
  }
  MajorantReport r;
  r.N_max = N_max;
  r.s = s;
  const auto d = divisor_counts(N_max);
  const ArithmeticFunctionCache cache(static_cast<std::uint32_t>(N_max));
  std::vector<std::int64_t> conv(N_max + 1, 0);
  for (std::uint64_t m = 1; m * m <= N_max; ++m) {
    const int mu = cache.mu(m);
    if (mu == 0) continue;
    for (std::uint64_t k = 1; m * m * k <= N_max; ++k) conv[m * m * k] += mu * static_cast<std::int64_t>(d[k]);
  }
  Complex sum = 0.0;
  for (std::uint64_t n = 1; n <= N_max; ++n) {
    const std::int64_t w = std::int64_t{1} << cache.nu(n);
    if (conv[n] != w && r.coefficient_mismatches++ == 0) r.first_mismatch = n;
    sum += static_cast<double>(w) * power_neg(n, s);
  }
  r.partial_sum = sum;
  const Complex z = zeta(s);
  r.closed_form = z * z / zeta(2.0 * s);
  r.residual = std::abs(r.closed_form - r.partial_sum);
  r.tail_bound = divisor_tail_bound(s.real(), N_max);
  return r;
}

PjIdentityReport pj_identity_check(std::uint64_t p_j, Complex s, std::uint64_t cutoff, std::uint64_t series_terms) {
  PjIdentityReport r;
  const auto prod = euler_product({EulerProductKind::Pj, p_j, cutoff, false}, s);
  r.product = prod.value;
  r.product_tail = prod.tail_bound;
  Complex finite = 1.0;
  for_each_prime(1, p_j, [&](std::uint64_t p) { finite *= checked_twin_factor(p, s); });
  const auto series = twin_weight_series(s, series_terms);
  r.series_form = series.value / finite;
  r.series_tail = series.tail_bound / std::abs(finite);
  r.residual = std::abs(r.product - r.series_form);
  return r;
}

}  // namespace twinsieve
