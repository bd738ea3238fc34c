#include "twinsieve/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twinsieve/errors.hpp"
#include "twinsieve/primes.hpp"

namespace twinsieve {
namespace {

nlohmann::ordered_json big_to_json(const BigInt& v) {
  if (const auto i = to_int64(v)) return *i;
  return to_string(v);
}

void enumerate(const std::vector<std::uint64_t>& primes, std::size_t from, std::uint64_t n,
               int mu, int nu, std::uint64_t x, std::uint64_t max_nodes,
               std::vector<SquarefreeTerm>& out) {
  out.push_back({n, mu, nu});
  if (out.size() > max_nodes) {
    throw CapacityError("enumerate_smooth_squarefree: more than " + std::to_string(max_nodes) +
                        " terms");
  }
  for (std::size_t i = from; i < primes.size(); ++i) {
    const std::uint64_t q = primes[i];
    if (n > x / q) break;
    enumerate(primes, i + 1, n * q, -mu, nu + 1, x, max_nodes, out);
  }
}

}  // namespace

SmoothSquarefreeEnumeration enumerate_smooth_squarefree(const SieveContext& ctx,
                                                        EnumerationOptions options) {
  SmoothSquarefreeEnumeration e;
  e.context = ctx;
  e.x = ctx.x_value();
  std::vector<std::uint64_t> primes;
  if (e.x >= 2) {
    for (std::uint64_t p : primes_up_to(e.x).primes) {
      if (p > ctx.p_j) primes.push_back(p);
    }
  }
  enumerate(primes, 0, 1, 1, 0, e.x, options.max_nodes, e.terms);
  std::sort(e.terms.begin(), e.terms.end(),
            [](const SquarefreeTerm& a, const SquarefreeTerm& b) { return a.n < b.n; });
  return e;
}

std::uint64_t pi2_brute(std::uint64_t limit) {
  if (limit < 7) throw DomainError("pi2_brute: limit must be >= 7");
  const PrimalityBitmap primality(limit);
  std::uint64_t count = 0;
  for (std::uint64_t m = 1; 6 * m + 1 <= limit; ++m) {
    if (primality.is_prime(6 * m - 1) && primality.is_prime(6 * m + 1)) ++count;
  }
  return count;
}

BigInt legendre_sum(const SmoothSquarefreeEnumeration& e) {
  __int128 s = 0;
  for (const auto& t : e.terms) {
    s += static_cast<__int128>(t.mu) * (__int128{1} << t.nu) * static_cast<__int128>(e.x / t.n);
  }
  const bool neg = s < 0;
  unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-s) : static_cast<unsigned __int128>(s);
  BigInt out(static_cast<std::uint64_t>(mag >> 64));
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return neg ? BigInt(-out) : out;
}

BigRational legendre_ratio_sum(const SmoothSquarefreeEnumeration& e) {
  BigRational s = 0;
  for (const auto& t : e.terms) {
    s += BigRational(BigInt(t.mu) * (BigInt(1) << t.nu) * e.x, BigInt(t.n));
  }
  return s;
}

LegendreReport legendre_report(const SieveContext& ctx, EnumerationOptions options) {
  const auto e = enumerate_smooth_squarefree(ctx, options);
  LegendreReport r;
  r.p_j = ctx.p_j;
  r.L = ctx.L;
  r.M = ctx.M_next;
  r.x = ctx.x;
  r.R0 = remnant_count_R0(ctx.p_j);
  r.sum_floor = legendre_sum(e);
  r.pi2_true = pi2_brute(6 * e.x + 1);
  r.discrepancy = r.pi2_true - r.R0 - r.sum_floor;
  r.terms = e.terms.size();
  return r;
}

nlohmann::ordered_json to_json(const LegendreReport& r) {
  return nlohmann::ordered_json{{"p_j", r.p_j},
                        {"L", big_to_json(r.L)},
                        {"M", big_to_json(r.M)},
                        {"x", big_to_json(r.x)},
                        {"R0", big_to_json(r.R0)},
                        {"sum_floor", big_to_json(r.sum_floor)},
                        {"pi2_true", big_to_json(r.pi2_true)},
                        {"discrepancy", big_to_json(r.discrepancy)}};
}

RemainderRE remainder_RE(const SieveContext& ctx, RemainderOptions options) {
  const auto e = enumerate_smooth_squarefree(ctx, options.enumeration);
  RemainderRE r;
  r.p_j = ctx.p_j;
  r.x = e.x;
  r.exact_available = options.exact;
  // Neumaier summation of the floating terms.
  long double sum = 0, comp = 0;
  for (const auto& t : e.terms) {
    if (t.n <= ctx.p_j || t.n >= e.x) continue;
    const std::uint64_t rem = e.x % t.n;
    ++r.terms;
    if (rem == 0) continue;
    const long double weight = static_cast<long double>(t.mu) * std::ldexp(1.0L, t.nu);
    const long double term = weight * static_cast<long double>(rem) / static_cast<long double>(t.n);
    const long double next = sum + term;
    comp += (std::fabs(sum) >= std::fabs(term)) ? (sum - next) + term : (term - next) + sum;
    sum = next;
    if (options.exact) {
      r.minus_RE += BigRational(BigInt(t.mu) * (BigInt(1) << t.nu) * rem, BigInt(t.n));
    }
  }
  r.minus_RE_float = static_cast<double>(sum + comp);
  return r;
}

double remainder_bound_shape(double x, double c) {
  const double lx = std::log(x);
  return x * std::exp(-std::sqrt(c * lx)) * lx * lx * lx;
}

}  // namespace twinsieve
