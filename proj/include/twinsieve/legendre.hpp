#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "twinsieve/bigint.hpp"
#include "twinsieve/pairsieve.hpp"

namespace twinsieve {

struct SquarefreeTerm {
  std::uint64_t n = 1;
  int mu = 1;
  int nu = 0;
};

// Squarefree n <= x whose prime factors all lie in (p_j, x], i.e. n | L_j(x).
// Includes n = 1. Ascending.
struct SmoothSquarefreeEnumeration {
  SieveContext context;
  std::uint64_t x = 0;
  std::vector<SquarefreeTerm> terms;
};

struct EnumerationOptions {
  std::uint64_t max_nodes = 100'000'000;  // CapacityError beyond this many terms
};

// Depth-first products of the primes in (p_j, x], pruned at n > x.
SmoothSquarefreeEnumeration enumerate_smooth_squarefree(const SieveContext& ctx,
                                                        EnumerationOptions options = {});

// Number of m >= 1 with 6m + 1 <= limit and 6m -+ 1 both prime. (3, 5) is not
// of that form and is never counted. limit >= 7.
std::uint64_t pi2_brute(std::uint64_t limit);

// Sum of mu(n) 2^nu(n) floor(x / n) over the enumeration.
BigInt legendre_sum(const SmoothSquarefreeEnumeration& e);

// Sum of mu(n) 2^nu(n) x / n over the enumeration, exact.
BigRational legendre_ratio_sum(const SmoothSquarefreeEnumeration& e);

struct LegendreReport {
  std::uint64_t p_j = 0;
  BigInt L;
  BigInt M;
  BigInt x;
  BigInt R0;
  BigInt sum_floor;
  BigInt pi2_true;     // pi2_brute(6x + 1)
  BigInt discrepancy;  // pi2_true - R0 - sum_floor
  std::size_t terms = 0;
};

LegendreReport legendre_report(const SieveContext& ctx, EnumerationOptions options = {});

nlohmann::ordered_json to_json(const LegendreReport& report);

// -R_E = sum over p_j < n < x, n | L_j(x) of mu(n) 2^nu(n) {x / n}.
struct RemainderRE {
  std::uint64_t p_j = 0;
  std::uint64_t x = 0;
  std::size_t terms = 0;
  bool exact_available = false;
  BigRational minus_RE;     // exact value of -R_E when exact_available
  double minus_RE_float = 0;  // independent compensated floating sum
};

struct RemainderOptions {
  bool exact = true;  // the rational sum gets slow once x is in the 10^5 range
  EnumerationOptions enumeration;
};

RemainderRE remainder_RE(const SieveContext& ctx, RemainderOptions options = {});

// Bound shape x exp(-sqrt(c log x)) (log x)^3 used to scale |R_E| for diagnostics.
double remainder_bound_shape(double x, double c);

}  // namespace twinsieve
