#pragma once

#include <cstdint>
#include <vector>

#include "twinsieve/zeta.hpp"

namespace twinsieve {

enum class EulerProductKind {
  Pj,            // prod over p_j < p <= cutoff of (1 - 2 p^-s)
  P1,            // same with p_j = 2
  D,             // prod over 2 < p <= cutoff of (1 + 1 / (p^s (p^s - 2)))
  FiniteFactor,  // prod over 2 < p <= p_j of (1 - 2 p^-s), exact
};

struct EulerProductSpec {
  EulerProductKind kind = EulerProductKind::D;
  std::uint64_t p_j = 2;
  std::uint64_t cutoff = 100'000;
  // Replace the omitted primes p > cutoff by a prime-zeta expansion instead of
  // dropping them. Applies to Pj, P1 (Re s > 1) and D (Re s > 1/2).
  bool accelerate_tail = false;
};

struct EulerProductValue {
  Complex value;
  // Bound on |exact / value - 1|. For plain truncation this is the rigorous
  // exp(sum |g(p)|) - 1 with the integral majorant; for accelerated tails it
  // is the size of the first omitted expansion term plus a rounding floor.
  double tail_bound = 0;
  std::uint64_t cutoff = 0;
  bool accelerated = false;
};

// Throws SingularFactorError when a factor vanishes or has a pole (p^s = 2),
// DomainError when the product does not converge at s.
EulerProductValue euler_product(const EulerProductSpec& spec, Complex s);

// sum over primes p > P of p^-w, Re w > 1, via Moebius inversion of log zeta
// with the primes <= P removed.
Complex prime_zeta_tail(Complex w, std::uint64_t P);

// sum_{n <= terms} mu(n) 2^nu(n) n^-s and a bound on the omitted tail.
struct SeriesValue {
  Complex value;
  double tail_bound = 0;  // absolute
};
SeriesValue twin_weight_series(Complex s, std::uint64_t terms);

// Upper bound for sum_{n > N} d(n) n^-sigma, sigma > 1.
double divisor_tail_bound(double sigma, std::uint64_t N);

// Coefficients of D(s) from the local factors 1 + sum_{e >= 2} 2^{e-2} p^{-es}.
struct DirichletSeriesTable {
  std::uint64_t N_max = 0;
  std::vector<std::uint64_t> coeffs;  // coeffs[n] for 0 <= n <= N_max, coeffs[0] = 0

  std::uint64_t operator[](std::uint64_t n) const { return coeffs.at(n); }
  Complex evaluate(Complex s) const;
  // Rankin bound on sum_{n > N_max} a_n n^-sigma; infinite when sigma is at
  // or below log 2 / log 3.
  double tail_bound(double sigma) const;
};

DirichletSeriesTable D_coefficients(std::uint64_t N_max);

// Exponent formula 2^(2 r_e + 2 r_o - 2 rbar_e - 2 rbar_o) on the support of D
// against the direct expansion.
struct CoefficientMismatch {
  std::uint64_t n = 0;
  std::uint64_t direct = 0;
  std::uint64_t formula = 0;
};
struct CoefficientFormulaReport {
  std::uint64_t N_max = 0;
  std::size_t support = 0;  // n <= N_max with a_n != 0
  std::size_t agreements = 0;
  std::vector<CoefficientMismatch> mismatches;  // first few, ascending n
};
CoefficientFormulaReport compare_exponent_formula(const DirichletSeriesTable& table,
                                                  std::size_t keep = 20);

// Sampled coprime pairs (m, n) with mn <= N_max; returns the number violating
// a_mn = a_m a_n.
std::size_t check_multiplicative(const DirichletSeriesTable& table, std::size_t samples,
                                 std::uint64_t seed = 1);

struct Lemma33Options {
  std::uint64_t p1_cutoff = 1000;       // explicit primes in P1, tail accelerated
  std::uint64_t d_cutoff = 1'000'000;   // D product truncation (plain, rigorous bound)
  std::uint64_t series_terms = 1'000'000;  // coefficient sum length
};

struct Lemma33Report {
  Complex s;
  Complex P1, zeta, D_product, D_series;
  double P1_tail = 0;
  double D_product_tail = 0;
  double D_series_tail = 0;
  double identity_residual = 0;  // |P1 zeta^2 D (1 - 2^-s)^2 - 1|
  double series_residual = 0;    // |D_series - D_product|
  double series_allowance = 0;   // |D| * D_product_tail + D_series_tail
};

Lemma33Report verify_lemma33(Complex s, const Lemma33Options& options = {});

struct MajorantReport {
  std::uint64_t N_max = 0;
  std::size_t coefficient_mismatches = 0;  // sum_{m^2 | n} mu(m) d(n/m^2) vs 2^nu(n)
  std::uint64_t first_mismatch = 0;
  Complex s;
  Complex closed_form;  // zeta(s)^2 / zeta(2s)
  Complex partial_sum;  // sum_{n <= N_max} 2^nu(n) n^-s
  double residual = 0;
  double tail_bound = 0;
};

MajorantReport majorant_check(std::uint64_t N_max, Complex s);

// Both sides of prod_{p > p_j}(1 - 2/p^s) = prod_{p <= p_j}(1 - 2/p^s)^-1 sum mu(n) 2^nu(n) n^-s.
struct PjIdentityReport {
  Complex product;
  double product_tail = 0;  // relative
  Complex series_form;
  double series_tail = 0;   // absolute, already divided by the finite factor
  double residual = 0;
};

PjIdentityReport pj_identity_check(std::uint64_t p_j, Complex s, std::uint64_t cutoff,
                                   std::uint64_t series_terms);

}  // namespace twinsieve
