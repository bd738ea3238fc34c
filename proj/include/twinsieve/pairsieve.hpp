#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "twinsieve/bigint.hpp"

namespace twinsieve {

// Integer nearest to num/den (den > 0). Throws AmbiguityError when num/den is
// a half-integer.
std::int64_t nearest_integer(std::int64_t num, std::int64_t den);

// The pair of non-rank progressions n*p +- N(p/6) attached to a prime p >= 5.
struct NonRankProgressionPair {
  std::uint64_t p = 0;
  std::uint64_t offset = 0;                // N(p/6)
  std::array<std::uint64_t, 2> classes{};  // {offset, p - offset}, residues mod p

  bool covers(std::uint64_t k) const {
    const std::uint64_t r = k % p;
    return r == classes[0] || r == classes[1];
  }
};

NonRankProgressionPair nonrank_offsets(std::uint64_t p);

// 6m - 1 and 6m + 1 both prime.
bool is_twin_rank(std::uint64_t m);

// Anchor of every identity at a primorial argument: p_j, L(p_j), M(j+1) and
// x = L - M(j+1).
struct SieveContext {
  std::size_t j = 0;            // p_j is the j-th prime, p_1 = 2
  std::uint64_t p_j = 0;
  std::uint64_t p_next = 0;     // p_{j+1}
  BigInt L;                     // product of 5 <= p <= p_j
  BigInt M_next;                // (p_{j+1}^2 - 1) / 6
  BigInt x;                     // L - M_next, negative for p_j = 5
  std::vector<NonRankProgressionPair> progressions;  // one per prime 5 <= p <= p_j

  // L as a 64-bit value when it fits.
  std::optional<std::uint64_t> period() const { return to_uint64(L); }
  // x as a positive 64-bit value; throws DomainError when x <= 0 or too large.
  std::uint64_t x_value() const;
  std::uint64_t M_value() const;
};

// p_j must be a prime >= 5.
SieveContext make_context(std::uint64_t p_j);

// k in S_{p_j}: some prime 5 <= p <= p_j has k = +-N(p/6) mod p. Any k >= 1.
bool in_supergroup(const SieveContext& ctx, std::uint64_t k);

struct MaterializeOptions {
  // Largest period L for which a bitmap over one period is built.
  std::uint64_t max_bitmap_period = std::uint64_t{1} << 28;
};

// One period [1, L] of the supergroup. Materialized as a bitmap when L is small
// enough; otherwise membership is answered from the residue classes and counts
// come from supergroup_census.
class Supergroup {
 public:
  explicit Supergroup(const SieveContext& ctx, MaterializeOptions options = {});

  const SieveContext& context() const { return ctx_; }
  bool materialized() const { return !bits_.empty(); }
  bool contains(std::uint64_t k) const;
  // |S_{p_j} cap [1, L]|.
  std::uint64_t size() const;
  // Ascending members / non-members of [1, L]; require materialized().
  std::vector<std::uint64_t> elements() const;
  std::vector<std::uint64_t> complement() const;

 private:
  SieveContext ctx_;
  std::uint64_t period_ = 0;
  std::vector<std::uint64_t> bits_;  // bit i <-> residue i mod L (k = L maps to 0)
};

Supergroup supergroup(const SieveContext& ctx, MaterializeOptions options = {});

// A_p: members of [1, L] covered by p's classes and by no smaller prime >= 5.
std::vector<std::uint64_t> nonranks_to_parent(std::uint64_t p, const SieveContext& ctx,
                                              MaterializeOptions options = {});

struct RemnantSet {
  SieveContext context;
  std::vector<std::uint64_t> remnants;  // ascending, [1, L] minus S_{p_j}
};

RemnantSet remnant_set(const SieveContext& ctx, MaterializeOptions options = {});

// R_0 = product of (p - 2) over 5 <= p <= p_j, exact.
BigInt remnant_count_R0(std::uint64_t p_j);

// Remnants r <= M(j+1). Throws InvariantViolation if one is not a twin rank.
std::vector<std::uint64_t> front_twin_ranks(const SieveContext& ctx);

struct CensusOptions {
  unsigned threads = 0;       // 0: default_thread_count()
  bool per_parent = false;    // also count |A_p| for every parent prime
  std::uint64_t max_period = std::uint64_t{1} << 40;
};

struct SupergroupCensus {
  std::uint64_t period = 0;
  std::uint64_t supergroup_size = 0;
  std::uint64_t remnant_count = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> parent_sizes;  // (p, |A_p|)
};

// Streams one full period through per-prime 64-bit residue masks and counts
// members and remnants without materializing the period.
SupergroupCensus supergroup_census(const SieveContext& ctx, CensusOptions options = {});

struct LogPrimorialDiagnostic {
  std::uint64_t p_j = 0;
  double log_L = 0;                 // sum of log p over 5 <= p <= p_j
  double log_L_exact = 0;           // log of the exact product
  std::optional<double> log_x;      // absent when x <= 0
  double log_L_minus_p_j = 0;
  std::optional<double> log_L_minus_log_x;
};

LogPrimorialDiagnostic log_primorial_diagnostic(std::uint64_t p_j);

// Progression generation of non-ranks k in [1, limit]. n >= 1 terms are always
// emitted; the n = 0 term N(p/6) only when the partner of p in the pair
// 6N(p/6) -+ 1 is composite. Result index k is true when k was generated.
std::vector<bool> generate_nonranks(std::uint64_t limit);

struct ProgressionCheck {
  std::uint64_t limit = 0;
  std::uint64_t nonranks = 0;                  // by primality
  std::uint64_t generated = 0;                 // by the progressions
  std::vector<std::uint64_t> mismatches;       // k where the two disagree
  std::vector<std::uint64_t> unsound;          // n >= 1 terms with no proper multiple of p
};

// Compares the progression generator with the primality oracle on [1, limit]
// and checks that every n >= 1 term hits a proper multiple of its prime.
ProgressionCheck check_nonrank_progressions(std::uint64_t limit);

// CSV: header "p,offset,class1,class2".
void write_progressions_csv(std::ostream& out, const SieveContext& ctx);
// CSV: header "k".
void write_remnants_csv(std::ostream& out, const RemnantSet& remnants);

}  // namespace twinsieve
