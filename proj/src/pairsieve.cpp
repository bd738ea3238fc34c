#include "twinsieve/pairsieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <thread>

#include "twinsieve/errors.hpp"
#include "twinsieve/primes.hpp"
#include "twinsieve/threads.hpp"

namespace twinsieve {
namespace {

// 64-bit residue masks for one prime: word w has bit b set when 64w + b lies in
// one of the prime's two classes. The pattern repeats every p words.
std::vector<std::uint64_t> residue_mask_pattern(const NonRankProgressionPair& pair) {
  std::vector<std::uint64_t> words(pair.p, 0);
  for (std::uint64_t w = 0; w < pair.p; ++w) {
    for (unsigned b = 0; b < 64; ++b) {
      if (pair.covers(64 * w + b)) words[w] |= std::uint64_t{1} << b;
    }
  }
  return words;
}

// Several primes folded into one table whose period is the product of theirs.
struct MaskGroup {
  std::uint64_t period = 1;
  std::vector<std::uint64_t> words;
};

std::vector<MaskGroup> build_mask_groups(const SieveContext& ctx, std::uint64_t max_group_period) {
  std::vector<std::vector<const NonRankProgressionPair*>> members;
  std::vector<std::uint64_t> periods;
  for (const auto& pr : ctx.progressions) {
    if (periods.empty() || periods.back() * pr.p > max_group_period) {
      members.emplace_back();
      periods.push_back(1);
    }
    members.back().push_back(&pr);
    periods.back() *= pr.p;
  }
  std::vector<MaskGroup> groups;
  for (std::size_t g = 0; g < members.size(); ++g) {
    MaskGroup group;
    group.period = periods[g];
    group.words.assign(group.period, 0);
    for (const auto* pr : members[g]) {
      const auto pattern = residue_mask_pattern(*pr);
      for (std::uint64_t w = 0; w < group.period; ++w) group.words[w] |= pattern[w % pr->p];
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::uint64_t last_word_mask(std::uint64_t period) {
  const unsigned tail = static_cast<unsigned>(period % 64);
  return tail == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail) - 1;
}

struct PartialCensus {
  std::uint64_t members = 0;
  std::vector<std::uint64_t> parents;
};

PartialCensus census_range(const SieveContext& ctx, const std::vector<MaskGroup>& groups,
                           const std::vector<std::vector<std::uint64_t>>& patterns,
                           std::uint64_t w_begin, std::uint64_t w_end, std::uint64_t word_count,
                           std::uint64_t tail_mask, bool per_parent) {
  PartialCensus out;
  if (per_parent) {
    const std::size_t np = patterns.size();
    out.parents.assign(np, 0);
    std::vector<std::uint64_t> idx(np);
    for (std::size_t i = 0; i < np; ++i) idx[i] = w_begin % ctx.progressions[i].p;
    for (std::uint64_t w = w_begin; w < w_end; ++w) {
      const std::uint64_t valid = (w + 1 == word_count) ? tail_mask : ~std::uint64_t{0};
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < np; ++i) {
        const std::uint64_t m = patterns[i][idx[i]] & valid;
        out.parents[i] += static_cast<std::uint64_t>(std::popcount(m & ~acc));
        acc |= m;
        if (++idx[i] == ctx.progressions[i].p) idx[i] = 0;
      }
      out.members += static_cast<std::uint64_t>(std::popcount(acc));
    }
    return out;
  }
  const std::size_t ng = groups.size();
  std::vector<std::uint64_t> idx(ng);
  for (std::size_t g = 0; g < ng; ++g) idx[g] = w_begin % groups[g].period;
  for (std::uint64_t w = w_begin; w < w_end; ++w) {
    std::uint64_t acc = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      acc |= groups[g].words[idx[g]];
      if (++idx[g] == groups[g].period) idx[g] = 0;
    }
    if (w + 1 == word_count) acc &= tail_mask;
    out.members += static_cast<std::uint64_t>(std::popcount(acc));
  }
  return out;
}

std::uint64_t require_period(const SieveContext& ctx, std::uint64_t cap, const char* what) {
  const auto L = ctx.period();
  if (!L || *L > cap) {
    throw CapacityError(std::string(what) + ": period L(" + std::to_string(ctx.p_j) + ") = " +
                        to_string(ctx.L) + " exceeds the cap " + std::to_string(cap));
  }
  return *L;
}

double log_of(const BigInt& v) {
  const std::size_t bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 60) return std::log(v.convert_to<double>());
  const std::size_t shift = bits - 60;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

// Visits every progression term k(n, p) in [1, limit] with the n = 0 rule applied.
void for_each_progression_term(
    std::uint64_t limit, const PrimalityBitmap& primality,
    const std::function<void(std::uint64_t k, std::uint64_t p, std::uint64_t n)>& visit) {
  const std::uint64_t p_max = 6 * limit + 1;
  for (std::uint64_t p : primes_up_to(p_max).primes) {
    if (p < 5) continue;
    const auto pair = nonrank_offsets(p);
    const std::uint64_t N = pair.offset;
    if (N <= limit) {
      // 6N = p +- 1, so p is one member of the pair (6N - 1, 6N + 1).
      const std::uint64_t partner = (6 * N == p + 1) ? p + 2 : p - 2;
      if (!primality.is_prime(partner)) visit(N, p, 0);
    }
    for (std::uint64_t n = 1; n * p - N <= limit; ++n) {
      visit(n * p - N, p, n);
      if (n * p + N <= limit) visit(n * p + N, p, n);
    }
  }
}

}  // namespace

std::int64_t nearest_integer(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("nearest_integer: denominator must be positive");
  const std::int64_t twice = 2 * num + den;
  const std::int64_t mod = 2 * den;
  if (twice % mod == 0) {
    throw AmbiguityError("nearest_integer: " + std::to_string(num) + "/" + std::to_string(den) +
                         " is a half-integer");
  }
  std::int64_t q = twice / mod;
  if (twice % mod != 0 && (twice < 0)) --q;  // floor division
  return q;
}

NonRankProgressionPair nonrank_offsets(std::uint64_t p) {
  if (p < 5 || !is_prime(p)) {
    throw DomainError("nonrank_offsets: p must be a prime >= 5, got " + std::to_string(p));
  }
  NonRankProgressionPair pair;
  pair.p = p;
  pair.offset = static_cast<std::uint64_t>(nearest_integer(static_cast<std::int64_t>(p), 6));
  pair.classes = {pair.offset % p, p - pair.offset};
  return pair;
}

bool is_twin_rank(std::uint64_t m) {
  if (m == 0) throw DomainError("is_twin_rank: m must be >= 1");
  return is_prime(6 * m - 1) && is_prime(6 * m + 1);
}

std::uint64_t SieveContext::x_value() const {
  if (x <= 0) {
    throw DomainError("context p_j = " + std::to_string(p_j) + " has x = " + to_string(x) +
                      " <= 0");
  }
  const auto v = to_uint64(x);
  if (!v) throw CapacityError("context x does not fit in 64 bits");
  return *v;
}

std::uint64_t SieveContext::M_value() const { return static_cast<std::uint64_t>(M_next); }

SieveContext make_context(std::uint64_t p_j) {
  if (p_j < 5 || !is_prime(p_j)) {
    throw DomainError("sieve context: p_j must be a prime >= 5, got " + std::to_string(p_j));
  }
  SieveContext ctx;
  ctx.p_j = p_j;
  ctx.j = prime_index(p_j);
  ctx.p_next = next_prime(p_j);
  ctx.L = primorial_L(p_j);
  const BigInt sq = BigInt(ctx.p_next) * ctx.p_next - 1;
  if (sq % 6 != 0) throw InvariantViolation("p_{j+1}^2 - 1 is not divisible by 6");
  ctx.M_next = sq / 6;
  ctx.x = ctx.L - ctx.M_next;
  for (std::uint64_t p : primes_up_to(p_j).primes) {
    if (p >= 5) ctx.progressions.push_back(nonrank_offsets(p));
  }
  return ctx;
}

bool in_supergroup(const SieveContext& ctx, std::uint64_t k) {
  for (const auto& pr : ctx.progressions) {
    if (pr.covers(k)) return true;
  }
  return false;
}

Supergroup::Supergroup(const SieveContext& ctx, MaterializeOptions options) : ctx_(ctx) {
  const auto L = ctx.period();
  if (!L || *L > options.max_bitmap_period) return;
  period_ = *L;
  const std::uint64_t word_count = (period_ + 63) / 64;
  bits_.assign(word_count, 0);
  const auto groups = build_mask_groups(ctx_, 8192);
  std::vector<std::uint64_t> idx(groups.size(), 0);
  for (std::uint64_t w = 0; w < word_count; ++w) {
    std::uint64_t acc = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      acc |= groups[g].words[idx[g]];
      if (++idx[g] == groups[g].period) idx[g] = 0;
    }
    bits_[w] = acc;
  }
  bits_.back() &= last_word_mask(period_);
}

bool Supergroup::contains(std::uint64_t k) const {
  if (!materialized()) return in_supergroup(ctx_, k);
  const std::uint64_t i = k % period_;
  return (bits_[i / 64] >> (i % 64)) & 1;
}

std::uint64_t Supergroup::size() const {
  if (!materialized()) return supergroup_census(ctx_).supergroup_size;
  std::uint64_t n = 0;
  for (std::uint64_t w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::vector<std::uint64_t> Supergroup::elements() const {
  if (!materialized()) throw CapacityError("supergroup elements: period not materialized");
  std::vector<std::uint64_t> out;
  // Residue 0 (k = L) is never covered, so ascending residue order is ascending k.
  for (std::uint64_t k = 1; k < period_; ++k) {
    if ((bits_[k / 64] >> (k % 64)) & 1) out.push_back(k);
  }
  return out;
}

std::vector<std::uint64_t> Supergroup::complement() const {
  if (!materialized()) throw CapacityError("supergroup complement: period not materialized");
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k < period_; ++k) {
    if (!((bits_[k / 64] >> (k % 64)) & 1)) out.push_back(k);
  }
  out.push_back(period_);
  return out;
}

Supergroup supergroup(const SieveContext& ctx, MaterializeOptions options) {
  return Supergroup(ctx, options);
}

std::vector<std::uint64_t> nonranks_to_parent(std::uint64_t p, const SieveContext& ctx,
                                              MaterializeOptions options) {
  const auto it = std::find_if(ctx.progressions.begin(), ctx.progressions.end(),
                               [p](const auto& pr) { return pr.p == p; });
  if (it == ctx.progressions.end()) {
    throw DomainError("nonranks_to_parent: p = " + std::to_string(p) +
                      " is not a prime in [5, p_j = " + std::to_string(ctx.p_j) + "]");
  }
  const std::uint64_t L = require_period(ctx, options.max_bitmap_period, "nonranks_to_parent");
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = it->classes[0]; k <= L; k += p) {
    for (std::uint64_t c : {k, k - it->classes[0] + it->classes[1]}) {
      if (c > L) continue;
      const bool earlier = std::any_of(ctx.progressions.begin(), it,
                                       [c](const auto& pr) { return pr.covers(c); });
      if (!earlier) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RemnantSet remnant_set(const SieveContext& ctx, MaterializeOptions options) {
  require_period(ctx, options.max_bitmap_period, "remnant_set");
  return RemnantSet{ctx, Supergroup(ctx, options).complement()};
}

BigInt remnant_count_R0(std::uint64_t p_j) {
  if (p_j < 5 || !is_prime(p_j)) {
    throw DomainError("remnant_count_R0: p_j must be a prime >= 5, got " + std::to_string(p_j));
  }
  BigInt r = 1;
  for (std::uint64_t p : primes_up_to(p_j).primes) {
    if (p >= 5) r *= p - 2;
  }
  return r;
}

std::vector<std::uint64_t> front_twin_ranks(const SieveContext& ctx) {
  const BigInt bound = std::min(ctx.M_next, ctx.L);
  const auto top = static_cast<std::uint64_t>(bound);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= top; ++k) {
    if (in_supergroup(ctx, k)) continue;
    if (!is_twin_rank(k)) {
      const bool edge = BigInt(k) == ctx.M_next;  // 6 M(j+1) + 1 = p_{j+1}^2
      throw InvariantViolation("front remnant " + std::to_string(k) + " <= M(j+1) for p_j = " +
                               std::to_string(ctx.p_j) + " is not a twin rank" +
                               (edge ? " (k = M(j+1), 6k + 1 = " + std::to_string(ctx.p_next) + "^2)" : ""));
    }
    out.push_back(k);
  }
  return out;
}

SupergroupCensus supergroup_census(const SieveContext& ctx, CensusOptions options) {
  const std::uint64_t L = require_period(ctx, options.max_period, "supergroup_census");
  const std::uint64_t word_count = (L + 63) / 64;
  const std::uint64_t tail = last_word_mask(L);

  std::vector<MaskGroup> groups;
  std::vector<std::vector<std::uint64_t>> patterns;
  if (options.per_parent) {
    for (const auto& pr : ctx.progressions) patterns.push_back(residue_mask_pattern(pr));
  } else {
    groups = build_mask_groups(ctx, 8192);
  }

  unsigned threads = options.threads ? options.threads : default_thread_count();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, word_count / 4096 + 1));
  std::vector<PartialCensus> parts(threads);
  const std::uint64_t chunk = (word_count + threads - 1) / threads;
  auto work = [&](unsigned t) {
    const std::uint64_t b = std::min(word_count, t * chunk);
    const std::uint64_t e = std::min(word_count, b + chunk);
    parts[t] = census_range(ctx, groups, patterns, b, e, word_count, tail, options.per_parent);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  SupergroupCensus census;
  census.period = L;
  for (const auto& part : parts) census.supergroup_size += part.members;
  census.remnant_count = L - census.supergroup_size;
  if (options.per_parent) {
    for (std::size_t i = 0; i < ctx.progressions.size(); ++i) {
      std::uint64_t n = 0;
      for (const auto& part : parts) n += part.parents[i];
      census.parent_sizes.emplace_back(ctx.progressions[i].p, n);
    }
  }
  return census;
}

LogPrimorialDiagnostic log_primorial_diagnostic(std::uint64_t p_j) {
  const auto ctx = make_context(p_j);
  LogPrimorialDiagnostic d;
  d.p_j = p_j;
  for (const auto& pr : ctx.progressions) d.log_L += std::log(static_cast<double>(pr.p));
  d.log_L_exact = log_of(ctx.L);
  d.log_L_minus_p_j = d.log_L - static_cast<double>(p_j);
  if (ctx.x > 0) {
    d.log_x = log_of(ctx.x);
    d.log_L_minus_log_x = d.log_L - *d.log_x;
  }
  return d;
}

std::vector<bool> generate_nonranks(std::uint64_t limit) {
  std::vector<bool> generated(limit + 1, false);
  const PrimalityBitmap primality(6 * limit + 3);
  for_each_progression_term(limit, primality, [&](std::uint64_t k, std::uint64_t, std::uint64_t) {
    generated[k] = true;
  });
  return generated;
}

ProgressionCheck check_nonrank_progressions(std::uint64_t limit) {
  if (limit < 1) throw DomainError("check_nonrank_progressions: limit must be >= 1");
  ProgressionCheck check;
  check.limit = limit;
  const PrimalityBitmap primality(6 * limit + 3);
  std::vector<bool> generated(limit + 1, false);
  for_each_progression_term(limit, primality, [&](std::uint64_t k, std::uint64_t p, std::uint64_t n) {
    generated[k] = true;
    if (n == 0) return;
    const std::uint64_t lo = 6 * k - 1;
    const std::uint64_t hi = 6 * k + 1;
    const bool proper = (lo % p == 0 && lo != p) || (hi % p == 0 && hi != p);
    if (!proper) check.unsound.push_back(k);
  });
  for (std::uint64_t k = 1; k <= limit; ++k) {
    const bool nonrank = !(primality.is_prime(6 * k - 1) && primality.is_prime(6 * k + 1));
    check.nonranks += nonrank;
    check.generated += generated[k];
    if (nonrank != generated[k]) check.mismatches.push_back(k);
  }
  return check;
}

void write_progressions_csv(std::ostream& out, const SieveContext& ctx) {
  out << "p,offset,class1,class2\n";
  for (const auto& pr : ctx.progressions) {
    out << pr.p << ',' << pr.offset << ',' << pr.classes[0] << ',' << pr.classes[1] << '\n';
  }
}

void write_remnants_csv(std::ostream& out, const RemnantSet& remnants) {
  out << "k\n";
  for (std::uint64_t k : remnants.remnants) out << k << '\n';
}

}  // namespace twinsieve
