#include "twinsieve/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "twinsieve/dirichlet.hpp"
#include "twinsieve/errors.hpp"
#include "twinsieve/integrands.hpp"
#include "twinsieve/legendre.hpp"
#include "twinsieve/pairsieve.hpp"
#include "twinsieve/perron.hpp"
#include "twinsieve/primes.hpp"

namespace twinsieve {
namespace {

using json = nlohmann::ordered_json;

enum class Format { Json, Csv };

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); })) {
    std::string joined;
    for (std::size_t i = 0; i < j.size(); ++i) joined += (i ? ";" : "") + scalar_text(j[i]);
    out.emplace_back(prefix, joined);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

// Objects become key,value rows; arrays of objects become a table.
void emit(const json& j, Format f, std::ostream& out) {
  if (f == Format::Json) {
    out << j.dump(2) << '\n';
    return;
  }
  if (j.is_array()) {
    std::vector<std::vector<std::pair<std::string, std::string>>> rows;
    for (const auto& e : j) {
      rows.emplace_back();
      flatten(e, "", rows.back());
    }
    if (rows.empty()) return;
    for (std::size_t i = 0; i < rows[0].size(); ++i) out << (i ? "," : "") << rows[0][i].first;
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i].second;
      out << '\n';
    }
    return;
  }
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(j, "", kv);
  out << "key,value\n";
  for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
}

json big(const BigInt& v) {
  if (const auto i = to_int64(v)) return *i;
  return to_string(v);
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// Non-finite doubles become strings so JSON stays lossless.
json num(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

json estimate_json(const PerronEstimate& e) {
  json flags = json::array();
  for (const auto& f : e.flags) flags.push_back({{"t", f.t}, {"zeta_abs", f.zeta_abs}, {"kind", to_string(f.kind)}});
  return json{{"value", complex_json(e.value)},
              {"quad_error", num(e.quad_error)},
              {"truncation_bound", num(e.truncation_bound)},
              {"series_tail", num(e.series_tail)},
              {"step", e.step},
              {"samples", e.samples},
              {"max_abs_integrand", e.max_abs_integrand},
              {"excluded", e.excluded},
              {"flags", flags}};
}

// Output sink honoring --out.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct Common {
  std::string format = "json";
  std::string out;
  Format fmt() const { return format == "csv" ? Format::Csv : Format::Json; }
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format = "json") {
  c.format = default_format;
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "Write output to this path");
}

ContourSpec contour_from(double sigma, double T, double step, const std::string& rule) {
  return {sigma, T, step, rule == "midpoint" ? QuadratureRule::Midpoint : QuadratureRule::Simpson};
}

SeriesModel model_from(const std::string& name, std::uint64_t p_j, std::uint64_t cutoff) {
  if (name == "zeta") return zeta_series();
  if (name == "mobius") return mobius_series();
  if (name == "unit") return unit_series();
  if (name == "zero") return zero_series();
  if (name == "twin") {
    if (p_j < 5 || !is_prime(p_j)) throw DomainError("--pj must be a prime >= 5 for the twin series");
    return twin_series(p_j, cutoff);
  }
  throw DomainError("unknown series " + name);
}

}  // namespace

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  static const std::regex re(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-])?((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?([ij]))?$)");
  std::smatch m;
  if (s.empty() || !std::regex_match(s, m, re) || (m[1].matched && m[3].matched && !m[2].matched)) {
    throw DomainError("cannot parse complex number '" + text + "'");
  }
  const double first = m[1].matched ? std::stod(m[1].str()) : 0.0;
  if (!m[4].matched) return {first, 0.0};
  if (!m[2].matched && !m[3].matched) {
    // "5i" or "i": the whole number is the imaginary part.
    return {0.0, m[1].matched ? first : 1.0};
  }
  double im = m[3].matched ? std::stod(m[3].str()) : 1.0;
  if (m[2].matched && m[2].str() == "-") im = -im;
  return {first, im};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twin-prime pair sieve, Legendre identity, Dirichlet series and Perron integral toolkit"};
  app.require_subcommand(1);
  int status = kExitOk;

  // sieve
  auto* sieve = app.add_subcommand("sieve", "Supergroup, remnants and progression checks for one p_j");
  std::uint64_t sieve_pj = 0, sieve_limit = 100000;
  std::string sieve_dir;
  Common sieve_c;
  sieve->add_option("--pj", sieve_pj, "Largest sieving prime")->required();
  sieve->add_option("--limit", sieve_limit, "Check the progression generator on [1, limit]");
  sieve->add_option("--out", sieve_dir, "Directory for progressions.csv, remnants.csv and report.json");
  sieve->add_option("--format", sieve_c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sieve->callback([&] {
    if (sieve_pj < 5 || !is_prime(sieve_pj)) throw DomainError("--pj must be a prime >= 5");
    const auto ctx = make_context(sieve_pj);
    json report;
    report["p_j"] = sieve_pj;
    report["L"] = big(ctx.L);
    report["M"] = big(ctx.M_next);
    report["x"] = big(ctx.x);
    const BigInt R0 = remnant_count_R0(sieve_pj);
    report["R0"] = big(R0);
    const auto census = supergroup_census(ctx);
    report["supergroup_size"] = census.supergroup_size;
    report["remnant_count"] = census.remnant_count;
    const bool count_ok = BigInt(census.remnant_count) == R0;
    report["remnant_count_matches_R0"] = count_ok;
    bool front_ok = true;
    try {
      report["front_twin_ranks"] = front_twin_ranks(ctx).size();
    } catch (const InvariantViolation& e) {
      front_ok = false;
      report["front_twin_ranks_violation"] = e.what();
      err << "invariant violation: " << e.what() << '\n';
    }
    const auto check = check_nonrank_progressions(sieve_limit);
    report["progression_limit"] = sieve_limit;
    report["progression_mismatches"] = check.mismatches.size();
    report["progression_unsound"] = check.unsound.size();
    if (!sieve_dir.empty()) {
      std::filesystem::create_directories(sieve_dir);
      std::ofstream prog(std::filesystem::path(sieve_dir) / "progressions.csv");
      write_progressions_csv(prog, ctx);
      const auto period = ctx.period();
      if (period && *period <= MaterializeOptions{}.max_bitmap_period) {
        std::ofstream rem(std::filesystem::path(sieve_dir) / "remnants.csv");
        write_remnants_csv(rem, remnant_set(ctx));
        report["remnants_file"] = "remnants.csv";
      } else {
        err << "warning: period too large to list remnants; remnants.csv not written\n";
      }
      std::ofstream(std::filesystem::path(sieve_dir) / "report.json") << report.dump(2) << '\n';
    }
    emit(report, sieve_c.fmt(), out);
    if (!count_ok || !front_ok || !check.mismatches.empty() || !check.unsound.empty()) status = kExitInvariant;
  });

  // verify-legendre
  auto* legendre = app.add_subcommand("verify-legendre", "Legendre-type identity reports");
  std::vector<std::uint64_t> leg_pj;
  std::optional<std::int64_t> leg_ceiling;
  Common leg_c;
  legendre->add_option("--pj", leg_pj, "Comma-separated p_j values")->delimiter(',');
  legendre->add_option("--ceiling", leg_ceiling, "Fail when any |discrepancy| exceeds this");
  add_common(legendre, leg_c);
  legendre->callback([&] {
    json arr = json::array();
    bool exceeded = false;
    for (std::uint64_t p : leg_pj) {
      if (p == 5) {
        err << "warning: p_j = 5 skipped (x < 0)\n";
        continue;
      }
      if (p < 7 || !is_prime(p)) throw DomainError("--pj entries must be primes >= 7");
      const auto rep = legendre_report(make_context(p));
      json j = to_json(rep);
      j["terms"] = rep.terms;
      arr.push_back(j);
      if (leg_ceiling && abs(rep.discrepancy) > *leg_ceiling) exceeded = true;
    }
    Sink sink(leg_c.out, out);
    emit(arr, leg_c.fmt(), *sink);
    if (exceeded) status = kExitInvariant;
  });

  // remainder
  auto* remainder = app.add_subcommand("remainder", "Exact -R_E = sum mu(n) 2^nu(n) {x/n}");
  std::uint64_t rem_pj = 0;
  bool rem_no_exact = false;
  Common rem_c;
  remainder->add_option("--pj", rem_pj, "Largest sieving prime")->required();
  remainder->add_flag("--no-exact", rem_no_exact, "Skip the rational sum");
  add_common(remainder, rem_c);
  remainder->callback([&] {
    if (rem_pj < 7 || !is_prime(rem_pj)) throw DomainError("--pj must be a prime >= 7");
    const auto ctx = make_context(rem_pj);
    const auto r = remainder_RE(ctx, {.exact = !rem_no_exact, .enumeration = {}});
    json j{{"p_j", r.p_j}, {"x", r.x}, {"terms", r.terms}, {"minus_RE_float", r.minus_RE_float}};
    if (r.exact_available) {
      j["minus_RE"] = to_string(r.minus_RE);
      j["minus_RE_value"] = to_double(r.minus_RE);
    }
    j["bound_shape_c1"] = remainder_bound_shape(static_cast<double>(r.x), 1.0);
    Sink sink(rem_c.out, out);
    emit(j, rem_c.fmt(), *sink);
  });

  // dirichlet
  auto* dirichlet = app.add_subcommand("dirichlet", "Euler products and Dirichlet coefficients");
  dirichlet->require_subcommand(1);
  auto* lemma = dirichlet->add_subcommand("verify-lemma33", "P1 zeta^2 D (1 - 2^-s)^2 = 1");
  std::string lem_s = "2";
  Lemma33Options lem_o;
  double lem_tol = 1e-8;
  Common lem_c;
  lemma->add_option("--s", lem_s, "Point, e.g. 1.2+5i");
  lemma->add_option("--p1-cutoff", lem_o.p1_cutoff, "Explicit primes in P1");
  lemma->add_option("--d-cutoff", lem_o.d_cutoff, "Primes in the D product");
  lemma->add_option("--terms", lem_o.series_terms, "Coefficients in the D series");
  lemma->add_option("--tol", lem_tol, "Identity tolerance");
  add_common(lemma, lem_c);
  lemma->callback([&] {
    const auto r = verify_lemma33(parse_complex(lem_s), lem_o);
    json j{{"s", complex_json(r.s)},
           {"P1", complex_json(r.P1)},
           {"zeta", complex_json(r.zeta)},
           {"D_product", complex_json(r.D_product)},
           {"D_series", complex_json(r.D_series)},
           {"P1_tail", r.P1_tail},
           {"D_product_tail", r.D_product_tail},
           {"D_series_tail", num(r.D_series_tail)},
           {"identity_residual", r.identity_residual},
           {"series_residual", r.series_residual},
           {"series_allowance", num(r.series_allowance)},
           {"p1_cutoff", lem_o.p1_cutoff},
           {"d_cutoff", lem_o.d_cutoff},
           {"terms", lem_o.series_terms}};
    Sink sink(lem_c.out, out);
    emit(j, lem_c.fmt(), *sink);
    if (r.identity_residual > lem_tol || r.series_residual > r.series_allowance) status = kExitInvariant;
  });

  auto* majorant = dirichlet->add_subcommand("majorant", "2^nu(n) coefficients of zeta^2(s)/zeta(2s)");
  std::uint64_t maj_n = 100000;
  std::string maj_s = "2";
  Common maj_c;
  majorant->add_option("--nmax", maj_n, "Coefficient range");
  majorant->add_option("--s", maj_s, "Point for the numeric check");
  add_common(majorant, maj_c);
  majorant->callback([&] {
    const auto r = majorant_check(maj_n, parse_complex(maj_s));
    json j{{"N_max", r.N_max},
           {"coefficient_mismatches", r.coefficient_mismatches},
           {"s", complex_json(r.s)},
           {"closed_form", complex_json(r.closed_form)},
           {"partial_sum", complex_json(r.partial_sum)},
           {"residual", r.residual},
           {"tail_bound", r.tail_bound}};
    Sink sink(maj_c.out, out);
    emit(j, maj_c.fmt(), *sink);
    if (r.coefficient_mismatches != 0 || r.residual > r.tail_bound) status = kExitInvariant;
  });

  auto* coeffs = dirichlet->add_subcommand("coeffs", "Coefficients of D(s)");
  std::uint64_t coef_n = 1000;
  bool coef_compare = false;
  Common coef_c;
  coeffs->add_option("--nmax", coef_n, "Largest index");
  coeffs->add_flag("--compare", coef_compare, "Report agreement with the exponent formula instead");
  add_common(coeffs, coef_c, "csv");
  coeffs->callback([&] {
    const auto table = D_coefficients(coef_n);
    Sink sink(coef_c.out, out);
    if (coef_compare) {
      const auto rep = compare_exponent_formula(table);
      json mism = json::array();
      for (const auto& m : rep.mismatches) mism.push_back({{"n", m.n}, {"direct", m.direct}, {"formula", m.formula}});
      emit(json{{"N_max", rep.N_max}, {"support", rep.support}, {"agreements", rep.agreements}, {"mismatches", mism}},
           coef_c.fmt(), *sink);
      return;
    }
    json arr = json::array();
    for (std::uint64_t n = 1; n <= coef_n; ++n) {
      if (table[n] != 0) arr.push_back({{"n", n}, {"a_n", table[n]}});
    }
    emit(arr, coef_c.fmt(), *sink);
  });

  // perron
  auto* perron = app.add_subcommand("perron", "Truncated Perron integrals");
  perron->require_subcommand(1);
  struct PerronArgs {
    std::string series = "zeta";
    double x = 10.5;
    double sigma = 1.5;
    double T = 500;
    double step = 0;
    std::string rule = "simpson";
    std::uint64_t p_j = 7;
    std::uint64_t cutoff = 100000;
    Common c;
  };
  auto add_contour = [](CLI::App* cmd, PerronArgs& a) {
    cmd->add_option("--sigma", a.sigma, "Abscissa of the line");
    cmd->add_option("--T", a.T, "Half height");
    cmd->add_option("--step", a.step, "Quadrature step (0: automatic)");
    cmd->add_option("--rule", a.rule, "Quadrature rule")->check(CLI::IsMember({"simpson", "midpoint"}));
    cmd->add_option("--cutoff", a.cutoff, "Euler product cutoff for the twin series");
    add_common(cmd, a.c);
  };

  auto run_sum = [&](PerronArgs& a, bool floor_kind) {
    const auto model = model_from(a.series, a.p_j, a.cutoff);
    const auto contour = contour_from(a.sigma, a.T, a.step, a.rule);
    const auto est = floor_kind ? perron_floor_sum(model, a.x, contour) : perron_line_integral(model, a.x, contour);
    const double target = floor_kind ? floor_target(model, a.x) : line_target(model, a.x);
    const double allowance = est.quad_error + est.truncation_bound + est.series_tail;
    json j{{"series", a.series}, {"x", a.x}, {"sigma", a.sigma}, {"T", a.T}, {"estimate", estimate_json(est)},
           {"exact", target}, {"difference", est.value.real() - target}, {"allowance", num(allowance)},
           {"within", std::fabs(est.value.real() - target) <= allowance}};
    Sink sink(a.c.out, out);
    emit(j, a.c.fmt(), *sink);
    if (est.excluded > 0) status = kExitNumericalFlag;
    else if (!(std::fabs(est.value.real() - target) <= allowance)) status = kExitInvariant;
  };

  PerronArgs line_a, floor_a;
  auto* line = perron->add_subcommand("line", "sum of a_n for n <= x");
  line->add_option("--series", line_a.series, "zeta | mobius | unit | zero | twin");
  line->add_option("--x", line_a.x, "Cut point");
  line->add_option("--pj", line_a.p_j, "p_j for the twin series");
  add_contour(line, line_a);
  line->callback([&] { run_sum(line_a, false); });
  auto* floor_cmd = perron->add_subcommand("floor-sum", "sum of a_n floor(x/n)");
  floor_cmd->add_option("--series", floor_a.series, "zeta | mobius | unit | zero | twin");
  floor_cmd->add_option("--x", floor_a.x, "Cut point");
  floor_cmd->add_option("--pj", floor_a.p_j, "p_j for the twin series");
  add_contour(floor_cmd, floor_a);
  floor_cmd->callback([&] { run_sum(floor_a, true); });

  PerronArgs t34_a;
  t34_a.sigma = 1.1;
  t34_a.T = 1000;
  auto* t34 = perron->add_subcommand("theorem34", "R0 plus the Perron integral against the twin count");
  t34->add_option("--pj", t34_a.p_j, "Largest sieving prime")->required();
  add_contour(t34, t34_a);
  t34->callback([&] {
    const auto ctx = make_context(t34_a.p_j);
    const auto r = theorem34_pi2(ctx, contour_from(t34_a.sigma, t34_a.T, t34_a.step, t34_a.rule), t34_a.cutoff);
    json j{{"p_j", r.p_j},
           {"x", r.x},
           {"sigma", r.contour.sigma},
           {"T", r.contour.T},
           {"cutoff", r.cutoff},
           {"R0", big(r.R0)},
           {"legendre_sum", big(r.legendre_sum)},
           {"c_x", r.c_x},
           {"target", r.target},
           {"integral", estimate_json(r.integral)},
           {"pi2_true", r.pi2_true},
           {"estimate", r.estimate},
           {"residual", r.residual},
           {"error_term_zeta", r.error_term_zeta},
           {"error_term_log", r.error_term_log},
           {"combined_error", num(r.combined_error)},
           {"match", r.match},
           {"integral_residual", r.integral_residual},
           {"integral_error", num(r.integral_error)},
           {"integral_match", r.integral_match}};
    Sink sink(t34_a.c.out, out);
    emit(j, t34_a.c.fmt(), *sink);
    if (r.integral.excluded > 0) status = kExitNumericalFlag;
    else if (!r.match) status = kExitInvariant;
  });

  PerronArgs c36_a;
  c36_a.T = 1000;
  auto* c36 = perron->add_subcommand("cor36", "Fractional-part sum against the exact remainder");
  c36->add_option("--pj", c36_a.p_j, "Largest sieving prime")->required();
  add_contour(c36, c36_a);
  c36->callback([&] {
    const auto ctx = make_context(c36_a.p_j);
    const auto r = cor36_fractional_sum(ctx, contour_from(c36_a.sigma, c36_a.T, c36_a.step, c36_a.rule), c36_a.cutoff);
    json j{{"p_j", r.p_j},
           {"x", r.x},
           {"sigma", r.contour.sigma},
           {"T", r.contour.T},
           {"minus_RE", to_string(r.minus_RE)},
           {"minus_RE_value", to_double(r.minus_RE)},
           {"boundary", r.boundary},
           {"target", r.target},
           {"integral", estimate_json(r.integral)},
           {"residual", r.residual},
           {"error", num(r.error)},
           {"match", r.match}};
    Sink sink(c36_a.c.out, out);
    emit(j, c36_a.c.fmt(), *sink);
    if (r.integral.excluded > 0) status = kExitNumericalFlag;
    else if (!r.match) status = kExitInvariant;
  });

  PerronArgs scan_a;
  scan_a.T = 100;
  std::vector<double> scan_sigmas{0.55, 0.75, 1.0, 1.25};
  std::string samples_out;
  auto* scan = perron->add_subcommand("contour-scan", "Twin-count integrand integrated on several abscissae");
  scan->add_option("--pj", scan_a.p_j, "Largest sieving prime");
  scan->add_option("--sigmas", scan_sigmas, "Comma-separated abscissae")->delimiter(',');
  scan->add_option("--samples-out", samples_out, "Also write per-sample rows (sigma,t,re,im,abs,denom_min)");
  add_contour(scan, scan_a);
  scan_a.c.format = "csv";
  scan->callback([&] {
    const auto ctx = make_context(scan_a.p_j);
    const auto rows = contour_shift_scan(ctx, scan_sigmas, scan_a.T, scan_a.step, scan_a.cutoff);
    std::size_t flagged = 0;
    for (const auto& r : rows) flagged += r.flagged_samples;
    if (scan_a.c.fmt() == Format::Csv) {
      Sink sink(scan_a.c.out, out);
      write_scan_csv(*sink, rows);
    } else {
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back({{"sigma", r.sigma}, {"T", r.T}, {"step", r.step}, {"value", complex_json(r.value)},
                       {"quad_err", num(r.quad_err)}, {"trunc_bound", num(r.trunc_bound)},
                       {"flagged_samples", r.flagged_samples}, {"max_abs_integrand", r.max_abs_integrand},
                       {"x_pow_sigma", r.x_pow_sigma}, {"series_tail", num(r.series_tail)},
                       {"flagged_t", r.flagged_t}});
      }
      Sink sink(scan_a.c.out, out);
      emit(arr, Format::Json, *sink);
    }
    if (!samples_out.empty()) {
      std::ofstream f(samples_out);
      std::vector<LineSample> all;
      for (const auto& r : rows) {
        const auto n = static_cast<std::size_t>(std::llround(2 * r.T / r.step));
        const auto part = integrand_samples(ctx, scan_a.cutoff, LineGrid{r.sigma, -r.T, r.step, n + 1});
        all.insert(all.end(), part.begin(), part.end());
      }
      write_line_samples_csv(f, all);
    }
    if (!scan_a.c.out.empty()) {
      double max_abs = 0;
      for (const auto& r : rows) max_abs = std::max(max_abs, r.max_abs_integrand);
      out << json{{"rows", rows.size()}, {"flagged_samples", flagged}, {"max_abs_integrand", max_abs}}.dump() << '\n';
    }
  });

  auto* t37 = perron->add_subcommand("theorem37-bound", "Error terms of the remainder bound");
  double t37_x = 1e6, t37_c = 1.0, t37_a = 0.0, t37_alpha = 1.5;
  std::optional<double> t37_T, t37_b;
  Common t37_c_opts;
  t37->add_option("--x", t37_x, "x");
  t37->add_option("--c", t37_c, "Zero-free region constant");
  t37->add_option("--T", t37_T, "Height (default exp(sqrt(c log x)))");
  t37->add_option("--a", t37_a, "Right-edge offset constant");
  t37->add_option("--b", t37_b, "Left-edge offset constant (default c)");
  t37->add_option("--alpha", t37_alpha, "Exponent of log x");
  add_common(t37, t37_c_opts);
  t37->callback([&] {
    const auto r = theorem37_bound_calculator(t37_x, t37_c, t37_T, t37_a, t37_b, t37_alpha);
    json j{{"x", r.x},         {"c", r.c},
           {"a", r.a},         {"b", r.b},
           {"alpha", r.alpha}, {"T", r.T},
           {"terms", {r.terms[0], r.terms[1], r.terms[2], r.terms[3]}},
           {"middle", r.middle}, {"bound", r.bound},
           {"bound_over_x", r.bound_over_x}, {"balance", r.balance},
           {"T_argmin", r.T_argmin}, {"middle_at_argmin", r.middle_at_argmin},
           {"argmin_ratio", r.argmin_ratio}};
    Sink sink(t37_c_opts.out, out);
    emit(j, t37_c_opts.fmt(), *sink);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return status;
}

}  // namespace twinsieve
