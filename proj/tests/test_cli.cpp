#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twinsieve/cli.hpp"
#include "twinsieve/errors.hpp"

using namespace twinsieve;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "twinsieve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("twinsieve_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("complex parsing") {
  CHECK(parse_complex("2") == Complex(2, 0));
  CHECK(parse_complex("2+0i") == Complex(2, 0));
  CHECK(parse_complex("1.2+5i") == Complex(1.2, 5));
  CHECK(parse_complex("3-7i") == Complex(3, -7));
  CHECK(parse_complex("5i") == Complex(0, 5));
  CHECK(parse_complex("-i") == Complex(0, -1));
  CHECK(parse_complex(" 1.5 + 2 i ") == Complex(1.5, 2));
  CHECK(parse_complex("1e-3+2e1j") == Complex(1e-3, 20));
  CHECK_THROWS_AS(parse_complex("abc"), DomainError);
  CHECK_THROWS_AS(parse_complex(""), DomainError);
  CHECK_THROWS_AS(parse_complex("1+2"), DomainError);
  CHECK_THROWS_AS(parse_complex("1+2i3"), DomainError);
}

TEST_CASE("sieve subcommand") {
  const auto r = run({"sieve", "--pj", "7", "--limit", "1000"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  CHECK(j["R0"] == 15);
  CHECK(j["remnant_count"] == 15);
  CHECK(j["remnant_count_matches_R0"] == true);
  CHECK(j["progression_mismatches"] == 0);
  CHECK(run({"sieve", "--pj", "4"}).code == kExitUsage);
  CHECK(run({"sieve"}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);

  const auto dir = scratch_dir("sieve");
  // Remnant 28 = M(j+1) for p_j = 11 has 6 * 28 + 1 = 13^2: the front-rank check fails
  // there, but the report and files are still written.
  const auto r11 = run({"sieve", "--pj", "11", "--limit", "500", "--out", dir.string()});
  CHECK(r11.code == kExitInvariant);
  CHECK(json::parse(r11.out).contains("front_twin_ranks_violation"));
  CHECK(std::filesystem::exists(dir / "progressions.csv"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  std::ifstream rem(dir / "remnants.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(rem, line)) ++rows;
  CHECK(rows == 1 + 135);  // header + 3 * 5 * 9

  const auto csv = run({"sieve", "--pj", "7", "--limit", "100", "--format", "csv"});
  CHECK(csv.out.find("R0,15") != std::string::npos);
}

TEST_CASE("verify-legendre") {
  const auto empty = run({"verify-legendre"});
  REQUIRE(empty.code == kExitOk);
  CHECK(json::parse(empty.out) == json::array());
  const auto three = run({"verify-legendre", "--pj", "7,11,13"});
  REQUIRE(three.code == kExitOk);
  const auto arr = json::parse(three.out);
  REQUIRE(arr.size() == 3);
  CHECK(arr[0]["discrepancy"] == -19);
  CHECK(arr[0]["sum_floor"] == 11);
  const auto five = run({"verify-legendre", "--pj", "5,7"});
  CHECK(five.code == kExitOk);
  CHECK(json::parse(five.out).size() == 1);
  CHECK(five.err.find("warning") != std::string::npos);
  CHECK(run({"verify-legendre", "--pj", "7", "--ceiling", "0"}).code == kExitInvariant);
  CHECK(run({"verify-legendre", "--pj", "9"}).code == kExitUsage);
}

TEST_CASE("remainder") {
  const auto r = run({"remainder", "--pj", "7"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("-148/143") != std::string::npos);
}

TEST_CASE("dirichlet subcommands") {
  const auto lemma = run({"dirichlet", "verify-lemma33", "--s", "2+0i", "--d-cutoff", "100000", "--terms", "100000"});
  REQUIRE(lemma.code == kExitOk);
  const auto j = json::parse(lemma.out);
  CHECK(j["identity_residual"].get<double>() < 1e-8);
  CHECK(run({"dirichlet", "verify-lemma33", "--s", "2+"}).code == kExitUsage);
  const auto maj = run({"dirichlet", "majorant", "--nmax", "10000"});
  CHECK(maj.code == kExitOk);
  CHECK(json::parse(maj.out)["coefficient_mismatches"] == 0);
  const auto coeffs = run({"dirichlet", "coeffs", "--nmax", "27"});
  REQUIRE(coeffs.code == kExitOk);
  CHECK(coeffs.out.rfind("n,a_n\n1,1\n9,1\n25,1\n27,2\n", 0) == 0);
  CHECK(run({"dirichlet", "coeffs", "--nmax", "100", "--compare", "--format", "json"}).code == kExitOk);
}

TEST_CASE("perron subcommands") {
  const auto line = run({"perron", "line", "--series", "zeta", "--x", "10.5", "--T", "200", "--sigma", "1.5"});
  REQUIRE(line.code == kExitOk);
  const auto j = json::parse(line.out);
  CHECK(j["exact"] == 10.0);
  CHECK(j["within"] == true);
  CHECK(run({"perron", "theorem34", "--pj", "5"}).code == kExitUsage);
  CHECK(run({"perron", "line", "--series", "nope", "--x", "3"}).code == kExitUsage);
  const auto t37 = run({"perron", "theorem37-bound", "--x", "1e6", "--c", "1"});
  REQUIRE(t37.code == kExitOk);
  CHECK(json::parse(t37.out)["terms"].size() == 4);
}

TEST_CASE("contour scan to files") {
  const auto dir = scratch_dir("scan");
  const auto csv = (dir / "scan.csv").string();
  const auto samples = (dir / "samples.csv").string();
  const auto r = run({"perron", "contour-scan", "--pj", "7", "--sigmas", "0.55,1.25", "--T", "30", "--step",
                      "0.05", "--cutoff", "1000", "--out", csv, "--samples-out", samples});
  REQUIRE(r.code == kExitOk);
  const auto summary = json::parse(r.out);
  CHECK(summary["rows"] == 2);
  CHECK(summary["flagged_samples"].get<std::size_t>() > 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("sigma,T,step,", 0) == 0);
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 2);
  std::ifstream s(samples);
  std::getline(s, header);
  CHECK(header == "sigma,t,re,im,abs,denom_min");
}
