// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskcr/cli.hpp"

using namespace riskcr;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("riskcr_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("csr solve matches the known optimum and emits sorted JSON") {
  const CliResult r = run({"csr", "solve", "--delta", "0", "--json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["alpha"].get<double>() == doctest::Approx(1.58198).epsilon(1e-3));
  CHECK(j["problem"] == "csr");
  // nlohmann objects iterate in sorted key order; dump is stable
  std::string prev;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CHECK(prev < it.key());
    prev = it.key();
  }
}

TEST_CASE("dsr solve spans both phase regimes") {
  const CliResult det = run({"dsr", "solve", "--B", "4", "--delta", "0.85", "--json"});
  CHECK(det.code == kExitOk);
  CHECK(nlohmann::json::parse(det.out)["alpha"].get<double>() == doctest::Approx(1.75).epsilon(1e-3));
}

TEST_CASE("oms solve hits the deterministic plateau") {
  const CliResult r = run({"oms", "solve", "--L", "1", "--U", "100", "--delta", "0.6", "--json"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["alpha"].get<double>() == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"csr", "solve", "--delta", "1.5"}).code == kExitUsage);
  CHECK(run({"csr", "solve", "--bogus"}).code == kExitUsage);
  CHECK(run({"dsr", "solve", "--B", "1", "--delta", "0"}).code == kExitUsage);
  CHECK(run({"nonsense"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  // empty delta list for a sweep
  CHECK(run({"csr", "sweep"}).code == kExitUsage);
  // unsorted deltas
  CHECK(run({"csr", "sweep", "--delta", "0.5,0.1"}).code == kExitUsage);
  // simulation below the statistical floor
  CHECK(run({"csr", "simulate", "--delta", "0.5", "--samples", "10"}).code == kExitUsage);
}

TEST_CASE("bounds and suboptimal subcommands") {
  const CliResult b = run({"dsr", "bounds", "--B", "4", "--json"});
  CHECK(b.code == kExitOk);
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j["deterministic_at_or_above"].get<double>() == doctest::Approx(0.8));
  const CliResult s = run({"oms", "suboptimal", "--L", "1", "--U", "100", "--json"});
  CHECK(nlohmann::json::parse(s.out)["alpha"].get<double>() == doctest::Approx(10.0));
}

TEST_CASE("csr sweep CSV shape, ordering invariant, and round-trip") {
  const fs::path csv_path = temp_file("csr_sweep.csv");
  const CliResult r = run({"csr", "sweep", "--delta",
                           "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", "--out", csv_path.string()});
  REQUIRE(r.code == kExitOk);
  const auto rows = parse_csv(slurp(csv_path));
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == std::vector<std::string>{"delta", "optimal", "suboptimal", "upper_bound",
                                            "lower_bound"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    const double optimal = std::stod(rows[i][1]);
    const double suboptimal = std::stod(rows[i][2]);
    const double lower = std::stod(rows[i][4]);
    CHECK(rows[i][3].empty());  // upper_bound not requested by default
    CHECK(lower <= optimal + 1e-3);
    CHECK(optimal <= suboptimal + 1e-3);
    // round-trip at the printed precision
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", optimal);
    CHECK(rows[i][1] == buf);
  }
  fs::remove(csv_path);
}

TEST_CASE("oms sweep matches the locked golden CSV") {
  const fs::path csv_path = temp_file("oms_sweep.csv");
  const CliResult r = run({"oms", "sweep", "--L", "1", "--U", "100", "--delta",
                           "0,0.05,0.1,0.2,0.3,0.4,0.5,0.7,1", "--out", csv_path.string()});
  REQUIRE(r.code == kExitOk);
  const auto got = parse_csv(slurp(csv_path));
  const auto golden = parse_csv(slurp(fs::path(RISKCR_TEST_DATA_DIR) / "oms_sweep_theta100.csv"));
  REQUIRE(got.size() == golden.size());
  CHECK(got[0] == golden[0]);
  for (std::size_t i = 1; i < got.size(); ++i) {
    REQUIRE(got[i].size() == golden[i].size());
    for (std::size_t j = 0; j < got[i].size(); ++j) {
      if (golden[i][j].empty()) {
        CHECK(got[i][j].empty());
      } else {
        CHECK(std::stod(got[i][j]) == doctest::Approx(std::stod(golden[i][j])).epsilon(1e-6));
      }
    }
  }
  fs::remove(csv_path);
}

TEST_CASE("csr sweep matches the locked golden CSV") {
  const fs::path csv_path = temp_file("csr_sweep_golden.csv");
  const CliResult r = run({"csr", "sweep", "--delta", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                           "--out", csv_path.string()});
  REQUIRE(r.code == kExitOk);
  const auto got = parse_csv(slurp(csv_path));
  const auto golden = parse_csv(slurp(fs::path(RISKCR_TEST_DATA_DIR) / "csr_sweep.csv"));
  REQUIRE(got.size() == golden.size());
  for (std::size_t i = 1; i < got.size(); ++i) {
    for (std::size_t j = 0; j < got[i].size(); ++j) {
      if (golden[i][j].empty())
        CHECK(got[i][j].empty());
      else
        CHECK(std::stod(got[i][j]) == doctest::Approx(std::stod(golden[i][j])).epsilon(1e-6));
    }
  }
  fs::remove(csv_path);
}

TEST_CASE("sweep SVG emission") {
  const fs::path csv_path = temp_file("sweep.csv");
  const fs::path svg_path = temp_file("sweep.svg");
  const CliResult r = run({"oms", "sweep", "--L", "1", "--U", "100", "--delta", "0,0.25,0.5",
                           "--out", csv_path.string(), "--svg", svg_path.string()});
  REQUIRE(r.code == kExitOk);
  const std::string svg = slurp(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("delta") != std::string::npos);
  CHECK(svg.find("DCR") != std::string::npos);
  fs::remove(csv_path);
  fs::remove(svg_path);
}

TEST_CASE("sweep to an unwritable path exits 4") {
  CHECK(run({"csr", "sweep", "--delta", "0.5", "--out", "/nonexistent_dir/x.csv"}).code == kExitIo);
}

TEST_CASE("simulate subcommand exits 0 on agreement and is byte-stable") {
  const fs::path a_path = temp_file("sim_a.csv");
  const fs::path b_path = temp_file("sim_b.csv");
  const std::vector<std::string> base{"csr",  "simulate", "--delta",  "0.5",
                                      "--samples", "100000",   "--seed", "7"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", a_path.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", b_path.string()});
  const CliResult ra = run(args_a);
  CHECK(ra.code == kExitOk);
  const CliResult rb = run(args_b);
  CHECK(rb.code == kExitOk);
  CHECK(slurp(a_path) == slurp(b_path));
  const auto rows = parse_csv(slurp(a_path));
  CHECK(rows[0] == std::vector<std::string>{"decision", "empirical", "analytic", "gap"});
  fs::remove(a_path);
  fs::remove(b_path);
}
