#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dini/cli.hpp"

using namespace dini;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string* file_named(const CommandOutput& o, const std::string& name) {
  for (const auto& [n, text] : o.files)
    if (n == name) return &text;
  return nullptr;
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("dini_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_exe(const std::string& args, const fs::path& dir) {
  std::string cmd = std::string("\"") + DINI_LAB_EXE + "\" " + args + " > \"" +
                    (dir / "stdout.txt").string() + "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("trace on a homogeneous harmonic gives N = 8") {
  auto out = run_command("trace", json{{"case", "imz_kappa2"}, {"radii", {{"dyadic", {{"count", 8}}}}}});
  CHECK(out.report["pass"].get<bool>());
  auto rows = csv_rows(*file_named(out, "trace.csv"));
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"r", "H", "I", "N", "valid"});
  for (size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][3]) - 8.0) <= 1e-8);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(run_command("trace", json::object()), DomainError);
  CHECK_THROWS_AS(run_command("trace", json{{"case", "no_such_case"}}), DomainError);
  CHECK_THROWS_AS(run_command("bogus", json{{"case", "imz_kappa2"}}), DomainError);
  CHECK_THROWS_AS(run_command("trace", json{{"case", "imz_kappa2"}, {"radii", {0.2, 0.1}}}), DomainError);
  CHECK_THROWS_AS(run_command("trace", json{{"case", "imz_kappa2"}, {"radii", "all"}}), DomainError);
  CHECK_THROWS_AS(run_command("trace", json{{"case", "imz_kappa2"}, {"alpha", "one"}}), DomainError);
}

TEST_CASE("alpha just above -1 is accepted") {
  auto out = run_command("trace", json{{"case", "unit_constant"}, {"alpha", -0.5}});
  CHECK(out.report["pass"].get<bool>());
  CHECK(out.report["constants"]["alpha"].get<double>() == -0.5);
}

TEST_CASE("ledger reports k = 80 at lambda = K = 1") {
  auto out = run_command("ledger", json{{"lambda", 1.0}, {"K", 1.0}, {"points_per_ball", 50}});
  CHECK(out.report["constants"]["k"].get<double>() == 80.0);
  CHECK(out.report["pass"].get<bool>());
}

TEST_CASE("order scan over the eigenfamily") {
  auto out = run_command("order", json{{"family", {{"kind", "disk_eigen"}, {"kappa", {1, 2, 3, 4, 5, 6}}}}});
  auto rows = csv_rows(*file_named(out, "order_scan.csv"));
  REQUIRE(rows.size() == 7);
  for (size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) < 1.0);
}

TEST_CASE("domain check on a power-modulus chart") {
  auto out = run_command("domain", json{{"domain", {{"kind", "power"}, {"beta", 0.5}, {"R0", 0.5}}},
                                        {"levels", 6}, {"samples", 128}});
  CHECK(out.report["pass"].get<bool>());
  CHECK(csv_rows(*file_named(out, "domain.csv")).size() == 7);
}

TEST_CASE("solve then trace the stored grid") {
  auto s = run_command("solve", json{{"solve", {{"data", {{"kind", "imz"}, {"kappa", 2}}}}}});
  CHECK(s.report["pass"].get<bool>());
  CHECK(s.report["constants"]["max_error"].get<double>() < 1e-8);
  fs::path d = scratch_dir("grid");
  write(d / "grid.json", *file_named(s, "grid.json"));
  auto t = run_command("trace", json{{"case", {{"grid", (d / "grid.json").string()}}},
                                     {"radii", {0.05, 0.1, 0.2}}});
  auto rows = csv_rows(*file_named(t, "trace.csv"));
  for (size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][3]) - 8.0) < 0.05);
}

TEST_CASE("binary: exit codes and error JSON") {
  fs::path d = scratch_dir("exit");
  write(d / "missing.json", R"({"case": "no_such_case"})");
  CHECK(run_exe("trace --config \"" + (d / "missing.json").string() + "\" --out \"" + d.string() + "\"", d) == 2);
  json err = json::parse(slurp(d / "stderr.txt"));
  CHECK(err["exit_code"].get<int>() == 2);
  CHECK(err["error"].get<std::string>() == "config");

  write(d / "broken.json", "{ not json");
  CHECK(run_exe("trace --config \"" + (d / "broken.json").string() + "\"", d) == 2);
  CHECK(run_exe("trace --no-such-flag", d) == 2);

  // A strongly indefinite operator cannot be solved: numerical failure.
  write(d / "indef.json",
        R"({"solve": {"potential": {"kind": "constant", "value": -10000}, "data": {"kind": "depth"}}})");
  CHECK(run_exe("solve --config \"" + (d / "indef.json").string() + "\" --out \"" + d.string() + "\"", d) == 3);
  err = json::parse(slurp(d / "stderr.txt"));
  CHECK(err["exit_code"].get<int>() == 3);
}

TEST_CASE("binary: outputs are byte-identical and the sidecar round-trips") {
  fs::path d = scratch_dir("roundtrip");
  write(d / "cfg.json", R"({"case": "disk_eigen_k1_m1", "radii": {"grid": {"min": 0.02, "max": 0.3, "count": 10}}})");
  fs::create_directories(d / "a");
  fs::create_directories(d / "b");
  fs::create_directories(d / "c");
  REQUIRE(run_exe("monotone --config \"" + (d / "cfg.json").string() + "\" --out \"" + (d / "a").string() + "\"", d) == 0);
  CHECK(slurp(d / "stdout.txt").rfind("PASS monotone", 0) == 0);
  REQUIRE(run_exe("monotone --config \"" + (d / "cfg.json").string() + "\" --out \"" + (d / "b").string() + "\"", d) == 0);
  REQUIRE(run_exe("monotone --config \"" + (d / "a" / "monotone.json").string() + "\" --out \"" + (d / "c").string() + "\"", d) == 0);
  for (const char* f : {"monotone.json", "monotone.csv"}) {
    INFO(f);
    CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
    CHECK(slurp(d / "a" / f) == slurp(d / "c" / f));
  }
  write(d / "ledger.json", R"({"lambda": 1.0, "K": 1.0, "points_per_ball": 50})");
  REQUIRE(run_exe("ledger --seed 3 --config \"" + (d / "ledger.json").string() + "\" --out \"" + d.string() + "\"", d) == 0);
  json rep = json::parse(slurp(d / "ledger.json"));
  CHECK(rep["constants"]["k"].get<double>() == 80.0);
  CHECK(rep["config"]["seed"].get<int>() == 3);
}
