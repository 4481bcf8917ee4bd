#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kplab/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("kplab-cli-test-" + std::to_string(++counter));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "kplab");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (std::string& s : args) argv.push_back(s.data());
  return kplab::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("entropy command reproduces the two-center closed form") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "entropy.json";
  write_text(cfg, R"({
    "config": {"dim": 1, "points": [[-1.0], [1.0]]},
    "orders": [2.0, "inf"],
    "noise": [1.0]
  })");
  const fs::path out = tmp.path / "run";
  CHECK(run({"entropy", cfg.string(), "--out", out.string()}) == 0);

  const std::string csv = read_text(out / "entropy.csv");
  const auto lines = csv_lines(csv);
  REQUIRE(lines.size() == 3);  // header + 2 orders x 1 noise
  CHECK(lines[0].rfind("alpha,s,value", 0) == 0);

  const auto row2 = split_csv_row(lines[1]);
  REQUIRE(row2.size() >= 5);
  // h_2 of the (±1, s = 1) pair: log 2 + (1/2)·log 4π − log(1 + e^{−1}).
  const double expected = std::log(2.0) +
                          0.5 * std::log(4.0 * std::acos(-1.0)) -
                          std::log1p(std::exp(-1.0));
  CHECK(std::stod(row2[2]) == doctest::Approx(expected).epsilon(1e-12));

  const auto row_inf = split_csv_row(lines[2]);
  // sup of the mixture sits at the midpoint: f(0) = e^{−1/2}/√(2π), so
  // h_∞ = 1/2 + (1/2)·log 2π.
  const double sup_expected = 0.5 + 0.5 * std::log(2.0 * std::acos(-1.0));
  CHECK(std::stod(row_inf[2]) ==
        doctest::Approx(sup_expected).epsilon(1e-9));

  CHECK(fs::exists(out / "manifest.json"));
  const std::string manifest = read_text(out / "manifest.json");
  CHECK(manifest.find("\"command\": \"entropy\"") != std::string::npos);
  CHECK(manifest.find("entropy.csv") != std::string::npos);
}

TEST_CASE("runs with the same seed produce byte-identical tables") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "entropy.json";
  write_text(cfg, R"({
    "config": {"dim": 2, "points": [[0.0, 0.0], [1.5, -0.5], [0.3, 1.1]]},
    "orders": [0.6, 1.0, 2.0],
    "noise": [0.5, 2.0],
    "seed": 99
  })");
  const fs::path out_a = tmp.path / "a";
  const fs::path out_b = tmp.path / "b";
  REQUIRE(run({"entropy", cfg.string(), "--out", out_a.string()}) == 0);
  REQUIRE(run({"entropy", cfg.string(), "--out", out_b.string()}) == 0);
  const std::string csv_a = read_text(out_a / "entropy.csv");
  CHECK(!csv_a.empty());
  CHECK(csv_a == read_text(out_b / "entropy.csv"));

  // Deterministic estimators ignore the master seed, so force Monte Carlo;
  // there a different seed must change the estimates.
  const fs::path out_c = tmp.path / "c";
  const fs::path out_d = tmp.path / "d";
  REQUIRE(run({"entropy", cfg.string(), "--out", out_c.string(), "--policy",
               "mc", "--samples", "20000", "--seed", "100"}) == 0);
  REQUIRE(run({"entropy", cfg.string(), "--out", out_d.string(), "--policy",
               "mc", "--samples", "20000", "--seed", "101"}) == 0);
  const std::string csv_c = read_text(out_c / "entropy.csv");
  CHECK(!csv_c.empty());
  CHECK(csv_c != read_text(out_d / "entropy.csv"));
}

TEST_CASE("kp-verify on an identity pair holds with exactly zero gaps") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "kp.json";
  write_text(cfg, R"({
    "source": {"dim": 1, "points": [[-1.0], [0.5]]},
    "target": {"dim": 1, "points": [[-1.0], [0.5]]},
    "orders": [1.0, 2.0],
    "noise": [1.0]
  })");
  const fs::path out = tmp.path / "run";
  CHECK(run({"kp-verify", cfg.string(), "--out", out.string()}) == 0);
  const auto lines = csv_lines(read_text(out / "kp_verify.csv"));
  REQUIRE(lines.size() == 3);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv_row(lines[i]);
    REQUIRE(cells.size() >= 8);
    CHECK(std::stod(cells[4]) == 0.0);          // gap
    CHECK(cells[7] == "holds");                 // verdict
  }
}

TEST_CASE("minty command emits the extension and its constraint audit") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "minty.json";
  write_text(cfg, R"({
    "xs": [[0.0], [1.0], [2.0]],
    "ys": [[0.0], [1.0], [4.0]],
    "x0": [0.5]
  })");
  const fs::path out = tmp.path / "run";
  CHECK(run({"minty", cfg.string(), "--out", out.string()}) == 0);
  const std::string csv = read_text(out / "minty.csv");
  CHECK(!csv_lines(csv).empty());
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("volume command compares a pair and reports consistency") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "volume.json";
  write_text(cfg, R"({
    "centers": [[0.0, 0.0], [1.0, 0.0]],
    "radius": 1.0,
    "samples": 50000,
    "contraction": {"method": "scaling", "seed": 4}
  })");
  const fs::path out = tmp.path / "run";
  CHECK(run({"volume", cfg.string(), "--out", out.string()}) == 0);
  const auto lines = csv_lines(read_text(out / "volume.csv"));
  REQUIRE(lines.size() >= 2);
}

TEST_CASE("malformed JSON fails with exit code 1") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "broken.json";
  write_text(cfg, "{\"config\": [1, 2,,]}");
  CHECK(run({"entropy", cfg.string(), "--out",
             (tmp.path / "run").string()}) == 1);
}

TEST_CASE("unknown config fields are rejected") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "unknown.json";
  write_text(cfg, R"({
    "config": {"dim": 1, "points": [[0.0]]},
    "oders": [2.0]
  })");
  CHECK(run({"entropy", cfg.string(), "--out",
             (tmp.path / "run").string()}) == 1);
}

TEST_CASE("missing required fields are rejected") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "missing.json";
  write_text(cfg, R"({"orders": [2.0]})");
  CHECK(run({"entropy", cfg.string(), "--out",
             (tmp.path / "run").string()}) == 1);
}

TEST_CASE("a nonexistent config path is a usage error") {
  TempDir tmp;
  CHECK(run({"entropy", (tmp.path / "nope.json").string()}) != 0);
}

TEST_CASE("flag values override config values") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "entropy.json";
  write_text(cfg, R"({
    "config": {"dim": 1, "points": [[-1.0], [1.0]]},
    "orders": [1.7],
    "policy": "quadrature",
    "seed": 5
  })");
  const fs::path out_q = tmp.path / "quad";
  REQUIRE(run({"entropy", cfg.string(), "--out", out_q.string()}) == 0);
  const auto quad_row = split_csv_row(csv_lines(read_text(out_q / "entropy.csv"))[1]);
  CHECK(quad_row[4] == "quadrature");
  CHECK(std::stod(quad_row[3]) == 0.0);  // deterministic: no standard error

  const fs::path out_mc = tmp.path / "mc";
  REQUIRE(run({"entropy", cfg.string(), "--out", out_mc.string(), "--policy",
               "mc", "--samples", "20000"}) == 0);
  const auto mc_row = split_csv_row(csv_lines(read_text(out_mc / "entropy.csv"))[1]);
  CHECK(mc_row[4] == "monte-carlo");
  CHECK(std::stod(mc_row[3]) > 0.0);
  // The two estimates agree within Monte Carlo noise.
  CHECK(std::abs(std::stod(mc_row[2]) - std::stod(quad_row[2])) <=
        4.0 * std::stod(mc_row[3]));
}

TEST_CASE("an invalid policy name is rejected by the argument parser") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "entropy.json";
  write_text(cfg, R"({"config": {"dim": 1, "points": [[0.0]]}})");
  CHECK(run({"entropy", cfg.string(), "--policy", "magic"}) != 0);
}
