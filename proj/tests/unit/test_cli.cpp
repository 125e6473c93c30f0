#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "openfluct/cli.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kSource = OPENFLUCT_SOURCE_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("openfluct_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "openfluct");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = openfluct::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string scenario(const char* name) { return (kSource / "scenarios" / name).string(); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

TEST_CASE("run: identity channel writes all outputs") {
  TempDir tmp;
  const auto r = invoke({"run", scenario("identity.json"), "--out", tmp.path.string(), "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  for (const char* f : {"report.json", "report.csv", "pf.csv", "pb.csv", "pb_tilde.csv", "summary.txt"}) {
    CHECK(fs::exists(tmp.path / f));
  }
  const auto doc = nlohmann::json::parse(slurp(tmp.path / "report.json"));
  CHECK(doc["gamma"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(doc["passed"].get<bool>());
}

TEST_CASE("run: amplitude damping matches the independent golden file") {
  TempDir tmp;
  const auto r = invoke({"run", scenario("amplitude_damping.json"), "--out", tmp.path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("gamma") != std::string::npos);
  const auto got = nlohmann::json::parse(slurp(tmp.path / "report.json"));
  const auto want = nlohmann::json::parse(slurp(kSource / "scenarios/golden/amplitude_damping.golden.json"));
  for (const char* k : {"gamma", "x", "kl", "delta_u", "delta_f", "delta_s", "delta_s_v", "s_r_final"}) {
    INFO(k);
    CHECK(got[k].get<double>() == doctest::Approx(want[k].get<double>()).epsilon(1e-12).scale(1.0));
  }
  const auto pf = read_csv(tmp.path / "pf.csv");
  REQUIRE(pf.size() == want["pf"].size() + 1);
  for (std::size_t i = 0; i < want["pf"].size(); ++i) {
    CHECK(std::stod(pf[i + 1][0]) == doctest::Approx(want["pf"][i][0].get<double>()));
    CHECK(std::stod(pf[i + 1][1]) == doctest::Approx(want["pf"][i][1].get<double>()).epsilon(1e-12));
  }
  const auto pbt = read_csv(tmp.path / "pb_tilde.csv");
  REQUIRE(pbt.size() == want["pb_tilde"].size() + 1);
  for (std::size_t i = 0; i < want["pb_tilde"].size(); ++i) {
    CHECK(std::stod(pbt[i + 1][1]) == doctest::Approx(want["pb_tilde"][i][1].get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("run: input errors exit 1 with a message") {
  TempDir tmp;
  auto r = invoke({"run", (kSource / "tests/data/not_hermitian.json").string(), "--out", tmp.path.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("NotHermitian") != std::string::npos);
  r = invoke({"run", (tmp.path / "missing.json").string(), "--out", tmp.path.string()});
  CHECK(r.code == 1);
  r = invoke({"frobnicate"});
  CHECK(r.code == 1);
}

TEST_CASE("run: an impossible threshold exits 2") {
  TempDir tmp;
  const auto r = invoke({"run", scenario("degenerate_qutrit_pair.json"), "--out", tmp.path.string(),
                         "--tol", "1e-300", "--quiet"});
  CHECK(r.code == 2);
  const auto doc = nlohmann::json::parse(slurp(tmp.path / "report.json"));
  CHECK_FALSE(doc["passed"].get<bool>());
}

TEST_CASE("sweep over beta and channel probability") {
  TempDir tmp;
  auto r = invoke({"sweep", scenario("amplitude_damping.json"), "--param", "beta", "--values",
                   "0.1,1,10", "--out", tmp.path.string(), "--quiet"});
  REQUIRE(r.code == 0);
  auto rows = read_csv(tmp.path / "sweep.csv");
  REQUIRE(rows.size() == 4);
  std::size_t ds = column(rows[0], "delta_s");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][ds]) < 0.0);

  r = invoke({"sweep", scenario("amplitude_damping.json"), "--param", "channel.p", "--values",
              "0,0.5,1", "--out", tmp.path.string(), "--quiet"});
  REQUIRE(r.code == 0);
  rows = read_csv(tmp.path / "sweep.csv");
  REQUIRE(rows.size() == 4);
  const std::size_t g = column(rows[0], "gamma");
  CHECK(std::stod(rows[1][g]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::stod(rows[2][g]) > std::stod(rows[1][g]));
  CHECK(std::stod(rows[3][g]) > std::stod(rows[2][g]));
}

TEST_CASE("sweep input errors") {
  TempDir tmp;
  auto r = invoke({"sweep", scenario("amplitude_damping.json"), "--param", "beta", "--values", "",
                   "--out", tmp.path.string()});
  CHECK(r.code == 1);
  r = invoke({"sweep", scenario("amplitude_damping.json"), "--param", "gamma", "--values", "1",
              "--out", tmp.path.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("UnknownParam") != std::string::npos);
  r = invoke({"sweep", scenario("unitary_flip.json"), "--param", "channel.p", "--values", "0.5",
              "--out", tmp.path.string()});
  CHECK(r.code == 1);
}

TEST_CASE("batch: deterministic output and aggregate row") {
  TempDir a, b;
  auto ra = invoke({"batch", scenario("batch_mixed.json"), "--out", a.path.string(), "--quiet"});
  auto rb = invoke({"batch", scenario("batch_mixed.json"), "--out", b.path.string(), "--quiet"});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  const std::string csv = slurp(a.path / "batch.csv");
  CHECK(csv == slurp(b.path / "batch.csv"));
  const auto rows = read_csv(a.path / "batch.csv");
  REQUIRE(rows.size() == 102);
  CHECK(rows[0][0] == "seed");
  CHECK(rows.back()[0] == "aggregate");
  CHECK(std::stod(rows.back()[column(rows[0], "max_residual")]) < 1e-8);

  TempDir c;
  const auto rc = invoke({"batch", scenario("batch_mixed.json"), "--out", c.path.string(),
                          "--seed", "5", "--quiet"});
  REQUIRE(rc.code == 0);
  CHECK(slurp(c.path / "batch.csv") != csv);
}

TEST_CASE("batch: unital-only spec gives unit gamma everywhere") {
  TempDir tmp;
  const auto r = invoke({"batch", scenario("batch_unital.json"), "--out", tmp.path.string(), "--quiet"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(tmp.path / "batch.csv");
  const std::size_t g = column(rows[0], "gamma");
  const std::size_t u = column(rows[0], "unital");
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    CHECK(rows[i][u] == "1");
    CHECK(std::abs(std::stod(rows[i][g]) - 1.0) < 1e-10);
  }
}
