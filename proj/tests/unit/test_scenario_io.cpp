#include "doctest.h"

#include <cstdlib>
#include <random>

#include "json.hpp"
#include "openfluct/error.hpp"
#include "openfluct/scenario_io.hpp"

using namespace openfluct;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

const char* kDamping = R"({
  "name": "damping",
  "dim": 2,
  "beta": 1.0,
  "h_initial": {"diag": [0.0, 1.0]},
  "h_final": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
  "channel": {"preset": "amplitude_damping", "params": [1.0]},
  "seed": 3,
  "tolerances": {"identity_rtol": 1e-9, "bin_tol_scale": 1e-10}
})";

}  // namespace

TEST_CASE("parse_scenario: both Hamiltonian forms and tolerances") {
  const auto spec = parse_scenario(kDamping);
  CHECK(spec.name == "damping");
  CHECK(spec.dim == 2);
  CHECK(spec.seed == 3);
  CHECK(max_abs(spec.h_initial - spec.h_final) == 0.0);
  CHECK(spec.channel.preset == "amplitude_damping");
  REQUIRE(spec.identity_rtol.has_value());
  CHECK(*spec.identity_rtol == 1e-9);

  const Scenario s = resolve(spec);
  CHECK(s.identity_tol == 1e-9);
  CHECK(s.bin_tol_scale == 1e-10);
  CHECK(s.channel.kraus_ops().size() == 2);
}

TEST_CASE("parse_scenario: explicit Kraus list with complex entries") {
  const char* text = R"({
    "dim": 2, "beta": 0.5,
    "h_initial": {"diag": [0, 1]}, "h_final": {"diag": [0, 2]},
    "channel": {"kraus": [[[[0, 0], [0, -1]], [[0, 1], [0, 0]]]]}
  })";
  const Scenario s = resolve(parse_scenario(text));
  const ComplexMatrix& a = s.channel.kraus_ops().at(0);
  CHECK(a(0, 1) == Complex(0, -1));
  CHECK(a(1, 0) == Complex(0, 1));
}

TEST_CASE("parse errors carry line context") {
  const char* text = "{\n  \"dim\": 2,\n  \"beta\": ,\n}";
  try {
    parse_scenario(text);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("semantic validation errors") {
  auto with = [](const std::string& key, const std::string& value) {
    auto doc = nlohmann::json::parse(kDamping);
    doc[key] = nlohmann::json::parse(value);
    return doc.dump();
  };
  CHECK(code_of([&] { parse_scenario(R"({"beta": 1})"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse_scenario(with("channel", R"({"params": [1]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([&] { resolve(parse_scenario(with("beta", "-2"))); }) == ErrorCode::InvalidBeta);
  CHECK(code_of([&] { resolve(parse_scenario(with("dim", "3"))); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([&] {
          resolve(parse_scenario(with("h_final", R"([[[0,0],[1,0]],[[0,0],[0,0]]])")));
        }) == ErrorCode::NotHermitian);
  CHECK(code_of([&] { resolve(parse_scenario(with("channel", R"({"preset": "nope"})"))); }) ==
        ErrorCode::UnknownPreset);
  CHECK(code_of([&] {
          resolve(parse_scenario(with("channel", R"({"kraus": [[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]})")));
        }) == ErrorCode::NotTracePreserving);
  CHECK(code_of([&] {
          resolve(parse_scenario(with("channel", R"({"preset": "dephasing", "params": [2]})")));
        }) == ErrorCode::ParamOutOfRange);
}

TEST_CASE("batch spec parsing and reproducible items") {
  const auto spec = parse_batch_spec(R"({"count": 5, "dim_range": [2, 4],
      "n_kraus_range": [1, 3], "beta_set": [0.2, 5], "seed": 9, "unital_only": true})");
  CHECK(spec.count == 5);
  CHECK(spec.unital_only);
  for (int i = 0; i < spec.count; ++i) {
    const auto a = batch_item(spec, i);
    const auto b = batch_item(spec, i);
    CHECK(a.seed == b.seed);
    CHECK(a.scenario.beta == b.scenario.beta);
    CHECK(a.scenario.channel.dim() >= 2);
    CHECK(a.scenario.channel.dim() <= 4);
    CHECK(is_unital(a.scenario.channel).unital);
    CHECK((a.scenario.h_initial.matrix() - b.scenario.h_initial.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(code_of([] { parse_batch_spec(R"({"count": 0, "dim_range": [2,3], "n_kraus_range": [1,1], "beta_set": [1]})"); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { parse_batch_spec(R"({"count": 1, "dim_range": [3,2], "n_kraus_range": [1,1], "beta_set": [1]})"); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { parse_batch_spec(R"({"count": 1, "dim_range": [2,3], "n_kraus_range": [1,1], "beta_set": []})"); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("property: format_double round-trips exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(mant(rng), expo(rng));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("report serialization") {
  const auto report = build_report(resolve(parse_scenario(kDamping)));
  const std::string js = report_json(report, 1e-8);
  const auto doc = nlohmann::ordered_json::parse(js);
  std::vector<std::string> keys;
  for (const auto& [k, _] : doc.items()) keys.push_back(k);
  REQUIRE(keys.size() > 13);
  const std::vector<std::string> head{"name", "beta", "unital", "delta_u", "delta_u_moment",
                                      "delta_f", "gamma", "x", "kl", "excess_energy",
                                      "delta_s", "delta_s_v", "s_r_final"};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(keys[i] == head[i]);
  CHECK(doc["passed"].get<bool>());
  CHECK(doc["gamma"].get<double>() == report.gamma);

  const std::string header = report_csv_header(report);
  const std::string row = report_csv_row(report);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  CHECK(header.find("backward_mass_vs_gamma,crooks_max,energy_decomposition,entropy_law") != std::string::npos);

  const EnergyDistribution p({{-1.0, 0.25}, {0.5, 0.75}}, 1e-9);
  CHECK(distribution_csv(p) == "delta_u,mass\n-1,0.25\n0.5,0.75\n");
}
