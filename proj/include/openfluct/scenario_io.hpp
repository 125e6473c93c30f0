#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "openfluct/thermo.hpp"

namespace openfluct {

/// Channel as written in a scenario file: a preset with parameters, or an
/// explicit Kraus list.
struct ChannelSpec {
  std::string preset;  // empty when `kraus` is used
  std::vector<double> params;
  std::vector<ComplexMatrix> kraus;
};

/// Scenario file contents before validation.
struct ScenarioSpec {
  std::string name = "scenario";
  Eigen::Index dim = 0;
  double beta = 1.0;
  ComplexMatrix h_initial;
  ComplexMatrix h_final;
  ChannelSpec channel;
  std::uint64_t seed = 0;
  std::optional<double> identity_rtol;
  std::optional<double> bin_tol_scale;
};

struct BatchSpec {
  int count = 1;
  Eigen::Index dim_min = 2;
  Eigen::Index dim_max = 2;
  Eigen::Index n_kraus_min = 1;
  Eigen::Index n_kraus_max = 1;
  std::vector<double> beta_set{1.0};
  std::uint64_t seed = 0;
  bool unital_only = false;
};

/// Parses the JSON scenario document. Syntax errors carry line and column,
/// semantic errors the offending key. Throws Error(ParseError) or the
/// validation error of the offending field.
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario(const std::string& path);

/// Validates dimensions and builds Hamiltonians and the channel.
Scenario resolve(const ScenarioSpec& spec);

BatchSpec parse_batch_spec(const std::string& text);
BatchSpec load_batch_spec(const std::string& path);

/// One randomly drawn scenario of a batch, reproducible from (spec, index).
struct BatchItem {
  std::uint64_t seed;
  Scenario scenario;
};
BatchItem batch_item(const BatchSpec& spec, int index);

/// %.17g, round-trip exact for doubles.
std::string format_double(double v);

/// Flat JSON object: scenario fields, report fields in declaration order,
/// then "residual.<name>" keys alphabetically, then the pass verdict.
std::string report_json(const FluctuationReport& r, double threshold);
std::string report_csv_header(const FluctuationReport& r);
std::string report_csv_row(const FluctuationReport& r);
/// Columns delta_u, mass.
std::string distribution_csv(const EnergyDistribution& p);
std::string report_summary(const FluctuationReport& r, double threshold);

}  // namespace openfluct
