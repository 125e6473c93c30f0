#include "openfluct/scenario_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "openfluct/error.hpp"

namespace openfluct {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ParseError, "'" + key + "': " + why);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << e.what();
    throw Error(ErrorCode::ParseError, os.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double as_real(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(key, "expected a finite number");
  return v;
}

std::vector<double> as_real_list(const json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_real(j[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Complex as_complex(const json& j, const std::string& key) {
  if (j.is_number()) return {as_real(j, key), 0.0};
  if (!j.is_array() || j.size() != 2) bad(key, "expected a [re, im] pair");
  return {as_real(j[0], key + "[0]"), as_real(j[1], key + "[1]")};
}

ComplexMatrix as_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) bad(key, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) bad(key, "expected rows of [re, im] pairs");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rk = key + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) bad(rk, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(Eigen::Index(r), Eigen::Index(c)) =
          as_complex(j[r][c], rk + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

ComplexMatrix as_hamiltonian(const json& j, const std::string& key) {
  if (j.is_object()) {
    if (!j.contains("diag")) bad(key, "object form needs a 'diag' list");
    const auto e = as_real_list(j["diag"], key + ".diag");
    if (e.empty()) bad(key + ".diag", "empty energy list");
    ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(e.size()), Eigen::Index(e.size()));
    for (std::size_t i = 0; i < e.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = e[i];
    return m;
  }
  return as_matrix(j, key);
}

std::uint64_t as_seed(const json& j, const std::string& key) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(key, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Eigen::Index as_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad(key, "expected an integer");
  return Eigen::Index(j.get<std::int64_t>());
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) bad(key, "missing required key");
  return doc[key];
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "scenario must be a JSON object");
  ScenarioSpec s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) bad("name", "expected a string");
    s.name = doc["name"].get<std::string>();
  }
  s.dim = as_int(require(doc, "dim"), "dim");
  s.beta = as_real(require(doc, "beta"), "beta");
  s.h_initial = as_hamiltonian(require(doc, "h_initial"), "h_initial");
  s.h_final = as_hamiltonian(require(doc, "h_final"), "h_final");
  if (doc.contains("seed")) s.seed = as_seed(doc["seed"], "seed");

  const json& ch = require(doc, "channel");
  if (!ch.is_object()) bad("channel", "expected an object");
  if (ch.contains("kraus")) {
    const json& ks = ch["kraus"];
    if (!ks.is_array() || ks.empty()) bad("channel.kraus", "expected a non-empty list of matrices");
    for (std::size_t l = 0; l < ks.size(); ++l) {
      s.channel.kraus.push_back(as_matrix(ks[l], "channel.kraus[" + std::to_string(l) + "]"));
    }
  } else if (ch.contains("preset")) {
    if (!ch["preset"].is_string()) bad("channel.preset", "expected a string");
    s.channel.preset = ch["preset"].get<std::string>();
    if (ch.contains("params")) s.channel.params = as_real_list(ch["params"], "channel.params");
  } else {
    bad("channel", "needs either 'preset' or 'kraus'");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) bad("tolerances", "expected an object");
    if (t.contains("identity_rtol")) {
      s.identity_rtol = as_real(t["identity_rtol"], "tolerances.identity_rtol");
      if (!(*s.identity_rtol > 0.0)) bad("tolerances.identity_rtol", "must be positive");
    }
    if (t.contains("bin_tol_scale")) {
      s.bin_tol_scale = as_real(t["bin_tol_scale"], "tolerances.bin_tol_scale");
      if (!(*s.bin_tol_scale > 0.0)) bad("tolerances.bin_tol_scale", "must be positive");
    }
  }
  return s;
}

ScenarioSpec load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

namespace {

Hamiltonian field_hamiltonian(const ComplexMatrix& m, Eigen::Index dim,
                              const char* key) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << "'" << key << "' is " << m.rows() << "x" << m.cols()
       << " but dim = " << dim;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  try {
    return Hamiltonian(m);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("'") + key + "': " + e.detail());
  }
}

}  // namespace

Scenario resolve(const ScenarioSpec& spec) {
  if (spec.dim < 2) {
    throw Error(ErrorCode::DimensionMismatch, "'dim' must be at least 2");
  }
  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta)) {
    std::ostringstream os;
    os << "'beta' must be positive and finite, got " << spec.beta;
    throw Error(ErrorCode::InvalidBeta, os.str());
  }
  Hamiltonian h_i = field_hamiltonian(spec.h_initial, spec.dim, "h_initial");
  Hamiltonian h_f = field_hamiltonian(spec.h_final, spec.dim, "h_final");

  KrausChannel channel = [&] {
    try {
      if (!spec.channel.kraus.empty()) {
        for (const auto& a : spec.channel.kraus) {
          if (a.rows() != spec.dim || a.cols() != spec.dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        "Kraus operators must be dim x dim");
          }
        }
        return validate_channel(spec.channel.kraus, "kraus");
      }
      return preset(spec.channel.preset, spec.channel.params, spec.dim, spec.seed);
    } catch (const Error& e) {
      throw Error(e.code(), "'channel': " + e.detail());
    }
  }();

  Scenario s{spec.name, spec.beta, std::move(h_i), std::move(h_f), std::move(channel)};
  if (spec.identity_rtol) s.identity_tol = *spec.identity_rtol;
  if (spec.bin_tol_scale) s.bin_tol_scale = *spec.bin_tol_scale;
  return s;
}

BatchSpec parse_batch_spec(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "batch spec must be a JSON object");
  BatchSpec b;
  b.count = int(as_int(require(doc, "count"), "count"));
  if (b.count < 1) bad("count", "must be at least 1");
  auto range = [&](const char* key, Eigen::Index& lo, Eigen::Index& hi, Eigen::Index floor) {
    const json& r = require(doc, key);
    if (!r.is_array() || r.size() != 2) bad(key, "expected [min, max]");
    lo = as_int(r[0], std::string(key) + "[0]");
    hi = as_int(r[1], std::string(key) + "[1]");
    if (lo < floor || hi < lo) bad(key, "empty or out-of-range interval");
  };
  range("dim_range", b.dim_min, b.dim_max, 2);
  range("n_kraus_range", b.n_kraus_min, b.n_kraus_max, 1);
  b.beta_set = as_real_list(require(doc, "beta_set"), "beta_set");
  if (b.beta_set.empty()) bad("beta_set", "must not be empty");
  for (double beta : b.beta_set) {
    if (!(beta > 0.0)) bad("beta_set", "inverse temperatures must be positive");
  }
  if (doc.contains("seed")) b.seed = as_seed(doc["seed"], "seed");
  if (doc.contains("unital_only")) {
    if (!doc["unital_only"].is_boolean()) bad("unital_only", "expected a boolean");
    b.unital_only = doc["unital_only"].get<bool>();
  }
  return b;
}

BatchSpec load_batch_spec(const std::string& path) {
  try {
    return parse_batch_spec(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

BatchItem batch_item(const BatchSpec& spec, int index) {
  // Per-item seeds come from a master stream so that item i does not depend
  // on how many draws earlier items consumed.
  std::mt19937_64 master(spec.seed);
  master.discard(static_cast<unsigned long long>(index));
  const std::uint64_t seed = master();

  std::mt19937_64 rng(seed);
  auto uniform_int = [&](Eigen::Index lo, Eigen::Index hi) {
    return Eigen::Index(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
  };
  const Eigen::Index dim = uniform_int(spec.dim_min, spec.dim_max);
  const Eigen::Index n_kraus =
      std::min(uniform_int(spec.n_kraus_min, spec.n_kraus_max), dim * dim);
  const double beta = spec.beta_set[std::size_t(
      uniform_int(0, Eigen::Index(spec.beta_set.size()) - 1))];
  const bool unital =
      spec.unital_only || std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.25;
  Hamiltonian h_i(random_hermitian(dim, rng));
  Hamiltonian h_f(random_hermitian(dim, rng));
  KrausChannel channel = preset(unital ? "unitary_mixture" : "random",
                                {double(n_kraus)}, dim, seed ^ 0x9e3779b97f4a7c15ULL);
  std::ostringstream name;
  name << "batch-" << index;
  return {seed, Scenario{name.str(), beta, std::move(h_i), std::move(h_f), std::move(channel)}};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s == "nan" || s == "-nan") return "NaN";
  if (s == "inf") return "Infinity";
  if (s == "-inf") return "-Infinity";
  return s;
}

namespace {

std::vector<std::pair<std::string, double>> report_fields(const FluctuationReport& r) {
  return {{"delta_u", r.delta_u},         {"delta_u_moment", r.delta_u_moment},
          {"delta_f", r.delta_f},         {"gamma", r.gamma},
          {"x", r.x},                     {"kl", r.kl},
          {"excess_energy", r.excess_energy}, {"delta_s", r.delta_s},
          {"delta_s_v", r.delta_s_v},     {"s_r_final", r.s_r_final}};
}

}  // namespace

std::string report_json(const FluctuationReport& r, double threshold) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << json(r.name).dump() << ",\n";
  os << "  \"beta\": " << format_double(r.beta) << ",\n";
  os << "  \"unital\": " << (r.unital ? "true" : "false") << ",\n";
  for (const auto& [k, v] : report_fields(r)) {
    os << "  \"" << k << "\": " << format_double(v) << ",\n";
  }
  for (const auto& [k, v] : r.residuals) {
    os << "  \"residual." << k << "\": " << format_double(v) << ",\n";
  }
  os << "  \"max_residual\": " << format_double(r.max_residual()) << ",\n";
  os << "  \"threshold\": " << format_double(threshold) << ",\n";
  os << "  \"passed\": " << (r.passed(threshold) ? "true" : "false") << "\n";
  os << "}\n";
  return os.str();
}

std::string report_csv_header(const FluctuationReport& r) {
  std::ostringstream os;
  os << "name,beta,unital";
  for (const auto& [k, _] : report_fields(r)) os << "," << k;
  for (const auto& [k, _] : r.residuals) os << "," << k;
  os << ",max_residual";
  return os.str();
}

std::string report_csv_row(const FluctuationReport& r) {
  std::ostringstream os;
  os << r.name << "," << format_double(r.beta) << "," << (r.unital ? 1 : 0);
  for (const auto& [_, v] : report_fields(r)) os << "," << format_double(v);
  for (const auto& [_, v] : r.residuals) os << "," << format_double(v);
  os << "," << format_double(r.max_residual());
  return os.str();
}

std::string distribution_csv(const EnergyDistribution& p) {
  std::ostringstream os;
  os << "delta_u,mass\n";
  for (const auto& a : p.atoms()) {
    os << format_double(a.delta_u) << "," << format_double(a.mass) << "\n";
  }
  return os.str();
}

std::string report_summary(const FluctuationReport& r, double threshold) {
  std::ostringstream os;
  char line[160];
  os << "scenario: " << r.name << "\n";
  std::snprintf(line, sizeof line, "beta = %.6g, channel %s\n", r.beta,
                r.unital ? "unital" : "non-unital");
  os << line << "\n";
  const std::pair<const char*, double> rows[] = {
      {"Delta U (trace)", r.delta_u},
      {"Delta U (first moment)", r.delta_u_moment},
      {"Delta F", r.delta_f},
      {"gamma", r.gamma},
      {"X", r.x},
      {"K[P_F || P_B]", r.kl},
      {"excess energy", r.excess_energy},
      {"Delta S", r.delta_s},
      {"Delta S_V", r.delta_s_v},
      {"S_R(rho' || rho'_eq)", r.s_r_final},
  };
  for (const auto& [label, v] : rows) {
    std::snprintf(line, sizeof line, "  %-24s % .10f\n", label, v);
    os << line;
  }
  os << "\nidentity residuals (threshold " << format_double(threshold) << "):\n";
  for (const auto& [k, v] : r.residuals) {
    std::snprintf(line, sizeof line, "  %-24s %.3e  %s\n", k.c_str(), v,
                  v < threshold ? "ok" : "FAIL");
    os << line;
  }
  os << "\n" << (r.passed(threshold) ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace openfluct
