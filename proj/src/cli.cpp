#include "openfluct/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "openfluct/error.hpp"
#include "openfluct/scenario_io.hpp"

namespace openfluct::cli {
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write '" + path.string() + "'");
  f << contents;
}

fs::path prepare_out(const Options& opts) {
  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::ParseError,
                "cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  return dir;
}

double threshold_for(const Scenario& s, const Options& opts) {
  return opts.tol ? *opts.tol : s.identity_tol;
}

ScenarioSpec load_with_overrides(const std::string& file, const Options& opts) {
  ScenarioSpec spec = load_scenario(file);
  if (opts.seed) spec.seed = *opts.seed;
  return spec;
}

}  // namespace

int run(const std::string& scenario_file, const Options& opts,
        std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = resolve(load_with_overrides(scenario_file, opts));
    const double threshold = threshold_for(scenario, opts);
    const Evaluation ev = evaluate(scenario);
    const fs::path dir = prepare_out(opts);
    write_file(dir / "report.json", report_json(ev.report, threshold));
    write_file(dir / "report.csv", report_csv_header(ev.report) + "\n" +
                                       report_csv_row(ev.report) + "\n");
    write_file(dir / "pf.csv", distribution_csv(ev.forward));
    write_file(dir / "pb.csv", distribution_csv(ev.backward));
    write_file(dir / "pb_tilde.csv", distribution_csv(ev.backward_raw));
    const std::string summary = report_summary(ev.report, threshold);
    write_file(dir / "summary.txt", summary);
    if (!opts.quiet) out << summary;
    return ev.report.passed(threshold) ? kOk : kThresholdViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int sweep(const std::string& scenario_file, const std::string& param,
          const std::vector<double>& values, const Options& opts,
          std::ostream& out, std::ostream& err) {
  try {
    if (param != "beta" && param != "channel.p") {
      throw Error(ErrorCode::UnknownParam,
                  "'" + param + "' (sweepable: beta, channel.p)");
    }
    if (values.empty()) {
      throw Error(ErrorCode::UnknownParam, "no values given for '" + param + "'");
    }
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::UnknownParam, "sweep values must be finite");
      }
    }
    const ScenarioSpec base = load_with_overrides(scenario_file, opts);
    if (param == "channel.p" && base.channel.preset.empty()) {
      throw Error(ErrorCode::UnknownParam,
                  "'channel.p' needs a preset channel with a probability parameter");
    }

    std::ostringstream csv;
    bool all_passed = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      ScenarioSpec spec = base;
      if (param == "beta") {
        spec.beta = values[i];
      } else {
        if (spec.channel.params.empty()) spec.channel.params.push_back(0.0);
        spec.channel.params[0] = values[i];
      }
      std::ostringstream name;
      name << base.name << "[" << param << "=" << format_double(values[i]) << "]";
      spec.name = name.str();
      const Scenario scenario = resolve(spec);
      const FluctuationReport report = build_report(scenario);
      if (i == 0) csv << "value," << report_csv_header(report) << "\n";
      csv << format_double(values[i]) << "," << report_csv_row(report) << "\n";
      const bool ok = report.passed(threshold_for(scenario, opts));
      all_passed = all_passed && ok;
      if (!opts.quiet) {
        out << param << " = " << format_double(values[i]) << ": max residual "
            << format_double(report.max_residual()) << (ok ? " ok" : " FAIL") << "\n";
      }
    }
    write_file(prepare_out(opts) / "sweep.csv", csv.str());
    return all_passed ? kOk : kThresholdViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int batch(const std::string& spec_file, const Options& opts, std::ostream& out,
          std::ostream& err) {
  BatchSpec spec;
  try {
    spec = load_batch_spec(spec_file);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (opts.seed) spec.seed = *opts.seed;
  const double threshold = opts.tol ? *opts.tol : kIdentityTol;

  std::ostringstream csv;
  csv << "seed,dim,unital,gamma,x,kl,delta_u,delta_s,max_residual\n";
  double worst = 0.0;
  bool all_passed = true;
  for (int i = 0; i < spec.count; ++i) {
    std::uint64_t seed = 0;
    try {
      BatchItem item = batch_item(spec, i);
      seed = item.seed;
      const FluctuationReport r = build_report(item.scenario);
      double max_res = r.max_residual();
      bool ok = r.passed(threshold);
      // A unital-only campaign also pins gamma to 1 at kernel tolerance.
      if (spec.unital_only && !(std::abs(r.gamma - 1.0) < kKernelTol)) ok = false;
      if (std::isnan(max_res)) {
        worst = max_res;
      } else if (!std::isnan(worst)) {
        worst = std::max(worst, max_res);
      }
      all_passed = all_passed && ok;
      csv << seed << "," << item.scenario.channel.dim() << "," << (r.unital ? 1 : 0)
          << "," << format_double(r.gamma) << "," << format_double(r.x) << ","
          << format_double(r.kl) << "," << format_double(r.delta_u) << ","
          << format_double(r.delta_s) << "," << format_double(max_res) << "\n";
      if (!ok && !opts.quiet) {
        out << "scenario " << i << " (seed " << seed << ") failed: max residual "
            << format_double(max_res) << ", gamma " << format_double(r.gamma) << "\n";
      }
    } catch (const Error& e) {
      err << "error: batch scenario " << i << " (seed " << seed
          << ", batch seed " << spec.seed << "): " << e.what() << "\n";
      return kInputError;
    }
  }
  csv << "aggregate,,,,,,,," << format_double(worst) << "\n";
  try {
    write_file(prepare_out(opts) / "batch.csv", csv.str());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (!opts.quiet) {
    out << spec.count << " scenarios, max residual " << format_double(worst)
        << (all_passed ? " PASS" : " FAIL") << "\n";
  }
  return all_passed ? kOk : kThresholdViolation;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energetic fluctuation relations of open quantum processes"};
  app.require_subcommand(1);

  Options opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--tol", opts.tol, "Residual threshold (default 1e-8)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "Override the scenario / batch seed");
    sub->add_flag("--quiet", opts.quiet, "Suppress console output");
  };

  std::string file;
  std::string param;
  std::vector<double> values;

  auto* run_cmd = app.add_subcommand("run", "Evaluate one scenario file");
  run_cmd->add_option("scenario", file, "Scenario JSON file")->required();
  add_common(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Re-run a scenario over parameter values");
  sweep_cmd->add_option("scenario", file, "Scenario JSON file")->required();
  sweep_cmd->add_option("--param", param, "beta or channel.p")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")
      ->delimiter(',');
  add_common(sweep_cmd);

  auto* batch_cmd = app.add_subcommand("batch", "Randomized identity campaign");
  batch_cmd->add_option("spec", file, "Batch spec JSON file")->required();
  add_common(batch_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (*run_cmd) return run(file, opts, out, err);
  if (*sweep_cmd) return sweep(file, param, values, opts, out, err);
  return batch(file, opts, out, err);
}

}  // namespace openfluct::cli
