#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace openfluct::cli {

/// Process exit codes.
enum Exit : int { kOk = 0, kInputError = 1, kThresholdViolation = 2 };

struct Options {
  std::string out_dir = ".";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Writes report.json, report.csv, pf.csv, pb.csv, pb_tilde.csv and
/// summary.txt into out_dir.
int run(const std::string& scenario_file, const Options& opts,
        std::ostream& out, std::ostream& err);

/// param is "beta" or "channel.p". Writes sweep.csv, one row per value.
int sweep(const std::string& scenario_file, const std::string& param,
          const std::vector<double>& values, const Options& opts,
          std::ostream& out, std::ostream& err);

/// Writes batch.csv: one row per scenario plus a final aggregate row.
int batch(const std::string& spec_file, const Options& opts, std::ostream& out,
          std::ostream& err);

/// Parses argv and dispatches; used by the executable and by tests.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace openfluct::cli
