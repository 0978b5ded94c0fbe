#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lswspec/manifest.hpp"

namespace lswspec {

//! Exit codes shared by the CLI and the pipeline entry points.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInputError = 2,
  kExitNumericalError = 3,
};

struct MetricsReport {
  struct PerPoint {
    double z0 = 0.0;
    double median = 0.0;
    double q05 = 0.0;
    double q95 = 0.0;
  };
  double mse = 0.0;
  double mad = 0.0;
  double runtime_seconds = 0.0;
  std::vector<PerPoint> per_point;
};

//! Each run_* writes its outputs plus a manifest copy into the output
//! directory and returns an exit code. Diagnostics go to `log`.
int run_simulate(const RunManifest& m, std::ostream& log);
int run_estimate(const RunManifest& m, std::ostream& log);
int run_montecarlo(const RunManifest& m, std::ostream& log,
                   MetricsReport* report = nullptr,
                   MetricsReport* baseline_report = nullptr);
int run_identities(const RunManifest& m, std::ostream& log);

int run_command(const RunManifest& m, std::ostream& log);

//! The estimation grid: points equispaced strictly inside (0,1).
std::vector<double> estimation_points(long count);

} // namespace lswspec
