#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mre/config.hpp"
#include "mre/io.hpp"
#include "mre/metrics.hpp"
#include "mre/reference.hpp"

namespace mre {

/// Where the errors of a benchmark come from.
struct ErrorSource {
  std::string metric;
  /// Closed form when set; otherwise `reference` holds the numerical one.
  bool closed_form = false;
  std::optional<Reference> reference;
};

/// Resolves the metric and computes the reference if there is no closed form.
ErrorSource prepare_error_source(const BenchmarkConfig& cfg, std::ostream* log = nullptr);

/// Error of one trajectory against the source.
MetricValue trajectory_error(const BenchmarkConfig& cfg, const ErrorSource& src,
                             const Trajectory& traj);

struct ConvergenceRun {
  ConvergenceReport report;
  ErrorSource source;
};

/// Runs every scheme over the ladder with steps = N. Schemes that raise an
/// instability or step failure are marked unstable and get no order. With a
/// numerical reference, throws ConfigError when the reference fails the
/// self-convergence gate against the smallest coarsest-level error.
ConvergenceRun run_convergence(const BenchmarkConfig& cfg, std::ostream* log = nullptr);

/// Per scheme and ladder point: minimum stepping-loop time over
/// cfg.timing_repeats runs and the error. Unstable points are omitted.
std::vector<WorkPrecisionRow> run_work_precision(const BenchmarkConfig& cfg,
                                                 std::ostream* log = nullptr);

}  // namespace mre
