#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mre/integrators.hpp"

namespace mre {

/// CSV with header `t,y1,y2,q1,q2`, 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory parse_trajectory_csv(const std::string& text);

/// Run-level facts recorded next to a trajectory.
struct RunInfo {
  std::string config_hash;
  bool reference = false;
  std::optional<double> self_difference;
  std::optional<std::uint64_t> seed;
};

/// JSON sidecar: scheme, N, c, dt, steps, wall_time, newton_iterations,
/// config_hash, reference and the optional RunInfo entries.
std::string metadata_json(const Trajectory& traj, const RunInfo& info);
void write_metadata_json(const Trajectory& traj, const RunInfo& info, const std::string& path);

/// Matrix Market coordinate format, general real.
void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path);

struct ConvergencePoint {
  std::size_t N = 0;
  double dt = 0.0;
  double error = 0.0;
  /// The run at this resolution raised an instability or step failure.
  bool failed = false;

  bool operator==(const ConvergencePoint&) const = default;
};

struct SchemeConvergence {
  std::string scheme;
  std::vector<ConvergencePoint> points;
  bool unstable = false;
  /// Fitted order; meaningful only when has_order.
  double order = 0.0;
  bool has_order = false;

  bool operator==(const SchemeConvergence&) const = default;
};

struct ConvergenceReport {
  std::vector<SchemeConvergence> schemes;

  const SchemeConvergence& at(const std::string& scheme) const;
  bool operator==(const ConvergenceReport&) const = default;
};

/// `scheme,N,dt,error,order_fit,unstable`: one row per ladder point, the
/// scheme's fitted order repeated on each row (empty when there is none) and
/// an empty error for failed points.
std::string emit_convergence_csv(const ConvergenceReport& report);
ConvergenceReport parse_convergence_csv(const std::string& text);

struct WorkPrecisionRow {
  std::string scheme;
  std::size_t N = 0;
  double dt = 0.0;
  double wall_time_s = 0.0;
  double error = 0.0;

  bool operator==(const WorkPrecisionRow&) const = default;
};

/// `scheme,N,dt,wall_time_s,error`.
std::string emit_workprec_csv(const std::vector<WorkPrecisionRow>& rows);
std::vector<WorkPrecisionRow> parse_workprec_csv(const std::string& text);

void write_text(const std::string& text, const std::string& path);
std::string read_text(const std::string& path);

}  // namespace mre
