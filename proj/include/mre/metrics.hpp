#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mre/flow_fields.hpp"
#include "mre/integrators.hpp"

namespace mre {

/// Reference norms below this are treated as zero.
inline constexpr double kTinyNorm = 1e-14;

struct MetricValue {
  double value = 0.0;
  /// final_rel only: the reference was ~0 and the absolute error was used.
  bool absolute_fallback = false;
  /// max_rel only: number of steps skipped for a ~0 reference.
  std::size_t skipped = 0;
};

/// max_k |y_k - y*_k| / |y*_k|, skipping steps with |y*_k| < kTinyNorm.
/// Throws MetricError on length mismatch or when every step is skipped.
MetricValue error_max_rel_l2(const std::vector<Vec2>& y, const std::vector<Vec2>& exact);
MetricValue error_max_rel_l2(const Trajectory& traj,
                             const std::function<Vec2(double)>& exact);

/// |y_N - y*_N| / |y*_N|, or the absolute error (flagged) if |y*_N| is ~0.
MetricValue error_final_rel_l2(const std::vector<Vec2>& y, const std::vector<Vec2>& exact);
MetricValue error_final_rel_l2(const Trajectory& traj, const Trajectory& ref);

/// Dispatch on "max_rel" / "final_rel".
MetricValue evaluate_metric(const std::string& metric, const std::vector<Vec2>& y,
                            const std::vector<Vec2>& exact);

/// Negated least-squares slope of log(error) against log(N). Throws
/// MetricError for fewer than two points or non-positive values.
double fit_order(const std::vector<double>& N, const std::vector<double>& errors);

}  // namespace mre
