#include "mre/metrics.hpp"

#include <cmath>

#include "mre/errors.hpp"

namespace mre {

MetricValue error_max_rel_l2(const std::vector<Vec2>& y, const std::vector<Vec2>& exact) {
  if (y.size() != exact.size() || y.empty()) {
    throw MetricError("trajectory and reference have different lengths");
  }
  MetricValue out;
  bool any = false;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double ref = exact[k].norm();
    if (ref < kTinyNorm) {
      ++out.skipped;
      continue;
    }
    any = true;
    out.value = std::max(out.value, (y[k] - exact[k]).norm() / ref);
  }
  if (!any) throw MetricError("reference norm vanishes at every step");
  return out;
}

MetricValue error_max_rel_l2(const Trajectory& traj, const std::function<Vec2(double)>& exact) {
  std::vector<Vec2> ex;
  ex.reserve(traj.size());
  for (double t : traj.times) ex.push_back(exact(t));
  return error_max_rel_l2(traj.positions, ex);
}

MetricValue error_final_rel_l2(const std::vector<Vec2>& y, const std::vector<Vec2>& exact) {
  if (y.empty() || exact.empty()) throw MetricError("empty trajectory");
  MetricValue out;
  const Vec2 diff = y.back() - exact.back();
  const double ref = exact.back().norm();
  if (ref < kTinyNorm) {
    out.absolute_fallback = true;
    out.value = diff.norm();
  } else {
    out.value = diff.norm() / ref;
  }
  return out;
}

MetricValue error_final_rel_l2(const Trajectory& traj, const Trajectory& ref) {
  if (traj.times.empty() || ref.times.empty()) throw MetricError("empty trajectory");
  const double tol = 1e-9 * std::max(1.0, std::abs(ref.times.back()));
  if (std::abs(traj.times.back() - ref.times.back()) > tol) {
    throw MetricError("trajectories end at different times");
  }
  return error_final_rel_l2(traj.positions, ref.positions);
}

MetricValue evaluate_metric(const std::string& metric, const std::vector<Vec2>& y,
                            const std::vector<Vec2>& exact) {
  if (metric == "max_rel") return error_max_rel_l2(y, exact);
  if (metric == "final_rel") return error_final_rel_l2(y, exact);
  throw ConfigError("unknown error metric '" + metric + "'");
}

double fit_order(const std::vector<double>& N, const std::vector<double>& errors) {
  if (N.size() != errors.size() || N.size() < 2) {
    throw MetricError("order fit needs at least two (N, error) pairs");
  }
  const auto n = static_cast<double>(N.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(N[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(errors[i])) {
      throw MetricError("order fit needs positive finite values");
    }
    const double x = std::log(N[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw MetricError("order fit needs distinct N");
  return -(n * sxy - sx * sy) / den;
}

}  // namespace mre
