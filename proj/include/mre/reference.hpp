#pragma once

#include <string>
#include <vector>

#include "mre/quadrature.hpp"
#include "mre/runner.hpp"

namespace mre {

/// Closed-form position in a quiescent fluid for initial slip q0 (relative
/// velocity), per component:
///   y(t) = y0 + (2 q0/pi) int_0^inf gamma (1 - e^{-k^2 t}) / D(k) dk,
///   D(k) = k^2 gamma^2 + (k^2 - alpha)^2.
Vec2 quiescent_solution(double t, const MreParams& params, const Vec2& y0, const Vec2& q0,
                        const QuadratureSpec& spec = {});

/// Closed-form position in the homogeneous field u = (u1, sin(lambda t)):
/// the horizontal component is the quiescent one plus u1 t, the vertical one
/// adds (1 - cos(lambda t))/lambda and the lag terms proportional to
/// (1 - R)/R.
Vec2 oscillatory_solution(double t, const MreParams& params, const Vec2& y0, const Vec2& q0,
                          double u1, double lambda, const QuadratureSpec& spec = {});

/// Exact positions at the given times, or an empty vector when the field has
/// no closed form (vortex, Bickley, gridded).
std::vector<Vec2> exact_positions(const Problem& problem, const std::vector<double>& times,
                                  const QuadratureSpec& spec = {});

struct ReferenceSpec {
  std::string method = "fd4+imex4";
  std::size_t N = 2048;
  std::size_t steps = 2048;
  SolverSettings settings;
};

struct Reference {
  Trajectory trajectory;
  /// Metric distance between the reference and the (N/2, 2 dt) run.
  double self_difference = 0.0;
  std::string method;
};

/// High-resolution numerical reference plus its half-resolution companion.
/// `metric` is "max_rel" or "final_rel".
Reference reference_trajectory(const Problem& problem, const ReferenceSpec& spec,
                               const std::string& metric = "max_rel");

/// Throws ConfigError ("reference rejected") unless the reference's
/// self-difference is below 1% of the coarsest benchmark error.
void check_reference_gate(const Reference& ref, double coarsest_error);

/// Positions of `ref` at `times`, which must lie on its time grid.
std::vector<Vec2> positions_at(const Trajectory& ref, const std::vector<double>& times);

}  // namespace mre
