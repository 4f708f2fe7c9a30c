#pragma once

#include <string>

#include "mre/flow_fields.hpp"
#include "mre/integrators.hpp"
#include "mre/params.hpp"

namespace mre {

/// One particle problem: field, parameters, initial position and slip
/// velocity q0 = v0 - u(y0, t0), time span.
struct Problem {
  FieldPtr field;
  MreParams params = derive_params(1.0, 1.0);  ///< placeholder until configured
  Vec2 y0 = Vec2::Zero();
  Vec2 q0 = Vec2::Zero();
  double t0 = 0.0;
  double T = 1.0;

  Vec2 v0() const { return q0 + field->eval(y0, t0).u; }
};

/// A solver named as "fd2+trap", "fd2+imex2", "fd4+imex4", "fd4+dirk4"
/// (any fd2/fd4 with trap/trapezoidal/imex2/imex4/dirk4) or "daitche1..3".
struct Method {
  enum class Kind { FiniteDifference, Direct };
  Kind kind = Kind::FiniteDifference;
  int space_order = 2;
  Scheme scheme = Scheme::Trapezoidal;
  int direct_order = 3;
  std::string name;
};

Method parse_method(const std::string& name);

struct SolverSettings {
  double c = 10.0;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double linear_tol = 1e-12;
};

/// Runs `method` on the problem with `steps` uniform time steps and N
/// pseudo-space nodes (ignored by the direct method).
Trajectory run_method(const Problem& problem, const Method& method, std::size_t N,
                      std::size_t steps, const SolverSettings& settings = {});

}  // namespace mre
