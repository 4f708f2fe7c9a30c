#include "mre/runner.hpp"

#include <memory>

#include "mre/daitche.hpp"
#include "mre/errors.hpp"
#include "mre/full_system.hpp"
#include "mre/grid.hpp"
#include "mre/spatial_operator.hpp"

namespace mre {

Method parse_method(const std::string& name) {
  Method m;
  m.name = name;
  if (name.rfind("daitche", 0) == 0 && name.size() == 8) {
    const int order = name[7] - '0';
    if (order < 1 || order > 3) throw ConfigError("unknown method '" + name + "'");
    m.kind = Method::Kind::Direct;
    m.direct_order = order;
    return m;
  }
  const auto plus = name.find('+');
  if (plus == std::string::npos) throw ConfigError("unknown method '" + name + "'");
  const std::string space = name.substr(0, plus);
  if (space == "fd2") {
    m.space_order = 2;
  } else if (space == "fd4") {
    m.space_order = 4;
  } else {
    throw ConfigError("unknown spatial discretisation in '" + name + "'");
  }
  m.scheme = parse_scheme(name.substr(plus + 1));
  return m;
}

Trajectory run_method(const Problem& problem, const Method& method, std::size_t N,
                      std::size_t steps, const SolverSettings& settings) {
  if (!problem.field) throw ConfigError("problem has no flow field");
  if (steps == 0) {
    // zero-length run: the initial state only
    Trajectory tr;
    tr.scheme = method.name;
    tr.N = method.kind == Method::Kind::Direct ? 0 : N;
    tr.c = method.kind == Method::Kind::Direct ? 0.0 : settings.c;
    tr.times = {problem.t0};
    tr.positions = {problem.y0};
    tr.rel_velocity = {problem.q0};
    return tr;
  }
  const double dt = (problem.T - problem.t0) / static_cast<double>(steps);

  if (method.kind == Method::Kind::Direct) {
    Trajectory tr = integrate_direct(*problem.field, problem.params, problem.y0, problem.v0(),
                                     problem.t0, dt, steps, method.direct_order);
    tr.scheme = method.name;
    return tr;
  }

  const PseudoGrid grid = build_grid(N, settings.c);
  auto op = std::make_shared<const SpatialOperator>(
      assemble(method.space_order, grid, problem.params));
  const FullSystem sys(op, problem.field, problem.params);
  StepperConfig cfg;
  cfg.scheme = method.scheme;
  cfg.dt = dt;
  cfg.newton_tol = settings.newton_tol;
  cfg.newton_max_iter = settings.newton_max_iter;
  cfg.linear_tol = settings.linear_tol;
  const Eigen::VectorXd eta0 = initial_state_relative(sys, problem.y0, problem.q0);
  Trajectory tr = integrate(sys, eta0, problem.t0, problem.T, cfg);
  tr.scheme = method.name;
  return tr;
}

}  // namespace mre
