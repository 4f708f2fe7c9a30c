#include "mre/integrators.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mre/linear_algebra.hpp"

namespace mre {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Trapezoidal: return "trapezoidal";
    case Scheme::Dirk4: return "dirk4";
    case Scheme::Imex2: return "imex2";
    case Scheme::Imex4: return "imex4";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "trapezoidal" || name == "trap") return Scheme::Trapezoidal;
  if (name == "dirk4") return Scheme::Dirk4;
  if (name == "imex2") return Scheme::Imex2;
  if (name == "imex4") return Scheme::Imex4;
  throw ConfigError("unknown time stepper '" + name + "'");
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(newton_tol > 0.0 && newton_tol < 1.0)) throw ConfigError("newton_tol must lie in (0, 1)");
  if (!(linear_tol > 0.0 && linear_tol < 1.0)) throw ConfigError("linear_tol must lie in (0, 1)");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be at least 1");
  if (krylov_restart < 1) throw ConfigError("krylov_restart must be at least 1");
}

Stepper::Stepper(const SplitProblem& problem, const StepperConfig& cfg)
    : problem_(problem), cfg_(cfg) {
  cfg_.validate();
  const double dt = cfg_.dt;
  switch (cfg_.scheme) {
    case Scheme::Trapezoidal: shifted(0.5 * dt); break;
    case Scheme::Dirk4: shifted(esdirk4().a(1, 1) * dt); break;
    case Scheme::Imex2: shifted(imex_midpoint().implicit_part.a(1, 1) * dt); break;
    case Scheme::Imex4: shifted(ark4().implicit_part.a(1, 1) * dt); break;
  }
}

const ShiftedSolve& Stepper::shifted(double a) {
  auto it = cache_.find(a);
  if (it == cache_.end()) {
    it = cache_.emplace(a, problem_.factorize_shifted(a)).first;
  }
  return *it->second;
}

Eigen::VectorXd Stepper::solve_stage(double a, double t, const Eigen::VectorXd& r,
                                     Eigen::VectorXd x, int stage) {
  const ShiftedSolve& M = shifted(a);
  const Eigen::Index n = r.size();
  Eigen::VectorXd lin(n), om(n), G(n), rhs(n), delta(n), tmp(n), om_pert(n);
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  double res = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= cfg_.newton_max_iter; ++it) {
    problem_.apply_linear(x, lin);
    problem_.forcing(x, t, om);
    G = x - a * (lin + om) - r;
    res = G.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res)) break;
    if (res <= cfg_.newton_tol) {
      stats_.last_newton_iterations = it;
      stats_.newton_iterations += it;
      return x;
    }
    if (it == cfg_.newton_max_iter) break;

    // left-preconditioned Newton system M^{-1} J delta = -M^{-1} G,
    // M^{-1} J v = v - a M^{-1} (d omega) v
    M.solve(-G, rhs);
    const double xnorm = x.norm();
    LinearMap op = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
      const double vnorm = v.norm();
      if (vnorm == 0.0) {
        out.setZero(v.size());
        return;
      }
      const double eps = sqrt_eps * (1.0 + xnorm) / vnorm;
      problem_.forcing(x + eps * v, t, om_pert);
      M.solve(a * (om_pert - om) / eps, tmp);
      out = v - tmp;
    };
    delta.setZero();
    const GmresResult g = gmres(op, rhs, delta, cfg_.linear_tol, cfg_.krylov_restart,
                                10 * cfg_.krylov_restart);
    stats_.krylov_iterations += g.iterations;
    x += delta;
  }
  throw StepError("Newton iteration did not converge in stage " + std::to_string(stage) +
                      " (residual " + std::to_string(res) + ")",
                  res);
}

Eigen::VectorXd Stepper::step_trapezoidal(const Eigen::VectorXd& eta, double t) {
  const double dt = cfg_.dt;
  const double a = 0.5 * dt;
  Eigen::VectorXd lin, om;
  problem_.apply_linear(eta, lin);
  problem_.forcing(eta, t, om);
  const Eigen::VectorXd f0 = lin + om;
  const Eigen::VectorXd r = eta + a * f0;
  // explicit Euler predictor as Newton start
  return solve_stage(a, t + dt, r, eta + dt * f0, 1);
}

Eigen::VectorXd Stepper::step_dirk(const Eigen::VectorXd& eta, double t) {
  const ButcherTableau& tab = esdirk4();
  const double dt = cfg_.dt;
  const std::size_t s = tab.stages;
  std::vector<Eigen::VectorXd> F(s);
  Eigen::VectorXd lin, om;
  problem_.apply_linear(eta, lin);
  problem_.forcing(eta, t, om);
  F[0] = lin + om;
  Eigen::VectorXd Y = eta;
  for (std::size_t i = 1; i < s; ++i) {
    Eigen::VectorXd r = eta;
    for (std::size_t j = 0; j < i; ++j) {
      if (tab.a(i, j) != 0.0) r += dt * tab.a(i, j) * F[j];
    }
    const double ti = t + tab.c[i] * dt;
    Y = solve_stage(dt * tab.a(i, i), ti, r, Y, static_cast<int>(i));
    if (i + 1 < s) {
      problem_.apply_linear(Y, lin);
      problem_.forcing(Y, ti, om);
      F[i] = lin + om;
    }
  }
  // stiffly accurate: the last stage is the step result
  return Y;
}

Eigen::VectorXd Stepper::step_imex(const ImexTableau& tab, const Eigen::VectorXd& eta, double t) {
  const ButcherTableau& ex = tab.explicit_part;
  const ButcherTableau& im = tab.implicit_part;
  const double dt = cfg_.dt;
  const std::size_t s = im.stages;
  std::vector<Eigen::VectorXd> Fe(s), Fi(s);
  Eigen::VectorXd Y;
  for (std::size_t i = 0; i < s; ++i) {
    Eigen::VectorXd r = eta;
    for (std::size_t j = 0; j < i; ++j) {
      if (ex.a(i, j) != 0.0) r += dt * ex.a(i, j) * Fe[j];
      if (im.a(i, j) != 0.0) r += dt * im.a(i, j) * Fi[j];
    }
    const double aii = im.a(i, i);
    if (aii == 0.0) {
      Y = std::move(r);
    } else {
      shifted(dt * aii).solve(r, Y);
    }
    problem_.apply_linear(Y, Fi[i]);
    problem_.forcing(Y, t + ex.c[i] * dt, Fe[i]);
  }
  Eigen::VectorXd out = eta;
  for (std::size_t i = 0; i < s; ++i) {
    if (ex.b[i] != 0.0) out += dt * ex.b[i] * Fe[i];
    if (im.b[i] != 0.0) out += dt * im.b[i] * Fi[i];
  }
  return out;
}

Eigen::VectorXd Stepper::step(const Eigen::VectorXd& eta, double t) {
  Eigen::VectorXd next;
  switch (cfg_.scheme) {
    case Scheme::Trapezoidal: next = step_trapezoidal(eta, t); break;
    case Scheme::Dirk4: next = step_dirk(eta, t); break;
    case Scheme::Imex2: next = step_imex(imex_midpoint(), eta, t); break;
    case Scheme::Imex4: next = step_imex(ark4(), eta, t); break;
  }
  if (!next.allFinite()) throw StepError("non-finite state after step", 0.0);
  ++stats_.steps;
  return next;
}

Eigen::VectorXd step_trapezoidal(const SplitProblem& sys, const Eigen::VectorXd& eta, double t,
                                 const StepperConfig& cfg) {
  if (cfg.scheme != Scheme::Trapezoidal) throw ConfigError("step_trapezoidal needs trapezoidal");
  return Stepper(sys, cfg).step(eta, t);
}

Eigen::VectorXd step_dirk4(const SplitProblem& sys, const Eigen::VectorXd& eta, double t,
                           const StepperConfig& cfg) {
  if (cfg.scheme != Scheme::Dirk4) throw ConfigError("step_dirk4 needs dirk4");
  return Stepper(sys, cfg).step(eta, t);
}

Eigen::VectorXd step_imex(const SplitProblem& sys, const Eigen::VectorXd& eta, double t,
                          const StepperConfig& cfg) {
  if (cfg.scheme != Scheme::Imex2 && cfg.scheme != Scheme::Imex4) {
    throw ConfigError("step_imex needs imex2 or imex4");
  }
  return Stepper(sys, cfg).step(eta, t);
}

std::size_t step_count(double t0, double T, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(T >= t0)) throw ConfigError("t_span must satisfy T >= t0");
  const double ratio = (T - t0) / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError("(T - t0)/dt = " + std::to_string(ratio) + " is not an integer");
  }
  return static_cast<std::size_t>(n);
}

Trajectory integrate(const FullSystem& sys, const Eigen::VectorXd& eta0, double t0, double T,
                     const StepperConfig& cfg) {
  const std::size_t n = step_count(t0, T, cfg.dt);
  if (static_cast<std::size_t>(eta0.size()) != sys.size()) {
    throw ConfigError("initial state has the wrong length");
  }
  Trajectory tr;
  tr.scheme = scheme_name(cfg.scheme);
  tr.N = sys.op().nodes() + 1;
  tr.c = sys.op().c();
  tr.dt = cfg.dt;
  tr.times.reserve(n + 1);
  tr.positions.reserve(n + 1);
  tr.rel_velocity.reserve(n + 1);
  auto record = [&tr](double t, const Eigen::VectorXd& x) {
    tr.times.push_back(t);
    tr.positions.push_back(x.tail<2>());
    tr.rel_velocity.push_back(x.head<2>());
  };
  record(t0, eta0);

  Stepper stepper(sys, cfg);
  Eigen::VectorXd eta = eta0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * cfg.dt;
    try {
      eta = stepper.step(eta, t);
      if (!eta.allFinite() || eta.lpNorm<Eigen::Infinity>() > kDivergenceBound) {
        throw InstabilityError("solution diverged", k + 1);
      }
    } catch (const Error& e) {
      tr.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      tr.newton_iterations = stepper.stats().newton_iterations;
      throw IntegrationAborted("step " + std::to_string(k + 1) + " at t = " + std::to_string(t) +
                                   " failed: " + e.what(),
                               std::move(tr));
    }
    record(t0 + static_cast<double>(k + 1) * cfg.dt, eta);
  }
  tr.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  tr.newton_iterations = stepper.stats().newton_iterations;
  return tr;
}

}  // namespace mre
