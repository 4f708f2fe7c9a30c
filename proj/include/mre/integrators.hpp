#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mre/errors.hpp"
#include "mre/full_system.hpp"
#include "mre/tableaus.hpp"

namespace mre {

enum class Scheme { Trapezoidal, Dirk4, Imex2, Imex4 };

std::string scheme_name(Scheme s);
/// Accepts "trapezoidal"/"trap", "dirk4", "imex2", "imex4".
Scheme parse_scheme(const std::string& name);

struct StepperConfig {
  Scheme scheme = Scheme::Trapezoidal;
  double dt = 1e-2;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double linear_tol = 1e-12;
  int krylov_restart = 30;

  /// Throws ConfigError unless dt > 0 and both tolerances lie in (0, 1).
  void validate() const;
};

struct StepStats {
  long steps = 0;
  long newton_iterations = 0;
  long krylov_iterations = 0;
  /// Newton iterations of the most recent nonlinear solve.
  int last_newton_iterations = 0;
};

/// Fixed-step integrator for one SplitProblem. Owns the factorisations of
/// (I - a A), one per distinct stage coefficient a, built on construction.
class Stepper {
 public:
  Stepper(const SplitProblem& problem, const StepperConfig& cfg);

  const StepperConfig& config() const { return cfg_; }
  const StepStats& stats() const { return stats_; }

  Eigen::VectorXd step(const Eigen::VectorXd& eta, double t);

 private:
  const ShiftedSolve& shifted(double a);
  /// Solves x - a (A x + omega(x, t)) = r by Newton-Krylov from `guess`.
  Eigen::VectorXd solve_stage(double a, double t, const Eigen::VectorXd& r,
                              Eigen::VectorXd guess, int stage);
  Eigen::VectorXd step_trapezoidal(const Eigen::VectorXd& eta, double t);
  Eigen::VectorXd step_dirk(const Eigen::VectorXd& eta, double t);
  Eigen::VectorXd step_imex(const ImexTableau& tab, const Eigen::VectorXd& eta, double t);

  const SplitProblem& problem_;
  StepperConfig cfg_;
  StepStats stats_;
  std::map<double, std::unique_ptr<ShiftedSolve>> cache_;
};

/// Single steps with a throw-away factorisation cache.
Eigen::VectorXd step_trapezoidal(const SplitProblem& sys, const Eigen::VectorXd& eta, double t,
                                 const StepperConfig& cfg);
Eigen::VectorXd step_dirk4(const SplitProblem& sys, const Eigen::VectorXd& eta, double t,
                           const StepperConfig& cfg);
Eigen::VectorXd step_imex(const SplitProblem& sys, const Eigen::VectorXd& eta, double t,
                          const StepperConfig& cfg);

/// States with a larger max-norm are treated as divergent.
inline constexpr double kDivergenceBound = 1e8;

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec2> positions;
  std::vector<Vec2> rel_velocity;
  double wall_time = 0.0;  ///< seconds spent in the stepping loop
  std::string scheme;
  std::size_t N = 0;
  double c = 0.0;
  double dt = 0.0;
  long newton_iterations = 0;

  std::size_t size() const { return times.size(); }
};

/// Raised when a step fails mid-run; carries everything computed so far.
class IntegrationAborted : public Error {
 public:
  IntegrationAborted(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Number of steps covering [t0, T] with step dt; throws ConfigError unless
/// (T - t0)/dt is an integer to within 1e-9.
std::size_t step_count(double t0, double T, double dt);

/// Integrates from eta0 at t0 to T, recording y and q0 at every step.
Trajectory integrate(const FullSystem& sys, const Eigen::VectorXd& eta0, double t0, double T,
                     const StepperConfig& cfg);

}  // namespace mre
