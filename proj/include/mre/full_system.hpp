#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>

#include "mre/flow_fields.hpp"
#include "mre/params.hpp"
#include "mre/spatial_operator.hpp"

namespace mre {

/// Solver for (I - a A) x = rhs, where A is the linear part of a SplitProblem.
class ShiftedSolve {
 public:
  virtual ~ShiftedSolve() = default;
  virtual void solve(const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const = 0;
};

/// Semi-linear system d eta/dt = A eta + omega(eta, t).
class SplitProblem {
 public:
  virtual ~SplitProblem() = default;
  virtual std::size_t size() const = 0;
  virtual void apply_linear(const Eigen::VectorXd& x, Eigen::VectorXd& out) const = 0;
  virtual void forcing(const Eigen::VectorXd& x, double t, Eigen::VectorXd& out) const = 0;
  virtual std::unique_ptr<ShiftedSolve> factorize_shifted(double a) const = 0;
};

/// Maxey-Riley system in pseudo-space. State layout:
///   eta = (q0^1, q0^2, q1^1, ..., q_{N-2}^2, y^1, y^2),
/// with q_{N-1} = 0 imposed. The linear part is
///   A = [[A_s, 0], [P0, 0]],   P0 picks q0,
/// and the nonlinear part omega = [kron(g, I2) f(q0, y, t); u(y, t)].
class FullSystem final : public SplitProblem {
 public:
  FullSystem(std::shared_ptr<const SpatialOperator> op, FieldPtr field, const MreParams& params);

  const SpatialOperator& op() const { return *op_; }
  const FlowField& field() const { return *field_; }
  const MreParams& params() const { return params_; }

  std::size_t size() const override { return op_->dim() + 2; }
  void apply_linear(const Eigen::VectorXd& x, Eigen::VectorXd& out) const override;
  void forcing(const Eigen::VectorXd& x, double t, Eigen::VectorXd& out) const override;
  std::unique_ptr<ShiftedSolve> factorize_shifted(double a) const override;

  /// Full linear part A on the state layout.
  Eigen::SparseMatrix<double> linear_matrix() const;

  static Vec2 q0(const Eigen::VectorXd& x) { return x.head<2>(); }
  Vec2 position(const Eigen::VectorXd& x) const { return x.tail<2>(); }

 private:
  std::shared_ptr<const SpatialOperator> op_;
  FieldPtr field_;
  MreParams params_;
};

/// Couples an assembled operator with a field: A = [[A_s, 0], [P0, 0]],
/// omega = [kron(g, I2) f(q0, y, t); u(y, t)].
FullSystem assemble_full(std::shared_ptr<const SpatialOperator> op, FieldPtr field,
                         const MreParams& params);

/// Initial state: boundary node q0 = v0 - u(y0, t0), all interior nodes zero,
/// y = y0.
Eigen::VectorXd initial_state(const FullSystem& sys, const Vec2& y0, const Vec2& v0, double t0);

/// Same from a prescribed relative velocity q0 = v0 - u(y0, t0).
Eigen::VectorXd initial_state_relative(const FullSystem& sys, const Vec2& y0, const Vec2& q0);

}  // namespace mre
