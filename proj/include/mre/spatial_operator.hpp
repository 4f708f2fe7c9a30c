#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <variant>

#include "mre/flow_fields.hpp"
#include "mre/grid.hpp"
#include "mre/linear_algebra.hpp"
#include "mre/params.hpp"

namespace mre {

/// Coefficients of the fourth-order boundary closure
///   a0 D0 + a1 D1 = b0hat (alpha q0 - (gamma/c) D0) + (1/d) sum_j b_j q_j
/// with a0 = a1 = 1, where D_n is the xi-derivative at node n.
struct Fd4BoundaryCoefficients {
  double b0_hat;
  double b0;
  double b1;
  double b2;
  double b3;
};

Fd4BoundaryCoefficients fd4_boundary_coefficients(double alpha, double gamma, double c, double d);

/// Scalar building blocks of the fourth-order scheme (one velocity component,
/// unknowns q_0..q_{N-2}). M1, M2 are tridiagonal; B1, B2 are kept dense for
/// inspection.
struct Fd4Blocks {
  Tridiagonal M1;
  Tridiagonal M2;
  Eigen::MatrixXd B1;
  Eigen::MatrixXd B2;
  double source_scale;  ///< -2c/(3 gamma): f enters row 0 of the first stage
};

Fd4Blocks fd4_blocks(const PseudoGrid& grid, const MreParams& params);

/// Shifted solve (I - a A_s) x = rhs on an (N-1) x 2 block.
class ShiftedBlockSolver {
 public:
  virtual ~ShiftedBlockSolver() = default;
  virtual void solve(const ConstBlockMap& rhs, BlockMap out) const = 0;
};

/// Factored fourth-order operator A_s = (I + beta s e0^T) Z with
/// Z = M2^{-1} B2 M1^{-1} B1. Applying and shifting it costs O(N).
struct Fd4Factors {
  Tridiagonal M1;
  Tridiagonal M2;
  TridiagonalLu m1;
  TridiagonalLu m2;
  Eigen::RowVector4d b1_row0;
  Eigen::RowVector4d b2_row0;
  double d;
  Eigen::VectorXd s;  ///< M2^{-1} B2 M1^{-1} e0
  double kappa;       ///< 2c/(3 gamma)
  double beta;        ///< kappa / (1 - kappa s0)

  /// out = Z q
  void apply_z(const Eigen::Ref<const Eigen::MatrixXd>& q, Eigen::Ref<Eigen::MatrixXd> out) const;
};

/// Discretised pseudo-space operator
///   dq/dt = A_s q + kron(g, I2) f
/// acting on the interleaved vector (q0^1, q0^2, ..., q_{N-2}^1, q_{N-2}^2).
/// Both components see the same scalar operator, so only the scalar
/// (N-1) x (N-1) matrix and source column g are stored.
class SpatialOperator {
 public:
  int order() const { return order_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t dim() const { return 2 * nodes_; }
  double c() const { return c_; }

  bool is_tridiagonal() const { return std::holds_alternative<Tridiagonal>(a_); }
  Eigen::MatrixXd scalar_matrix() const;
  const Eigen::VectorXd& source() const { return g_; }

  /// out = A_s q on (N-1) x 2 blocks.
  void apply(const ConstBlockMap& q, BlockMap out) const;
  /// Adds kron(g, I2) f to the block.
  void add_source(const Vec2& f, BlockMap out) const;

  std::unique_ptr<ShiftedBlockSolver> factorize_shifted(double a) const;

  /// A_s on the interleaved layout.
  Eigen::SparseMatrix<double> interleaved() const;
  Eigen::MatrixXd interleaved_dense() const;
  /// kron(g, I2) on the interleaved layout, 2(N-1) x 2.
  Eigen::MatrixXd interleaved_source() const;

  friend SpatialOperator assemble_fd2(const PseudoGrid& grid, const MreParams& params);
  friend SpatialOperator assemble_fd4(const PseudoGrid& grid, const MreParams& params);

 private:
  SpatialOperator(int order, std::size_t nodes, double c) : order_(order), nodes_(nodes), c_(c) {}

  int order_;
  std::size_t nodes_;
  double c_;
  std::variant<Tridiagonal, Fd4Factors> a_;
  Eigen::VectorXd g_;
};

/// Second-order finite differences on the half-node grid. The scalar matrix is
/// tridiagonal (pentadiagonal with empty first off-diagonals once
/// interleaved).
SpatialOperator assemble_fd2(const PseudoGrid& grid, const MreParams& params);

/// Fourth-order compact scheme. Requires N >= kMinFd4Nodes; throws
/// ConfigError otherwise and AssemblyError if the boundary-coupled system is
/// singular. The operator is kept in factored form; scalar_matrix()
/// materialises the dense matrix on request.
SpatialOperator assemble_fd4(const PseudoGrid& grid, const MreParams& params);

/// Dispatch on order (2 or 4).
SpatialOperator assemble(int order, const PseudoGrid& grid, const MreParams& params);

}  // namespace mre
