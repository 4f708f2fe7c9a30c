#pragma once

#include <Eigen/Dense>
#include <functional>

namespace mre {

/// n x 2 block holding the two velocity components of every pseudo-space
/// node; row-major so that it aliases the interleaved q-vector.
using Block = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using BlockMap = Eigen::Map<Block>;
using ConstBlockMap = Eigen::Map<const Block>;

/// Tridiagonal matrix; lower(0) and upper(n-1) are unused.
struct Tridiagonal {
  Eigen::VectorXd lower;
  Eigen::VectorXd diag;
  Eigen::VectorXd upper;

  Eigen::Index size() const { return diag.size(); }
  Eigen::MatrixXd to_dense() const;
  /// out = T * in, column by column
  void apply(const Eigen::Ref<const Eigen::MatrixXd>& in, Eigen::Ref<Eigen::MatrixXd> out) const;
  void apply(const ConstBlockMap& in, BlockMap out) const;
};

/// LU factors of a tridiagonal matrix (no pivoting). Throws AssemblyError on a
/// zero pivot.
class TridiagonalLu {
 public:
  explicit TridiagonalLu(const Tridiagonal& t);
  /// Solves in place for every column of x.
  void solve_in_place(Eigen::Ref<Eigen::MatrixXd> x) const;
  void solve_in_place(BlockMap x) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::VectorXd lower_;  // multipliers l_i
  Eigen::VectorXd pivot_;  // u_ii
  Eigen::VectorXd upper_;  // u_i,i+1
};

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  ///< final residual relative to ||b||
  bool converged = false;
};

using LinearMap = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Restarted GMRES(m) for op(x) = b with modified Gram-Schmidt Arnoldi and
/// Givens rotations. Left preconditioning is the caller's job: pass the
/// preconditioned operator and right-hand side. x holds the initial guess on
/// entry and the solution on exit.
GmresResult gmres(const LinearMap& op, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  double rel_tol, int restart, int max_iterations);

}  // namespace mre
