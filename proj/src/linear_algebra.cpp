#include "mre/linear_algebra.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>
#include <algorithm>

#include "mre/errors.hpp"

namespace mre {

Eigen::MatrixXd Tridiagonal::to_dense() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = diag(i);
    if (i > 0) m(i, i - 1) = lower(i);
    if (i + 1 < n) m(i, i + 1) = upper(i);
  }
  return m;
}

void Tridiagonal::apply(const Eigen::Ref<const Eigen::MatrixXd>& in,
                        Eigen::Ref<Eigen::MatrixXd> out) const {
  const Eigen::Index n = size();
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) = diag(i) * in.row(i);
    if (i > 0) out.row(i) += lower(i) * in.row(i - 1);
    if (i + 1 < n) out.row(i) += upper(i) * in.row(i + 1);
  }
}

void Tridiagonal::apply(const ConstBlockMap& in, BlockMap out) const {
  const Eigen::Index n = size();
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) = diag(i) * in.row(i);
    if (i > 0) out.row(i) += lower(i) * in.row(i - 1);
    if (i + 1 < n) out.row(i) += upper(i) * in.row(i + 1);
  }
}

TridiagonalLu::TridiagonalLu(const Tridiagonal& t)
    : lower_(t.size()), pivot_(t.size()), upper_(t.size()) {
  const Eigen::Index n = t.size();
  if (n == 0) throw AssemblyError("empty tridiagonal system");
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = t.diag(i);
    if (i > 0) {
      lower_(i) = t.lower(i) / pivot_(i - 1);
      p -= lower_(i) * upper_(i - 1);
    } else {
      lower_(i) = 0.0;
    }
    if (p == 0.0 || !std::isfinite(p)) {
      throw AssemblyError("singular tridiagonal system at row " + std::to_string(i));
    }
    pivot_(i) = p;
    upper_(i) = (i + 1 < n) ? t.upper(i) : 0.0;
  }
}

void TridiagonalLu::solve_in_place(Eigen::Ref<Eigen::MatrixXd> x) const {
  const Eigen::Index n = pivot_.size();
  for (Eigen::Index i = 1; i < n; ++i) x.row(i) -= lower_(i) * x.row(i - 1);
  x.row(n - 1) /= pivot_(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    x.row(i) = (x.row(i) - upper_(i) * x.row(i + 1)) / pivot_(i);
  }
}

void TridiagonalLu::solve_in_place(BlockMap x) const {
  const Eigen::Index n = pivot_.size();
  for (Eigen::Index i = 1; i < n; ++i) x.row(i) -= lower_(i) * x.row(i - 1);
  x.row(n - 1) /= pivot_(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    x.row(i) = (x.row(i) - upper_(i) * x.row(i + 1)) / pivot_(i);
  }
}

Eigen::VectorXd TridiagonalLu::solve(const Eigen::VectorXd& b) const {
  Eigen::MatrixXd x = b;
  solve_in_place(x);
  return x.col(0);
}

GmresResult gmres(const LinearMap& op, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  double rel_tol, int restart, int max_iterations) {
  const Eigen::Index n = b.size();
  GmresResult result;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero(n);
    result.converged = true;
    return result;
  }
  if (x.size() != n) x.setZero(n);
  const int m = std::max(1, std::min<int>(restart, static_cast<int>(n)));

  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);
  Eigen::VectorXd w(n);

  while (result.iterations < max_iterations) {
    op(x, w);
    Eigen::VectorXd r = b - w;
    double beta = r.norm();
    result.residual = beta / bnorm;
    if (result.residual <= rel_tol) {
      result.converged = true;
      return result;
    }
    V.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    H.setZero();
    int k = 0;
    for (; k < m && result.iterations < max_iterations; ++k) {
      ++result.iterations;
      op(V.col(k), w);
      for (int j = 0; j <= k; ++j) {
        H(j, k) = V.col(j).dot(w);
        w -= H(j, k) * V.col(j);
      }
      H(k + 1, k) = w.norm();
      const bool breakdown = H(k + 1, k) <= 1e-14 * beta;
      if (!breakdown) V.col(k + 1) = w / H(k + 1, k);
      for (int j = 0; j < k; ++j) {
        const double t = cs(j) * H(j, k) + sn(j) * H(j + 1, k);
        H(j + 1, k) = -sn(j) * H(j, k) + cs(j) * H(j + 1, k);
        H(j, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs(k) = H(k, k) / denom;
      sn(k) = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      result.residual = std::abs(g(k + 1)) / bnorm;
      if (result.residual <= rel_tol || breakdown) {
        ++k;
        break;
      }
    }
    Eigen::VectorXd yk =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += V.leftCols(k) * yk;
    if (result.residual <= rel_tol) {
      // confirm with the true residual before reporting success
      op(x, w);
      result.residual = (b - w).norm() / bnorm;
      if (result.residual <= std::max(rel_tol, 1e2 * std::numeric_limits<double>::epsilon())) {
        result.converged = true;
        return result;
      }
    }
  }
  return result;
}

}  // namespace mre
