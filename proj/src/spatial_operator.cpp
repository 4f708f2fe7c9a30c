#include "mre/spatial_operator.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <string>
#include <vector>

#include "mre/errors.hpp"

namespace mre {

namespace {

class TridiagonalShifted final : public ShiftedBlockSolver {
 public:
  explicit TridiagonalShifted(const Tridiagonal& t) : lu_(t) {}
  void solve(const ConstBlockMap& rhs, BlockMap out) const override {
    out = rhs;
    lu_.solve_in_place(out);
  }

 private:
  TridiagonalLu lu_;
};

/// (I - a A_s) with A_s = P Z, P = I + beta s e0^T: multiplying by P^{-1}
/// gives (I - a Z) x - kappa s x0 = P^{-1} r. I - a Z is solved through the
/// banded pair M2 x - a B2 z = M2 y, M1 z - B1 x = 0 (unknowns interleaved),
/// the rank-one term by Sherman-Morrison.
class Fd4Shifted final : public ShiftedBlockSolver {
 public:
  Fd4Shifted(const Fd4Factors& f, double a) : f_(f) {
    const Eigen::Index n = f.M1.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(16 * n));
    const double inv_d = 1.0 / f.d;
    auto add_tri = [&](const Tridiagonal& t, Eigen::Index row_off, Eigen::Index col_off, double scale) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i > 0) trip.emplace_back(2 * i + row_off, 2 * (i - 1) + col_off, scale * t.lower(i));
        trip.emplace_back(2 * i + row_off, 2 * i + col_off, scale * t.diag(i));
        if (i + 1 < n) trip.emplace_back(2 * i + row_off, 2 * (i + 1) + col_off, scale * t.upper(i));
      }
    };
    auto add_b = [&](const Eigen::RowVector4d& row0, Eigen::Index row_off, Eigen::Index col_off, double scale) {
      for (Eigen::Index j = 0; j < 4 && j < n; ++j) trip.emplace_back(row_off, 2 * j + col_off, scale * row0(j));
      for (Eigen::Index i = 1; i < n; ++i) {
        trip.emplace_back(2 * i + row_off, 2 * (i - 1) + col_off, -3.0 * inv_d * scale);
        if (i + 1 < n) trip.emplace_back(2 * i + row_off, 2 * (i + 1) + col_off, 3.0 * inv_d * scale);
      }
    };
    // even rows: M2 x - a B2 z; odd rows: -B1 x + M1 z
    add_tri(f.M2, 0, 0, 1.0);
    add_b(f.b2_row0, 0, 1, -a);
    add_b(f.b1_row0, 1, 0, -1.0);
    add_tri(f.M1, 1, 1, 1.0);
    Eigen::SparseMatrix<double> w(2 * n, 2 * n);
    w.setFromTriplets(trip.begin(), trip.end());
    w.makeCompressed();
    lu_.compute(w);
    if (lu_.info() != Eigen::Success) throw AssemblyError("shifted fourth-order system is singular");
    ws_ = solve_w(f.s);
    const double den = 1.0 - f.kappa * ws_(0);
    if (!std::isfinite(den) || std::abs(den) < 1e-14) {
      throw AssemblyError("shifted fourth-order boundary system is singular");
    }
    x0_scale_ = 1.0 / den;
  }

  void solve(const ConstBlockMap& rhs, BlockMap out) const override {
    for (Eigen::Index c = 0; c < 2; ++c) {
      Eigen::VectorXd y = rhs.col(c) - f_.kappa * rhs(0, c) * f_.s;
      Eigen::VectorXd u = solve_w(y);
      const double x0 = u(0) * x0_scale_;
      out.col(c) = u + f_.kappa * x0 * ws_;
    }
  }

 private:
  Eigen::VectorXd solve_w(const Eigen::VectorXd& y) const {
    const Eigen::Index n = y.size();
    // right-hand side M2 y on even rows
    Eigen::MatrixXd m2y(n, 1);
    f_.M2.apply(y, m2y);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) b(2 * i) = m2y(i, 0);
    const Eigen::VectorXd sol = lu_.solve(b);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = sol(2 * i);
    return x;
  }

  Fd4Factors f_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::VectorXd ws_;
  double x0_scale_ = 1.0;
};

/// Rows of B (boundary row 0 given, interior -3/d, +3/d) applied to X.
Eigen::MatrixXd apply_b(const Eigen::RowVector4d& row0, double d, const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd out(n, X.cols());
  out.row(0) = row0(0) * X.row(0) + row0(1) * X.row(1) + row0(2) * X.row(2) + row0(3) * X.row(3);
  for (Eigen::Index i = 1; i < n; ++i) {
    out.row(i) = -3.0 * X.row(i - 1);
    if (i + 1 < n) out.row(i) += 3.0 * X.row(i + 1);
  }
  out.bottomRows(n - 1) /= d;
  return out;
}

void apply_stencil(const Eigen::RowVector4d& row0, double d,
                   const Eigen::Ref<const Eigen::MatrixXd>& X, Eigen::Ref<Eigen::MatrixXd> out) {
  const Eigen::Index n = X.rows();
  out.row(0) = row0(0) * X.row(0) + row0(1) * X.row(1) + row0(2) * X.row(2) + row0(3) * X.row(3);
  for (Eigen::Index i = 1; i < n; ++i) {
    out.row(i) = -3.0 * X.row(i - 1);
    if (i + 1 < n) out.row(i) += 3.0 * X.row(i + 1);
    out.row(i) /= d;
  }
}

Tridiagonal compact_mass(std::size_t N, double c, double row0_upper) {
  const Eigen::Index n = static_cast<Eigen::Index>(N) - 1;
  const double Nd = static_cast<double>(N);
  Tridiagonal m{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  m.diag(0) = c;
  m.upper(0) = row0_upper;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double k = static_cast<double>(i);
    m.lower(i) = Nd * c / (Nd - k + 1.0);
    m.diag(i) = 4.0 * Nd * c / (Nd - k);
    if (i + 1 < n) m.upper(i) = Nd * c / (Nd - k - 1.0);
  }
  return m;
}

Eigen::MatrixXd stencil_matrix(const Eigen::RowVector4d& row0, std::size_t N, double d) {
  const Eigen::Index n = static_cast<Eigen::Index>(N) - 1;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  b.row(0).head(4) = row0;
  for (Eigen::Index i = 1; i < n; ++i) {
    b(i, i - 1) = -3.0 / d;
    if (i + 1 < n) b(i, i + 1) = 3.0 / d;
  }
  return b;
}

}  // namespace

Fd4BoundaryCoefficients fd4_boundary_coefficients(double alpha, double gamma, double c, double d) {
  Fd4BoundaryCoefficients k{};
  k.b0_hat = -2.0 * c / (3.0 * gamma);
  k.b0 = (12.0 * alpha * d * c - 17.0 * gamma) / (18.0 * gamma);
  k.b1 = 0.5;
  k.b2 = 0.5;
  k.b3 = -1.0 / 18.0;
  return k;
}

Fd4Blocks fd4_blocks(const PseudoGrid& grid, const MreParams& params) {
  const std::size_t N = grid.N();
  if (N < kMinFd4Nodes) {
    throw ConfigError("fourth-order operator needs N >= " + std::to_string(kMinFd4Nodes) +
                      ", got " + std::to_string(N));
  }
  const double c = grid.c();
  const double d = grid.d();
  const double Nd = static_cast<double>(N);
  const auto k = fd4_boundary_coefficients(params.alpha(), params.gamma(), c, d);

  const Eigen::RowVector4d b1_row0 = Eigen::RowVector4d(k.b0, k.b1, k.b2, k.b3) / d;
  const Eigen::RowVector4d b2_row0 =
      Eigen::RowVector4d(-17.0 / 6.0, 1.5, 1.5, -1.0 / 6.0) / d;

  Fd4Blocks blocks{compact_mass(N, c, Nd * c / (Nd - 1.0)),
                   compact_mass(N, c, 3.0 * Nd * c / (Nd - 1.0)),
                   stencil_matrix(b1_row0, N, d), stencil_matrix(b2_row0, N, d), k.b0_hat};
  return blocks;
}

Eigen::MatrixXd SpatialOperator::scalar_matrix() const {
  if (const auto* t = std::get_if<Tridiagonal>(&a_)) return t->to_dense();
  const auto& f = std::get<Fd4Factors>(a_);
  const auto n = static_cast<Eigen::Index>(nodes_);
  Eigen::MatrixXd z(n, n);
  f.apply_z(Eigen::MatrixXd::Identity(n, n), z);
  Eigen::MatrixXd a = z;
  a.noalias() += f.beta * f.s * z.row(0);
  return a;
}

void SpatialOperator::apply(const ConstBlockMap& q, BlockMap out) const {
  if (const auto* t = std::get_if<Tridiagonal>(&a_)) {
    t->apply(q, out);
  } else {
    const auto& f = std::get<Fd4Factors>(a_);
    Eigen::MatrixXd z(q.rows(), 2);
    f.apply_z(q, z);
    out = z;
    out.noalias() += f.beta * f.s * z.row(0);
  }
}

void SpatialOperator::add_source(const Vec2& f, BlockMap out) const {
  out.noalias() += g_ * f.transpose();
}

std::unique_ptr<ShiftedBlockSolver> SpatialOperator::factorize_shifted(double a) const {
  if (const auto* t = std::get_if<Tridiagonal>(&a_)) {
    Tridiagonal s{-a * t->lower, -a * t->diag, -a * t->upper};
    s.diag.array() += 1.0;
    return std::make_unique<TridiagonalShifted>(s);
  }
  return std::make_unique<Fd4Shifted>(std::get<Fd4Factors>(a_), a);
}

Eigen::SparseMatrix<double> SpatialOperator::interleaved() const {
  const Eigen::MatrixXd a = scalar_matrix();
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) {
        trip.emplace_back(2 * i, 2 * j, a(i, j));
        trip.emplace_back(2 * i + 1, 2 * j + 1, a(i, j));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::SparseMatrix<double> s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Eigen::MatrixXd SpatialOperator::interleaved_dense() const {
  return Eigen::MatrixXd(interleaved());
}

Eigen::MatrixXd SpatialOperator::interleaved_source() const {
  const auto n = static_cast<Eigen::Index>(nodes_);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(2 * i, 0) = g_(i);
    s(2 * i + 1, 1) = g_(i);
  }
  return s;
}

SpatialOperator assemble_fd2(const PseudoGrid& grid, const MreParams& params) {
  const std::size_t N = grid.N();
  const auto n = static_cast<Eigen::Index>(N - 1);
  const double alpha = params.alpha();
  const double gamma = params.gamma();

  Tridiagonal t{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  const double psi0 = grid.psi(0);
  const double zeta0 = grid.zeta(0);
  const double den = zeta0 * (2.0 + gamma * psi0);
  t.diag(0) = -(gamma + 2.0 * alpha * zeta0) / den;
  t.upper(0) = gamma / den;
  for (Eigen::Index m = 1; m < n; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    const double psi = grid.psi(mu);
    const double zl = grid.zeta(mu - 1);
    const double zr = grid.zeta(mu);
    t.lower(m) = 1.0 / (2.0 * psi * zl);
    t.diag(m) = -(zl + zr) / (2.0 * psi * zl * zr);
    if (m + 1 < n) t.upper(m) = 1.0 / (2.0 * psi * zr);
  }

  SpatialOperator op(2, static_cast<std::size_t>(n), grid.c());
  op.a_ = std::move(t);
  op.g_ = Eigen::VectorXd::Zero(n);
  op.g_(0) = 2.0 / (2.0 + gamma * psi0);
  return op;
}

void Fd4Factors::apply_z(const Eigen::Ref<const Eigen::MatrixXd>& q,
                         Eigen::Ref<Eigen::MatrixXd> out) const {
  Eigen::MatrixXd t(q.rows(), q.cols());
  apply_stencil(b1_row0, d, q, t);
  m1.solve_in_place(t);
  apply_stencil(b2_row0, d, t, out);
  m2.solve_in_place(out);
}

SpatialOperator assemble_fd4(const PseudoGrid& grid, const MreParams& params) {
  Fd4Blocks blk = fd4_blocks(grid, params);
  const double d = grid.d();
  const auto n = static_cast<Eigen::Index>(grid.N() - 1);
  const double kappa = -blk.source_scale;  // 2c/(3 gamma)

  TridiagonalLu m1(blk.M1);
  TridiagonalLu m2(blk.M2);
  const Eigen::RowVector4d b1_row0 = blk.B1.row(0).head(4);
  const Eigen::RowVector4d b2_row0 = blk.B2.row(0).head(4);

  // Psi = M2 - kappa w e0^T with w = B2 M1^{-1} e0; invert by Sherman-Morrison
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, 1);
  z(0, 0) = 1.0;
  m1.solve_in_place(z);
  Eigen::MatrixXd s = apply_b(b2_row0, d, z);
  m2.solve_in_place(s);
  const double denom = 1.0 - kappa * s(0, 0);
  if (!std::isfinite(denom) || std::abs(denom) < 1e-14) {
    throw AssemblyError("fourth-order boundary system is singular");
  }
  if (!s.allFinite()) throw AssemblyError("fourth-order operator has non-finite entries");

  SpatialOperator op(4, static_cast<std::size_t>(n), grid.c());
  op.g_ = -kappa * s.col(0) / denom;
  op.a_ = Fd4Factors{std::move(blk.M1), std::move(blk.M2), std::move(m1), std::move(m2),
                     b1_row0, b2_row0, d, s.col(0), kappa, kappa / denom};
  return op;
}

SpatialOperator assemble(int order, const PseudoGrid& grid, const MreParams& params) {
  if (order == 2) return assemble_fd2(grid, params);
  if (order == 4) return assemble_fd4(grid, params);
  throw ConfigError("unsupported spatial order " + std::to_string(order));
}

}  // namespace mre
