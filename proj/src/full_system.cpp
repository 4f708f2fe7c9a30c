#include "mre/full_system.hpp"

#include <vector>

#include "mre/errors.hpp"

namespace mre {

namespace {

class FullShifted final : public ShiftedSolve {
 public:
  FullShifted(std::unique_ptr<ShiftedBlockSolver> q, std::size_t nodes, double a)
      : q_(std::move(q)), nodes_(static_cast<Eigen::Index>(nodes)), a_(a) {}

  void solve(const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const override {
    out.resize(rhs.size());
    q_->solve(ConstBlockMap(rhs.data(), nodes_, 2), BlockMap(out.data(), nodes_, 2));
    // y-rows: y - a q0 = r_y
    out.tail<2>() = rhs.tail<2>() + a_ * out.head<2>();
  }

 private:
  std::unique_ptr<ShiftedBlockSolver> q_;
  Eigen::Index nodes_;
  double a_;
};

}  // namespace

FullSystem::FullSystem(std::shared_ptr<const SpatialOperator> op, FieldPtr field,
                       const MreParams& params)
    : op_(std::move(op)), field_(std::move(field)), params_(params) {
  if (!op_ || !field_) throw ConfigError("full system needs an operator and a flow field");
}

FullSystem assemble_full(std::shared_ptr<const SpatialOperator> op, FieldPtr field,
                         const MreParams& params) {
  return FullSystem(std::move(op), std::move(field), params);
}

void FullSystem::apply_linear(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  const auto n = static_cast<Eigen::Index>(op_->nodes());
  out.resize(x.size());
  op_->apply(ConstBlockMap(x.data(), n, 2), BlockMap(out.data(), n, 2));
  out.tail<2>() = x.head<2>();
}

void FullSystem::forcing(const Eigen::VectorXd& x, double t, Eigen::VectorXd& out) const {
  const auto n = static_cast<Eigen::Index>(op_->nodes());
  out.setZero(x.size());
  const Vec2 y = x.tail<2>();
  const FlowSample s = field_->eval(y, t);
  const Vec2 f = boundary_forcing(x.head<2>(), s, params_);
  op_->add_source(f, BlockMap(out.data(), n, 2));
  out.tail<2>() = s.u;
}

std::unique_ptr<ShiftedSolve> FullSystem::factorize_shifted(double a) const {
  return std::make_unique<FullShifted>(op_->factorize_shifted(a), op_->nodes(), a);
}

Eigen::SparseMatrix<double> FullSystem::linear_matrix() const {
  const Eigen::SparseMatrix<double> as = op_->interleaved();
  const auto m = static_cast<Eigen::Index>(op_->dim());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(as.nonZeros()) + 2);
  for (Eigen::Index k = 0; k < as.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(as, k); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  trip.emplace_back(m, 0, 1.0);
  trip.emplace_back(m + 1, 1, 1.0);
  Eigen::SparseMatrix<double> a(m + 2, m + 2);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Eigen::VectorXd initial_state_relative(const FullSystem& sys, const Vec2& y0, const Vec2& q0) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.size()));
  x.head<2>() = q0;
  x.tail<2>() = y0;
  return x;
}

Eigen::VectorXd initial_state(const FullSystem& sys, const Vec2& y0, const Vec2& v0, double t0) {
  return initial_state_relative(sys, y0, v0 - sys.field().eval(y0, t0).u);
}

}  // namespace mre
