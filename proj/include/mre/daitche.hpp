#pragma once

#include <cstddef>
#include <vector>

#include "mre/flow_fields.hpp"
#include "mre/integrators.hpp"
#include "mre/params.hpp"

namespace mre {

/// Quadrature weights for H(t_n) = int_0^{t_n} g(s) (t_n - s)^{-1/2} ds on a
/// uniform grid t_j = j h:
///   H(t_n) ~= sqrt(h) * sum_{j=0..n} w[n][j] g_j.
/// On every subinterval g is replaced by its degree-`order` interpolant on a
/// stencil of order+1 consecutive nodes inside [0, n] (degree n while n <
/// order), which makes the rule exact for polynomials of that degree.
///
/// Rows are built on demand in O(n) from per-subinterval moments tabulated at
/// construction, so the full triangular table is never stored.
class HistoryWeights {
 public:
  int order() const { return order_; }
  std::size_t max_steps() const { return max_n_; }

  /// Row n (length n + 1). Throws DomainError for n > max_steps().
  std::vector<double> row(std::size_t n) const;

  friend HistoryWeights compute_weights(int order, std::size_t n_steps);

 private:
  HistoryWeights(int order, std::size_t max_n);

  /// First stencil node for subinterval [i, i+1] when integrating up to t_n.
  std::size_t stencil_start(std::size_t i, std::size_t n) const;
  const double* moments(std::size_t offset, std::size_t shift) const;

  int order_;
  std::size_t max_n_;
  // moments_[(offset-1)*shifts + shift][m]: integral over the subinterval at
  // distance `offset` from t_n of (t_n - s)^{-1/2} times the m-th Lagrange
  // basis polynomial of a stencil starting `shift` nodes left of it.
  std::vector<double> moments_;
  // short stencils used while n < order: [n][i][m]
  std::vector<std::vector<std::vector<double>>> early_;
};

/// Throws ConfigError unless order is 1, 2 or 3.
HistoryWeights compute_weights(int order, std::size_t n_steps);

/// Direct multistep integration of the Maxey-Riley equation with history
/// term, written in integrated form
///   R (v_{n+1} - v_n) = int G dt - kappa (H_{n+1} - H_n),
///   G = Du/Dt - (v - u)/S,  kappa = sqrt(3/(pi S)),
///   H(t) = int_0^t (v - u)(s) (t - s)^{-1/2} ds,
/// which contains the initial-slip term (v(0) - u(0))/sqrt(t) exactly.
/// Position and G use order-matched Adams-Bashforth; the newest history
/// sample enters linearly and is solved for in closed form. The first
/// `order` steps come from a collocation block on the same interpolant.
///
/// Throws InstabilityError once |v| exceeds 1e8 or turns non-finite.
Trajectory integrate_direct(const FlowField& field, const MreParams& params, const Vec2& y0,
                            const Vec2& v0, double t0, double dt, std::size_t n_steps, int order);

/// Same with precomputed weights (weights.max_steps() >= n_steps).
Trajectory integrate_direct(const FlowField& field, const MreParams& params, const Vec2& y0,
                            const Vec2& v0, double t0, double dt, std::size_t n_steps,
                            const HistoryWeights& weights);

}  // namespace mre
