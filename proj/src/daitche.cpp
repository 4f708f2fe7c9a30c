#include "mre/daitche.hpp"

#include <Eigen/Dense>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "mre/errors.hpp"

namespace mre {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

double lagrange(const std::vector<double>& nodes, std::size_t m, double x) {
  double v = 1.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k != m) v *= (x - nodes[k]) / (nodes[m] - nodes[k]);
  }
  return v;
}

/// int_0^1 (a - r)^{-1/2} l_m(r) dr for every basis polynomial l_m on
/// `nodes` (coordinates relative to the subinterval start); a >= 1.
std::vector<double> kernel_moments(const std::vector<double>& nodes, double a) {
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    if (a == 1.0) {
      // r = 1 - s^2 removes the endpoint singularity
      out[m] = Gauss::integrate(
          [&](double s) { return 2.0 * lagrange(nodes, m, 1.0 - s * s); }, 0.0, 1.0);
    } else {
      out[m] = Gauss::integrate(
          [&](double r) { return lagrange(nodes, m, r) / std::sqrt(a - r); }, 0.0, 1.0);
    }
  }
  return out;
}

std::vector<double> stencil_nodes(std::size_t count, double first) {
  std::vector<double> nodes(count);
  for (std::size_t k = 0; k < count; ++k) nodes[k] = first + static_cast<double>(k);
  return nodes;
}

std::vector<double> adams_bashforth(int order) {
  switch (order) {
    case 1: return {1.0};
    case 2: return {1.5, -0.5};
    default: return {23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0};
  }
}

}  // namespace

HistoryWeights::HistoryWeights(int order, std::size_t max_n) : order_(order), max_n_(max_n) {
  const auto p = static_cast<std::size_t>(order);
  // moments for full stencils, keyed by distance and left shift
  moments_.resize(max_n * p * (p + 1));
  for (std::size_t a = 1; a <= max_n; ++a) {
    for (std::size_t shift = 0; shift < p; ++shift) {
      const auto m = kernel_moments(stencil_nodes(p + 1, -static_cast<double>(shift)),
                                    static_cast<double>(a));
      std::copy(m.begin(), m.end(), moments_.begin() + static_cast<std::ptrdiff_t>(((a - 1) * p + shift) * (p + 1)));
    }
  }
  // rows shorter than the stencil use degree n on all nodes 0..n
  early_.resize(std::min(p, max_n + 1));
  for (std::size_t n = 1; n < early_.size(); ++n) {
    early_[n].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      early_[n][i] = kernel_moments(stencil_nodes(n + 1, -static_cast<double>(i)),
                                    static_cast<double>(n - i));
    }
  }
}

std::size_t HistoryWeights::stencil_start(std::size_t i, std::size_t n) const {
  const auto p = static_cast<std::ptrdiff_t>(order_);
  std::ptrdiff_t s = static_cast<std::ptrdiff_t>(i) - (p - 1) / 2;
  s = std::clamp<std::ptrdiff_t>(s, 0, static_cast<std::ptrdiff_t>(n) - p);
  return static_cast<std::size_t>(s);
}

const double* HistoryWeights::moments(std::size_t offset, std::size_t shift) const {
  const auto p = static_cast<std::size_t>(order_);
  return moments_.data() + ((offset - 1) * p + shift) * (p + 1);
}

std::vector<double> HistoryWeights::row(std::size_t n) const {
  if (n > max_n_) {
    throw DomainError("history weight row " + std::to_string(n) + " exceeds table size " +
                      std::to_string(max_n_));
  }
  std::vector<double> w(n + 1, 0.0);
  const auto p = static_cast<std::size_t>(order_);
  if (n < p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m <= n; ++m) w[m] += early_[n][i][m];
    }
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = stencil_start(i, n);
    const double* mom = moments(n - i, i - start);
    for (std::size_t m = 0; m <= p; ++m) w[start + m] += mom[m];
  }
  return w;
}

HistoryWeights compute_weights(int order, std::size_t n_steps) {
  if (order < 1 || order > 3) {
    throw ConfigError("history quadrature order must be 1, 2 or 3, got " + std::to_string(order));
  }
  return HistoryWeights(order, n_steps);
}

Trajectory integrate_direct(const FlowField& field, const MreParams& params, const Vec2& y0,
                            const Vec2& v0, double t0, double dt, std::size_t n_steps, int order) {
  const HistoryWeights weights = compute_weights(order, n_steps);
  return integrate_direct(field, params, y0, v0, t0, dt, n_steps, weights);
}

Trajectory integrate_direct(const FlowField& field, const MreParams& params, const Vec2& y0,
                            const Vec2& v0, double t0, double dt, std::size_t n_steps,
                            const HistoryWeights& weights) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (weights.max_steps() < n_steps) throw ConfigError("history weight table is too short");

  const int p = weights.order();
  const double R = params.R();
  const double S = params.S();
  const double h = dt;
  const double sh = std::sqrt(h);
  const double kappa = std::sqrt(3.0 / (std::numbers::pi * S));

  std::vector<Vec2> y, v, w, G;
  y.reserve(n_steps + 1);
  v.reserve(n_steps + 1);
  w.reserve(n_steps + 1);
  G.reserve(n_steps + 1);

  Trajectory tr;
  tr.scheme = "daitche" + std::to_string(p);
  tr.N = n_steps;
  tr.dt = dt;
  tr.times.reserve(n_steps + 1);

  auto record = [&](std::size_t k, const FlowSample& s, const Vec2& yk, const Vec2& vk) {
    if (!vk.allFinite() || !yk.allFinite() || vk.norm() > kDivergenceBound) {
      throw InstabilityError("direct integration diverged", k);
    }
    y.push_back(yk);
    v.push_back(vk);
    w.push_back(vk - s.u);
    G.push_back(s.mat_deriv - (vk - s.u) / S);
    tr.times.push_back(t0 + static_cast<double>(k) * h);
    tr.positions.push_back(yk);
    tr.rel_velocity.push_back(vk - s.u);
  };

  const auto start = std::chrono::steady_clock::now();
  record(0, field.eval(y0, t0), y0, v0);

  // collocation block on nodes 0..m in the basis tau^{i/2}, i = 0..m, which
  // carries the sqrt(t) behaviour of an initial slip exactly
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(p), n_steps);
  Vec2 H = Vec2::Zero();
  if (m > 0) {
    const auto mi = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd V(mi + 1, mi + 1);
    for (Eigen::Index k = 0; k <= mi; ++k) {
      for (Eigen::Index i = 0; i <= mi; ++i) {
        V(k, i) = (i == 0) ? 1.0 : std::pow(static_cast<double>(k), 0.5 * static_cast<double>(i));
      }
    }
    // cardinal functions L_j = sum_i C(i, j) tau^{i/2}
    const Eigen::MatrixXd C = V.inverse();
    Eigen::MatrixXd Wint = Eigen::MatrixXd::Zero(mi + 1, mi + 1);
    Eigen::MatrixXd Hist = Eigen::MatrixXd::Zero(mi + 1, mi + 1);
    for (Eigen::Index k = 1; k <= mi; ++k) {
      const double kd = static_cast<double>(k);
      for (Eigen::Index i = 0; i <= mi; ++i) {
        const double e = 0.5 * static_cast<double>(i);
        // int_0^k tau^e dtau and int_0^k tau^e (k - tau)^{-1/2} dtau
        const double mom = std::pow(kd, e + 1.0) / (e + 1.0);
        const double hist = std::pow(kd, e + 0.5) * std::beta(e + 1.0, 0.5);
        Wint.row(k) += mom * C.row(i);
        Hist.row(k) += hist * C.row(i);
      }
    }
    Eigen::MatrixXd lhs = R * Eigen::MatrixXd::Identity(mi, mi) +
                          (h / S) * Wint.block(1, 1, mi, mi) + kappa * sh * Hist.block(1, 1, mi, mi);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);

    std::vector<Vec2> ys(m + 1, y0), vs(m + 1, v0);
    std::vector<FlowSample> samples(m + 1);
    samples[0] = field.eval(y0, t0);
    for (std::size_t k = 1; k <= m; ++k) ys[k] = y0 + static_cast<double>(k) * h * v0;
    for (int iter = 0; iter < 200; ++iter) {
      for (std::size_t k = 1; k <= m; ++k) {
        samples[k] = field.eval(ys[k], t0 + static_cast<double>(k) * h);
      }
      for (int c = 0; c < 2; ++c) {
        Eigen::VectorXd rhs(mi);
        for (std::size_t k = 1; k <= m; ++k) {
          double r = R * v0(c);
          for (std::size_t j = 0; j <= m; ++j) {
            r += h * Wint(k, j) * (samples[j].mat_deriv(c) + samples[j].u(c) / S);
            r += kappa * sh * Hist(k, j) * samples[j].u(c);
          }
          r -= (h * Wint(k, 0) / S + kappa * sh * Hist(k, 0)) * v0(c);
          rhs(static_cast<Eigen::Index>(k - 1)) = r;
        }
        const Eigen::VectorXd sol = lu.solve(rhs);
        for (std::size_t k = 1; k <= m; ++k) vs[k](c) = sol(static_cast<Eigen::Index>(k - 1));
      }
      double change = 0.0;
      for (std::size_t k = 1; k <= m; ++k) {
        Vec2 yk = y0;
        for (std::size_t j = 0; j <= m; ++j) yk += h * Wint(k, j) * vs[j];
        change = std::max(change, (yk - ys[k]).norm() / (1.0 + yk.norm()));
        ys[k] = yk;
      }
      if (!(change > 1e-15)) break;
    }
    for (std::size_t k = 1; k <= m; ++k) {
      record(k, field.eval(ys[k], t0 + static_cast<double>(k) * h), ys[k], vs[k]);
    }
    for (std::size_t j = 0; j <= m; ++j) H += sh * Hist(mi, static_cast<Eigen::Index>(j)) * w[j];
  }

  auto history = [&](const std::vector<double>& row, std::size_t upto) {
    Vec2 s = Vec2::Zero();
    for (std::size_t j = 0; j < upto; ++j) s += row[j] * w[j];
    return Vec2(sh * s);
  };

  const auto ab = adams_bashforth(p);
  for (std::size_t n = m; n < n_steps; ++n) {
    const double t1 = t0 + static_cast<double>(n + 1) * h;
    Vec2 y1 = y[n];
    Vec2 g_int = Vec2::Zero();
    for (std::size_t i = 0; i < ab.size(); ++i) {
      y1 += h * ab[i] * v[n - i];
      g_int += h * ab[i] * G[n - i];
    }
    const FlowSample s1 = field.eval(y1, t1);
    const std::vector<double> row = weights.row(n + 1);
    const Vec2 h_part = history(row, n + 1);
    const double w_new = sh * row[n + 1];
    const Vec2 v1 = (R * v[n] + g_int - kappa * (h_part - w_new * s1.u - H)) / (R + kappa * w_new);
    record(n + 1, s1, y1, v1);
    H = h_part + w_new * w.back();
  }
  tr.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

}  // namespace mre
