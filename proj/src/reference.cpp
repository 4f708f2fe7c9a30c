#include "mre/reference.hpp"

#include <cmath>
#include <numbers>

#include "mre/errors.hpp"
#include "mre/metrics.hpp"

namespace mre {

namespace {

double denominator(double k, double alpha, double gamma) {
  const double k2 = k * k;
  return k2 * gamma * gamma + (k2 - alpha) * (k2 - alpha);
}

QuadratureSpec with_split(QuadratureSpec spec, double alpha, double lambda = 0.0) {
  if (spec.split_point <= 0.0) {
    spec.split_point = std::max({1.0, 2.0 * std::sqrt(alpha), 2.0 * std::sqrt(lambda)});
  }
  return spec;
}

/// (2/pi) int gamma (1 - e^{-k^2 t}) / D dk
double relaxation_integral(double t, const MreParams& p, const QuadratureSpec& spec) {
  if (t == 0.0) return 0.0;
  const double alpha = p.alpha();
  const double gamma = p.gamma();
  const double v = improper_integral(
      [=](double k) { return -gamma * std::expm1(-k * k * t) / denominator(k, alpha, gamma); },
      with_split(spec, alpha));
  return 2.0 / std::numbers::pi * v;
}

}  // namespace

Vec2 quiescent_solution(double t, const MreParams& params, const Vec2& y0, const Vec2& q0,
                        const QuadratureSpec& spec) {
  if (!(t >= 0.0)) throw DomainError("closed-form solution needs t >= 0");
  return y0 + relaxation_integral(t, params, spec) * q0;
}

Vec2 oscillatory_solution(double t, const MreParams& params, const Vec2& y0, const Vec2& q0,
                          double u1, double lambda, const QuadratureSpec& spec) {
  if (!(t >= 0.0)) throw DomainError("closed-form solution needs t >= 0");
  if (!(lambda > 0.0)) throw DomainError("oscillation frequency must be positive");
  Vec2 y = quiescent_solution(t, params, y0, q0, spec);
  y(0) += u1 * t;
  y(1) += (1.0 - std::cos(lambda * t)) / lambda;
  const double R = params.R();
  if (R != 1.0 && t > 0.0) {
    const double alpha = params.alpha();
    const double gamma = params.gamma();
    const double lam2 = lambda * lambda;
    const QuadratureSpec s = with_split(spec, alpha, lambda);
    const double cl = std::cos(lambda * t);
    const double sl = std::sin(lambda * t);
    // transient and cosine terms share one integrand to avoid cancellation
    const double i1 = improper_integral(
        [=](double k) {
          const double k2 = k * k;
          return k2 * gamma * (std::exp(-k2 * t) - cl) /
                 (denominator(k, alpha, gamma) * (k2 * k2 + lam2));
        },
        s);
    const double i2 = improper_integral(
        [=](double k) {
          const double k2 = k * k;
          return k2 * k2 * gamma / (denominator(k, alpha, gamma) * (k2 * k2 + lam2));
        },
        s);
    y(1) += 2.0 / std::numbers::pi * (1.0 - R) * lambda / R * (i1 + i2 * sl / lambda);
  }
  return y;
}

std::vector<Vec2> exact_positions(const Problem& problem, const std::vector<double>& times,
                                  const QuadratureSpec& spec) {
  std::vector<Vec2> out;
  if (dynamic_cast<const QuiescentField*>(problem.field.get()) != nullptr) {
    out.reserve(times.size());
    for (double t : times) {
      out.push_back(quiescent_solution(t - problem.t0, problem.params, problem.y0, problem.q0, spec));
    }
  } else if (const auto* osc = dynamic_cast<const OscillatoryField*>(problem.field.get())) {
    if (problem.t0 != 0.0) return out;  // closed form assumes the phase at t = 0
    out.reserve(times.size());
    for (double t : times) {
      out.push_back(oscillatory_solution(t, problem.params, problem.y0, problem.q0, osc->u1(),
                                         osc->lambda(), spec));
    }
  }
  return out;
}

std::vector<Vec2> positions_at(const Trajectory& ref, const std::vector<double>& times) {
  if (ref.times.size() < 2) {
    if (ref.times.size() == 1 && times.size() == 1) return ref.positions;
    throw MetricError("reference trajectory is too short");
  }
  const double t0 = ref.times.front();
  const double dt = ref.dt > 0.0 ? ref.dt : ref.times[1] - ref.times[0];
  std::vector<Vec2> out;
  out.reserve(times.size());
  for (double t : times) {
    const double s = (t - t0) / dt;
    const double k = std::round(s);
    if (std::abs(s - k) > 1e-6 || k < 0.0 || k >= static_cast<double>(ref.times.size())) {
      throw MetricError("time " + std::to_string(t) + " is not on the reference grid");
    }
    out.push_back(ref.positions[static_cast<std::size_t>(k)]);
  }
  return out;
}

Reference reference_trajectory(const Problem& problem, const ReferenceSpec& spec,
                               const std::string& metric) {
  if (spec.N < 2 * kMinFd4Nodes || spec.steps < 2 || spec.steps % 2 != 0) {
    throw ConfigError("reference needs an even step count and N >= 16");
  }
  const Method method = parse_method(spec.method);
  Reference ref;
  ref.method = spec.method;
  ref.trajectory = run_method(problem, method, spec.N, spec.steps, spec.settings);
  const Trajectory half = run_method(problem, method, spec.N / 2, spec.steps / 2, spec.settings);
  ref.self_difference =
      evaluate_metric(metric, half.positions, positions_at(ref.trajectory, half.times)).value;
  return ref;
}

void check_reference_gate(const Reference& ref, double coarsest_error) {
  if (!(ref.self_difference < 0.01 * coarsest_error)) {
    throw ConfigError("reference rejected: self-convergence difference " +
                      std::to_string(ref.self_difference) + " is not below 1% of the coarsest " +
                      "benchmark error " + std::to_string(coarsest_error));
  }
}

}  // namespace mre
