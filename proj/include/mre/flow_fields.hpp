#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>

#include "mre/params.hpp"

namespace mre {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Fluid velocity and its derivatives at one point in space and time.
struct FlowSample {
  Vec2 u = Vec2::Zero();
  /// grad_u(i, j) = d u_i / d y_j
  Mat2 grad_u = Mat2::Zero();
  /// Du/Dt = du/dt + (u . grad) u
  Vec2 mat_deriv = Vec2::Zero();
};

/// Uniform evaluation interface shared by analytic and gridded fields.
/// Implementations are immutable and safe to evaluate concurrently.
class FlowField {
 public:
  virtual ~FlowField() = default;
  virtual FlowSample eval(const Vec2& y, double t) const = 0;
  virtual std::string name() const = 0;
};

using FieldPtr = std::shared_ptr<const FlowField>;

inline FlowSample eval_field(const FlowField& field, const Vec2& y, double t) {
  return field.eval(y, t);
}

class QuiescentField final : public FlowField {
 public:
  FlowSample eval(const Vec2& y, double t) const override;
  std::string name() const override { return "quiescent"; }
};

/// Solid-body rotation u = omega (-y2, y1).
class VortexField final : public FlowField {
 public:
  explicit VortexField(double omega = 1.0) : omega_(omega) {}
  double omega() const { return omega_; }
  FlowSample eval(const Vec2& y, double t) const override;
  std::string name() const override { return "vortex"; }

 private:
  double omega_;
};

/// Spatially homogeneous u = (u1, sin(lambda t)).
class OscillatoryField final : public FlowField {
 public:
  OscillatoryField(double u1 = 0.05, double lambda = 6.0) : u1_(u1), lambda_(lambda) {}
  double u1() const { return u1_; }
  double lambda() const { return lambda_; }
  FlowSample eval(const Vec2& y, double t) const override;
  std::string name() const override { return "oscillatory"; }

 private:
  double u1_;
  double lambda_;
};

struct BickleyParams {
  double U0 = 0.0;
  double L = 0.0;
  std::array<double, 3> A{};
  std::array<double, 3> k{};
  std::array<double, 3> sigma{};
};

/// Meandering jet with stream function
///   Psi = -U0 L tanh(y/L) + sum_i A_i U0 L sech^2(y/L) cos(k_i x - sigma_i t),
/// velocity u = -dPsi/dy, v = dPsi/dx.
class BickleyField final : public FlowField {
 public:
  explicit BickleyField(const BickleyParams& p) : p_(p) {}
  const BickleyParams& params() const { return p_; }
  double stream_function(const Vec2& y, double t) const;
  FlowSample eval(const Vec2& y, double t) const override;
  std::string name() const override { return "bickley"; }

 private:
  BickleyParams p_;
};

/// Loads Bickley parameters from a JSON file. Recognised keys: U0, L, A, and
/// either (k, sigma) directly or (r0, c2_over_U0, c3_over_U0), from which
/// k_n = 2n / r0, c1 = c3 + (sqrt(5) - 1)/2 * (k2 / k1) * (c2 - c3) and
/// sigma_n = k_n c_n are derived.
BickleyParams load_bickley_params(const std::string& path);
BickleyParams parse_bickley_params(const std::string& json_text);

/// Parameter file shipped with the library (data/bickley_default.json).
std::string default_bickley_path();

/// Slip-velocity forcing of the boundary condition:
///   f = (1/R - 1) Du/Dt - (q0 . grad) u.
Vec2 boundary_forcing(const Vec2& q0, const FlowSample& sample, const MreParams& params);

}  // namespace mre
