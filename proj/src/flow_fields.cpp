#include "mre/flow_fields.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "mre/errors.hpp"

namespace mre {

FlowSample QuiescentField::eval(const Vec2&, double) const { return FlowSample{}; }

FlowSample VortexField::eval(const Vec2& y, double) const {
  FlowSample s;
  s.u = omega_ * Vec2(-y(1), y(0));
  s.grad_u << 0.0, -omega_, omega_, 0.0;
  // steady: Du/Dt is the centripetal acceleration
  s.mat_deriv = -omega_ * omega_ * y;
  return s;
}

FlowSample OscillatoryField::eval(const Vec2&, double t) const {
  FlowSample s;
  s.u = Vec2(u1_, std::sin(lambda_ * t));
  s.mat_deriv = Vec2(0.0, lambda_ * std::cos(lambda_ * t));
  return s;
}

double BickleyField::stream_function(const Vec2& y, double t) const {
  const double th = std::tanh(y(1) / p_.L);
  const double sech2 = 1.0 - th * th;
  double modes = 0.0;
  for (int i = 0; i < 3; ++i) {
    modes += p_.A[i] * std::cos(p_.k[i] * y(0) - p_.sigma[i] * t);
  }
  return -p_.U0 * p_.L * th + p_.U0 * p_.L * sech2 * modes;
}

FlowSample BickleyField::eval(const Vec2& y, double t) const {
  const double U0 = p_.U0;
  const double L = p_.L;
  const double th = std::tanh(y(1) / L);
  const double s = 1.0 - th * th;  // sech^2(y/L)

  // C = sum A cos(theta), theta = k x - sigma t, and its partial derivatives
  double C = 0.0, Cx = 0.0, Cxx = 0.0, Ct = 0.0, Cxt = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double theta = p_.k[i] * y(0) - p_.sigma[i] * t;
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    C += p_.A[i] * c;
    Cx -= p_.A[i] * p_.k[i] * sn;
    Cxx -= p_.A[i] * p_.k[i] * p_.k[i] * c;
    Ct += p_.A[i] * p_.sigma[i] * sn;
    Cxt += p_.A[i] * p_.k[i] * p_.sigma[i] * c;
  }

  FlowSample out;
  out.u(0) = U0 * s + 2.0 * U0 * s * th * C;
  out.u(1) = U0 * L * s * Cx;

  const double du_dx = 2.0 * U0 * s * th * Cx;
  const double du_dy = -2.0 * U0 * s * th / L + 2.0 * U0 * C * (s * s - 2.0 * s * th * th) / L;
  const double dv_dx = U0 * L * s * Cxx;
  const double dv_dy = -2.0 * U0 * s * th * Cx;
  out.grad_u << du_dx, du_dy, dv_dx, dv_dy;

  const Vec2 du_dt(2.0 * U0 * s * th * Ct, U0 * L * s * Cxt);
  out.mat_deriv = du_dt + out.grad_u * out.u;
  return out;
}

BickleyParams load_bickley_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open Bickley parameter file " + path);
  }
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_bickley_params(text);
}

BickleyParams parse_bickley_params(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid Bickley parameters: ") + e.what());
  }
  BickleyParams p;
  try {
    p.U0 = j.at("U0").get<double>();
    p.L = j.at("L").get<double>();
    p.A = j.at("A").get<std::array<double, 3>>();
    if (j.contains("k") && j.contains("sigma")) {
      p.k = j.at("k").get<std::array<double, 3>>();
      p.sigma = j.at("sigma").get<std::array<double, 3>>();
    } else {
      const double r0 = j.at("r0").get<double>();
      const double c2 = j.at("c2_over_U0").get<double>() * p.U0;
      const double c3 = j.at("c3_over_U0").get<double>() * p.U0;
      for (int n = 0; n < 3; ++n) {
        p.k[n] = 2.0 * (n + 1) / r0;
      }
      const double c1 = c3 + (std::sqrt(5.0) - 1.0) / 2.0 * (p.k[1] / p.k[0]) * (c2 - c3);
      const std::array<double, 3> c{c1, c2, c3};
      for (int n = 0; n < 3; ++n) {
        p.sigma[n] = p.k[n] * c[n];
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("Bickley parameters: ") + e.what());
  }
  if (!(p.L > 0.0)) {
    throw ConfigError("Bickley length scale L must be positive");
  }
  return p;
}

std::string default_bickley_path() { return std::string(MRE_DATA_DIR) + "/bickley_default.json"; }

Vec2 boundary_forcing(const Vec2& q0, const FlowSample& sample, const MreParams& params) {
  return (1.0 / params.R() - 1.0) * sample.mat_deriv - sample.grad_u * q0;
}

}  // namespace mre
