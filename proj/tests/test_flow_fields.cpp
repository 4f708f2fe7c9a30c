#include <doctest.h>

#include <cmath>
#include <random>

#include "mre/errors.hpp"
#include "mre/flow_fields.hpp"

using namespace mre;

namespace {

/// Central differences of u in space and time at (y, t).
struct Numeric {
  Mat2 grad;
  Vec2 du_dt;
};

Numeric differentiate(const FlowField& f, const Vec2& y, double t, double h) {
  Numeric n;
  for (int j = 0; j < 2; ++j) {
    Vec2 e = Vec2::Zero();
    e(j) = h;
    n.grad.col(j) = (f.eval(y + e, t).u - f.eval(y - e, t).u) / (2.0 * h);
  }
  n.du_dt = (f.eval(y, t + h).u - f.eval(y, t - h).u) / (2.0 * h);
  return n;
}

void check_derivatives(const FlowField& f, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-scale, scale);
  std::uniform_real_distribution<double> time(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 y(pos(rng), pos(rng));
    const double t = time(rng);
    const FlowSample s = f.eval(y, t);
    const Numeric n = differentiate(f, y, t, 1e-5 * std::max(1.0, scale));
    const double gnorm = std::max(1.0, s.grad_u.norm());
    CHECK((s.grad_u - n.grad).norm() / gnorm < 1e-6);
    const Vec2 md = n.du_dt + s.grad_u * s.u;
    CHECK((s.mat_deriv - md).norm() / std::max(1.0, s.mat_deriv.norm()) < 1e-6);
  }
}

}  // namespace

TEST_CASE("vortex") {
  const VortexField f(1.0);
  const FlowSample s = eval_field(f, Vec2(1.0, 0.0), 3.7);
  CHECK(s.u(0) == doctest::Approx(0.0));
  CHECK(s.u(1) == doctest::Approx(1.0));
  CHECK(s.mat_deriv(0) == doctest::Approx(-1.0));
  CHECK(s.mat_deriv(1) == doctest::Approx(0.0));
  check_derivatives(VortexField(2.3), 1, 2.0);
}

TEST_CASE("quiescent") {
  const QuiescentField f;
  const FlowSample s = f.eval(Vec2(3.0, -2.0), 11.0);
  CHECK(s.u.norm() == 0.0);
  CHECK(s.grad_u.norm() == 0.0);
  CHECK(s.mat_deriv.norm() == 0.0);
}

TEST_CASE("oscillatory") {
  const OscillatoryField f(0.05, 6.0);
  const FlowSample s = f.eval(Vec2(0.4, 0.2), 0.0);
  CHECK(s.u(0) == doctest::Approx(0.05));
  CHECK(s.u(1) == doctest::Approx(0.0));
  CHECK(s.mat_deriv(0) == doctest::Approx(0.0));
  CHECK(s.mat_deriv(1) == doctest::Approx(6.0));
  check_derivatives(f, 2, 1.0);
}

TEST_CASE("bickley derivatives and stream function") {
  const BickleyField f(load_bickley_params(default_bickley_path()));
  check_derivatives(f, 3, 4.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  const double h = 1e-5;
  for (int i = 0; i < 50; ++i) {
    const Vec2 y(pos(rng), pos(rng));
    const double t = 0.37 * i;
    const Vec2 ex(h, 0.0), ey(0.0, h);
    const double dpsi_dx = (f.stream_function(y + ex, t) - f.stream_function(y - ex, t)) / (2 * h);
    const double dpsi_dy = (f.stream_function(y + ey, t) - f.stream_function(y - ey, t)) / (2 * h);
    const Vec2 u = f.eval(y, t).u;
    CHECK(u(0) == doctest::Approx(-dpsi_dy).epsilon(1e-7));
    CHECK(u(1) == doctest::Approx(dpsi_dx).epsilon(1e-7));
  }
}

TEST_CASE("bickley parameter file") {
  const BickleyParams p = load_bickley_params(default_bickley_path());
  CHECK(p.U0 == doctest::Approx(5.4138));
  CHECK(p.k[0] == doctest::Approx(2.0 / 6.371));
  CHECK(p.k[2] == doctest::Approx(6.0 / 6.371));
  CHECK(p.sigma[1] == doctest::Approx(p.k[1] * 0.205 * 5.4138));
  CHECK_THROWS_AS(load_bickley_params("/nonexistent/bickley.json"), ConfigError);
  CHECK_THROWS_AS(parse_bickley_params(R"({"U0": 1.0})"), ConfigError);
}

TEST_CASE("boundary forcing") {
  const MreParams r79 = derive_params(2.0 / 3.0, 0.1);
  SUBCASE("quiescent") {
    const Vec2 f = boundary_forcing(Vec2(0.3, -0.2), QuiescentField().eval(Vec2(1, 1), 0.0), r79);
    CHECK(f.norm() == 0.0);
  }
  SUBCASE("oscillatory at t = 0") {
    const Vec2 f = boundary_forcing(Vec2(0.1, 0.1), OscillatoryField(0.05, 6.0).eval(Vec2(0, 0), 0.0), r79);
    CHECK(f(0) == doctest::Approx(0.0));
    CHECK(f(1) == doctest::Approx((9.0 / 7.0 - 1.0) * 6.0));
  }
  SUBCASE("vortex with R = 1") {
    const MreParams r1 = derive_params(1.0, 0.1);
    const Vec2 f = boundary_forcing(Vec2(1.0, 0.0), VortexField(1.0).eval(Vec2(1, 0), 0.0), r1);
    CHECK(f(0) == doctest::Approx(0.0));
    CHECK(f(1) == doctest::Approx(-1.0));
  }
}
