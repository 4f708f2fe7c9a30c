#include <doctest.h>

#include <cmath>
#include <memory>

#include "mre/errors.hpp"
#include "mre/metrics.hpp"
#include "mre/quadrature.hpp"
#include "mre/reference.hpp"
#include "mre/runner.hpp"

using namespace mre;

namespace {

Problem quiescent_problem(double beta, double S, const Vec2& q0, double T) {
  Problem p;
  p.field = std::make_shared<QuiescentField>();
  p.params = derive_params(beta, S);
  p.q0 = q0;
  p.T = T;
  return p;
}

}  // namespace

TEST_CASE("improper integrals") {
  CHECK(improper_integral([](double k) { return std::exp(-k * k); }) ==
        doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-12));
  CHECK(improper_integral([](double k) { return 1.0 / (1.0 + k * k); }) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  QuadratureSpec spec;
  spec.split_point = 5.0;
  CHECK(improper_integral([](double k) { return std::exp(-k); }, spec) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrature settings") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-15;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.rel_tol = 1e-2;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.rel_tol = 1e-10;
  CHECK_NOTHROW(spec.validate());
  // a non-integrable integrand cannot meet the tolerance
  spec.max_subdivisions = 3;
  CHECK_THROWS_AS(improper_integral([](double k) { return 1.0 / std::sqrt(k); }, spec),
                  QuadratureError);
}

TEST_CASE("quiescent solution limits") {
  const auto p = derive_params(2.0 / 3.0, 0.3);
  const Vec2 y0(0.4, -1.0);
  CHECK(quiescent_solution(0.0, p, y0, Vec2(0.1, 0.2)) == y0);
  CHECK(quiescent_solution(2.0, p, y0, Vec2::Zero()) == y0);
  CHECK_THROWS_AS(quiescent_solution(-1.0, p, y0, Vec2(0.1, 0.0)), DomainError);
  // components are independent and linear in the slip
  const Vec2 a = quiescent_solution(1.3, p, Vec2::Zero(), Vec2(0.1, 0.0));
  const Vec2 b = quiescent_solution(1.3, p, Vec2::Zero(), Vec2(0.0, 0.3));
  CHECK(a(1) == 0.0);
  CHECK(b(1) == doctest::Approx(3.0 * a(0)).epsilon(1e-13));
}

TEST_CASE("quiescent displacement grows monotonically") {
  const auto p = derive_params(1.5, 0.1);
  double prev = 0.0;
  for (double t = 0.1; t <= 5.0; t += 0.1) {
    const double x = quiescent_solution(t, p, Vec2::Zero(), Vec2(0.1, 0.0))(0);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("oscillatory solution limits") {
  const auto p = derive_params(2.0 / 3.0, 0.3);
  const Vec2 y0(0.02, 0.01);
  CHECK((oscillatory_solution(0.0, p, y0, Vec2(0.0, 0.1), 0.05, 6.0) - y0).norm() < 1e-12);
  CHECK_THROWS_AS(oscillatory_solution(1.0, p, y0, Vec2::Zero(), 0.05, 0.0), DomainError);

  SUBCASE("horizontal motion is the relaxing particle plus drift") {
    for (double t : {0.3, 1.0, 2.7}) {
      const Vec2 q0(0.07, 0.1);
      CHECK(oscillatory_solution(t, p, y0, q0, 0.05, 6.0)(0) ==
            doctest::Approx(quiescent_solution(t, p, y0, q0)(0) + 0.05 * t).epsilon(1e-13));
    }
  }
  SUBCASE("neutrally buoyant particle") {
    const auto p1 = derive_params(1.0, 0.3);
    for (double t : {0.5, 2.0}) {
      const Vec2 q0(0.0, 0.1);
      const double expected = y0(1) + (1.0 - std::cos(6.0 * t)) / 6.0 +
                              (quiescent_solution(t, p1, Vec2::Zero(), q0)(1));
      CHECK(oscillatory_solution(t, p1, y0, q0, 0.05, 6.0)(1) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("quiescent closed form against an extrapolated solver") {
  // second-order FD converges at first order for slip data, so one
  // Richardson step removes the leading error
  const Problem prob = quiescent_problem(2.0 / 3.0, 0.3, Vec2(0.1, 0.0), 1.0);
  const double coarse = run_method(prob, parse_method("fd2+imex2"), 1024, 1024).positions.back()(0);
  const double fine = run_method(prob, parse_method("fd2+imex2"), 2048, 2048).positions.back()(0);
  const double exact = quiescent_solution(1.0, prob.params, prob.y0, prob.q0)(0);
  CHECK(std::abs(2.0 * fine - coarse - exact) < 1e-8);
}

TEST_CASE("oscillatory closed form against a fine solver run") {
  Problem prob;
  prob.field = std::make_shared<OscillatoryField>(0.05, 6.0);
  prob.params = derive_params(2.0 / 3.0, 0.3);
  prob.T = 3.0;
  const Vec2 y = run_method(prob, parse_method("fd2+imex2"), 1024, 1024).positions.back();
  CHECK((y - oscillatory_solution(3.0, prob.params, prob.y0, prob.q0, 0.05, 6.0)).norm() < 1e-4);
}

TEST_CASE("exact positions dispatch on the field") {
  Problem prob = quiescent_problem(1.0, 0.5, Vec2(0.1, 0.0), 1.0);
  const std::vector<double> times = {0.0, 0.5, 1.0};
  const auto q = exact_positions(prob, times);
  REQUIRE(q.size() == 3);
  CHECK(q[0] == prob.y0);
  prob.field = std::make_shared<VortexField>(1.0);
  CHECK(exact_positions(prob, times).empty());
  prob.field = std::make_shared<OscillatoryField>(0.05, 6.0);
  CHECK(exact_positions(prob, times).size() == 3);
}

TEST_CASE("positions on the reference time grid") {
  Trajectory ref;
  ref.dt = 0.25;
  for (int k = 0; k <= 8; ++k) {
    ref.times.push_back(k * 0.25);
    ref.positions.emplace_back(k, -k);
  }
  const auto p = positions_at(ref, {0.0, 0.5, 2.0});
  CHECK(p[1] == Vec2(2.0, -2.0));
  CHECK(p[2] == Vec2(8.0, -8.0));
  CHECK_THROWS_AS(positions_at(ref, {0.3}), MetricError);
  CHECK_THROWS_AS(positions_at(ref, {2.5}), MetricError);
}

TEST_CASE("numerical reference and its gate") {
  Problem prob;
  prob.field = std::make_shared<VortexField>(1.0);
  prob.params = derive_params(1.5, 0.2);
  prob.y0 = Vec2(1.0, 0.0);
  prob.T = 1.0;
  ReferenceSpec spec;
  spec.method = "fd4+imex4";
  spec.N = 128;
  spec.steps = 128;
  const Reference ref = reference_trajectory(prob, spec, "final_rel");
  CHECK(ref.trajectory.size() == 129);
  CHECK(ref.self_difference > 0.0);
  CHECK(ref.self_difference < 1e-6);
  CHECK_NOTHROW(check_reference_gate(ref, 200.0 * ref.self_difference));
  CHECK_THROWS_AS(check_reference_gate(ref, 50.0 * ref.self_difference), ConfigError);
}
