#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "mre/daitche.hpp"
#include "mre/errors.hpp"
#include "mre/reference.hpp"

using namespace mre;

namespace {

/// int_0^n s^k (n - s)^{-1/2} ds = n^{k+1/2} B(k+1, 1/2)
double kernel_moment(double n, int k) {
  return std::pow(n, k + 0.5) * std::tgamma(k + 1.0) * std::sqrt(M_PI) / std::tgamma(k + 1.5);
}

double weighted_sum(const std::vector<double>& w, int k) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::pow(static_cast<double>(j), k);
  return s;
}

/// u = (0.3, -0.1) everywhere.
class UniformField final : public FlowField {
 public:
  FlowSample eval(const Vec2&, double) const override {
    FlowSample s;
    s.u = Vec2(0.3, -0.1);
    return s;
  }
  std::string name() const override { return "uniform"; }
};

}  // namespace

TEST_CASE("first-order weights for one step") {
  const auto w = compute_weights(1, 4).row(1);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(compute_weights(2, 4).row(0) == std::vector<double>{0.0});
}

TEST_CASE("weights integrate constants exactly") {
  for (int order = 1; order <= 3; ++order) {
    const auto W = compute_weights(order, 500);
    for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 100u, 500u}) {
      const auto w = W.row(n);
      double sum = 0.0;
      for (double v : w) sum += v;
      CHECK(sum == doctest::Approx(2.0 * std::sqrt(static_cast<double>(n))).epsilon(1e-13));
    }
  }
}

TEST_CASE("polynomial exactness up to n = 10^4") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(1, 10000);
  for (int order = 1; order <= 3; ++order) {
    const auto W = compute_weights(order, 10000);
    std::vector<std::size_t> ns = {1, 2, 3, 5, 10000};
    for (int i = 0; i < 20; ++i) ns.push_back(pick(rng));
    for (std::size_t n : ns) {
      const auto w = W.row(n);
      // n + 1 samples determine at most a degree-n polynomial
      const int degree = std::min<int>(order, static_cast<int>(n));
      for (int k = 0; k <= degree; ++k) {
        const double exact = kernel_moment(static_cast<double>(n), k);
        CAPTURE(order);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(std::abs(weighted_sum(w, k) - exact) <= 1e-11 * exact);
      }
    }
  }
}

TEST_CASE("third-order rule on a cubic with a physical step") {
  const double h = 0.05;
  const std::size_t n = 20;
  const double tn = n * h;
  const auto w = compute_weights(3, n).row(n);
  double approx = 0.0;
  for (std::size_t j = 0; j <= n; ++j) approx += w[j] * std::pow(j * h, 3);
  approx *= std::sqrt(h);
  const double exact = std::pow(tn, 3.5) * 6.0 * std::sqrt(M_PI) / std::tgamma(4.5);
  CHECK(std::abs(approx - exact) <= 1e-11 * std::sqrt(h) * std::pow(tn, 3));
}

TEST_CASE("weight table bounds") {
  CHECK_THROWS_AS(compute_weights(0, 10), ConfigError);
  CHECK_THROWS_AS(compute_weights(4, 10), ConfigError);
  const auto W = compute_weights(2, 10);
  CHECK(W.order() == 2);
  CHECK(W.max_steps() == 10);
  CHECK_THROWS_AS(W.row(11), DomainError);
  CHECK_THROWS_AS(integrate_direct(QuiescentField(), derive_params(1.0, 1.0), Vec2::Zero(),
                                   Vec2(0.1, 0.0), 0.0, 0.1, 11, W),
                  ConfigError);
}

TEST_CASE("history grows by one entry per step") {
  for (std::size_t steps : {0u, 1u, 2u, 5u, 64u}) {
    const Trajectory tr = integrate_direct(VortexField(1.0), derive_params(1.5, 0.2), Vec2(1.0, 0.0),
                                           Vec2(0.0, 1.0), 0.0, 0.01, steps, 3);
    CHECK(tr.size() == steps + 1);
    CHECK(tr.positions.size() == steps + 1);
    CHECK(tr.rel_velocity.size() == steps + 1);
  }
}

TEST_CASE("neutrally buoyant particle follows a uniform flow") {
  const UniformField field;
  const Vec2 u(0.3, -0.1);
  const Trajectory tr = integrate_direct(field, derive_params(1.0, 0.4), Vec2(1.0, 2.0), u, 0.0,
                                         0.01, 200, 3);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(tr.rel_velocity[k].norm() < 1e-15);
    CHECK((tr.positions[k] - (Vec2(1.0, 2.0) + tr.times[k] * u)).norm() < 1e-13);
  }
}

TEST_CASE("relaxing particle approaches the closed form") {
  const auto p = derive_params(1.5, 0.1);
  const Vec2 q0(0.1, 0.0);
  const Vec2 exact = quiescent_solution(1.0, p, Vec2::Zero(), q0);
  double prev = 1.0;
  for (std::size_t steps : {128u, 512u, 2048u}) {
    const Trajectory tr = integrate_direct(QuiescentField(), p, Vec2::Zero(), q0, 0.0, 1.0 / steps,
                                           steps, 3);
    const double err = (tr.positions.back() - exact).norm() / exact.norm();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("small particles make the direct scheme unstable") {
  const auto field = std::make_shared<BickleyField>(load_bickley_params(default_bickley_path()));
  CHECK_THROWS_AS(integrate_direct(*field, derive_params(0.0, 0.01), Vec2(0.5, 0.5),
                                   field->eval(Vec2(0.5, 0.5), 0.0).u, 0.0, 1.0 / 32, 32 * 10, 3),
                  InstabilityError);
}
