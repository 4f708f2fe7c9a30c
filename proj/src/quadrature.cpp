#include "mre/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "mre/errors.hpp"

namespace mre {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 1e-14 && rel_tol < 1e-3)) {
    throw ConfigError("quadrature rel_tol must lie in (1e-14, 1e-3)");
  }
  if (max_subdivisions == 0) throw ConfigError("quadrature needs max_subdivisions >= 1");
}

double improper_integral(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  spec.validate();
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double K = spec.split_point > 0.0 ? spec.split_point : 1.0;

  double err_head = 0.0, l1_head = 0.0;
  const double head = GK::integrate(f, 0.0, K, spec.max_subdivisions, spec.rel_tol, &err_head,
                                    &l1_head);
  auto tail_integrand = [&f, K](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    return f(K + s / one_minus) / (one_minus * one_minus);
  };
  double err_tail = 0.0, l1_tail = 0.0;
  const double tail = GK::integrate(tail_integrand, 0.0, 1.0, spec.max_subdivisions, spec.rel_tol,
                                    &err_tail, &l1_tail);

  const double value = head + tail;
  const double err = err_head + err_tail;
  const double scale = std::max(l1_head + l1_tail, std::numeric_limits<double>::min());
  if (!std::isfinite(value) || err > spec.rel_tol * scale) {
    throw QuadratureError("improper integral did not converge", err);
  }
  return value;
}

}  // namespace mre
