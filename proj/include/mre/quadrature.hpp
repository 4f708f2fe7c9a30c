#pragma once

#include <functional>

namespace mre {

struct QuadratureSpec {
  double rel_tol = 1e-12;
  /// Split between the finite part and the mapped tail; <= 0 picks 1.
  double split_point = 0.0;
  /// Maximum bisection depth of the adaptive Gauss-Kronrod rule.
  unsigned max_subdivisions = 20;

  /// Throws ConfigError unless rel_tol lies in (1e-14, 1e-3).
  void validate() const;
};

/// Integral of f over [0, inf): adaptive Gauss-Kronrod on [0, K] plus the tail
/// mapped by k = K + s/(1 - s), s in [0, 1). Throws QuadratureError when the
/// error estimate exceeds rel_tol relative to the integral of |f|.
double improper_integral(const std::function<double(double)>& f, const QuadratureSpec& spec = {});

}  // namespace mre
