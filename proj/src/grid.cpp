#include "mre/grid.hpp"

#include <cmath>
#include <string>

#include "mre/errors.hpp"

namespace mre {

PseudoGrid::PseudoGrid(std::size_t N, double c) : N_(N), c_(c), xi_(N), x_(N) {
  for (std::size_t n = 0; n < N; ++n) {
    xi_[n] = static_cast<double>(n) / static_cast<double>(N);
    x_[n] = x_at(static_cast<double>(n));
  }
}

double PseudoGrid::x_at(double s) const {
  // log1p keeps full precision for the nodes clustered near x = 0
  return -c_ * std::log1p(-s / static_cast<double>(N_));
}

double PseudoGrid::psi(std::size_t n) const {
  const double s = static_cast<double>(n);
  return x_at(s + 0.5) - x_at(s - 0.5);
}

double PseudoGrid::zeta(std::size_t n) const {
  const double s = static_cast<double>(n);
  return x_at(s + 0.75) - x_at(s + 0.25);
}

PseudoGrid build_grid(std::size_t N, double c) {
  if (N < kMinGridNodes) {
    throw ConfigError("pseudo-space grid needs N >= " + std::to_string(kMinGridNodes) +
                      " nodes, got " + std::to_string(N));
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw ConfigError("mapping scale c must be positive, got " + std::to_string(c));
  }
  return PseudoGrid(N, c);
}

}  // namespace mre
