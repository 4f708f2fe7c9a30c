#pragma once

#include <cstddef>
#include <vector>

namespace mre {

/// Quasi-uniform grid on [0, inf): reference nodes xi_n = n/N, n = 0..N-1,
/// mapped by x(xi) = -c ln(1 - xi).
class PseudoGrid {
 public:
  std::size_t N() const { return N_; }
  double c() const { return c_; }
  /// Uniform reference spacing d = 1/N.
  double d() const { return 1.0 / static_cast<double>(N_); }

  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& x() const { return x_; }

  /// x at a fractional reference index s (xi = s/N); s may be negative.
  double x_at(double s) const;
  /// psi_n = x_{n+1/2} - x_{n-1/2}
  double psi(std::size_t n) const;
  /// zeta_n = x_{n+3/4} - x_{n+1/4}
  double zeta(std::size_t n) const;

  friend PseudoGrid build_grid(std::size_t N, double c);

 private:
  PseudoGrid(std::size_t N, double c);

  std::size_t N_;
  double c_;
  std::vector<double> xi_;
  std::vector<double> x_;
};

/// Smallest grid that still holds the four-node boundary stencil.
inline constexpr std::size_t kMinGridNodes = 4;
/// Smallest grid accepted by the fourth-order operator assembly.
inline constexpr std::size_t kMinFd4Nodes = 8;

/// Throws ConfigError for N < kMinGridNodes or c <= 0.
PseudoGrid build_grid(std::size_t N, double c);

}  // namespace mre
