#pragma once

namespace mre {

/// Dimensional particle and fluid properties.
struct PhysicalParams {
  double rho_p = 0.0;  ///< particle density
  double rho_f = 0.0;  ///< fluid density
  double a = 0.0;      ///< particle diameter
  double T = 0.0;      ///< flow time scale
  double nu = 0.0;     ///< kinematic viscosity
};

/// Nondimensional Maxey-Riley parameters together with the boundary
/// coefficients of the pseudo-space formulation:
///
///   R = (1 + 2 beta) / 3,   alpha = 1 / (R S),   gamma = sqrt(3 / S) / R.
///
/// Immutable once built; every solver receives this object rather than raw
/// (beta, S) so the derived coefficients are computed in exactly one place.
class MreParams {
 public:
  double beta() const { return beta_; }
  double R() const { return R_; }
  double S() const { return S_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  friend MreParams derive_params(double beta, double S);

 private:
  MreParams(double beta, double R, double S, double alpha, double gamma)
      : beta_(beta), R_(R), S_(S), alpha_(alpha), gamma_(gamma) {}

  double beta_;
  double R_;
  double S_;
  double alpha_;
  double gamma_;
};

/// Throws DomainError unless beta >= 0 and S > 0 (both finite).
MreParams derive_params(double beta, double S);

/// beta = rho_p / rho_f, S = a^2 / (3 T nu). Throws DomainError on
/// non-positive fields.
MreParams params_from_physical(const PhysicalParams& p);

}  // namespace mre
