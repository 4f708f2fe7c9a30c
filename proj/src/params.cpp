#include "mre/params.hpp"

#include <cmath>
#include <string>

#include "mre/errors.hpp"

namespace mre {

MreParams derive_params(double beta, double S) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw DomainError("density ratio beta must be finite and >= 0, got " + std::to_string(beta));
  }
  if (!std::isfinite(S) || S <= 0.0) {
    throw DomainError("Stokes number S must be finite and > 0, got " + std::to_string(S));
  }
  const double R = (1.0 + 2.0 * beta) / 3.0;
  const double alpha = 1.0 / (R * S);
  const double gamma = std::sqrt(3.0 / S) / R;
  return MreParams(beta, R, S, alpha, gamma);
}

MreParams params_from_physical(const PhysicalParams& p) {
  const auto check = [](double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
      throw DomainError(std::string("physical parameter ") + name + " must be > 0, got " +
                        std::to_string(value));
    }
  };
  check(p.rho_p, "rho_p");
  check(p.rho_f, "rho_f");
  check(p.a, "a");
  check(p.T, "T");
  check(p.nu, "nu");
  return derive_params(p.rho_p / p.rho_f, p.a * p.a / (3.0 * p.T * p.nu));
}

}  // namespace mre
