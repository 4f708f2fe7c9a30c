#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mre {

/// Butcher tableau with row-major stage matrix A (s x s).
struct ButcherTableau {
  std::string name;
  int order = 0;
  std::size_t stages = 0;
  std::vector<double> A;
  std::vector<double> b;
  std::vector<double> c;

  double a(std::size_t i, std::size_t j) const { return A[i * stages + j]; }
};

/// Explicit/implicit pair sharing b and c.
struct ImexTableau {
  ButcherTableau explicit_part;
  ButcherTableau implicit_part;
};

/// Six-stage, L-stable, stiffly accurate fourth-order ESDIRK (Kennedy and
/// Carpenter 2016, "ESDIRK4(3)6L[2]SA").
const ButcherTableau& esdirk4();

/// Fourth-order additive pair ARK4(3)6L[2]SA (Kennedy and Carpenter 2003).
const ImexTableau& ark4();

/// Second-order IMEX midpoint pair (Ascher, Ruuth and Spiteri 1997).
const ImexTableau& imex_midpoint();

/// FNV-1a digest over the coefficient bit patterns, used to detect edits to
/// the compiled-in tables.
std::uint64_t tableau_checksum(const ButcherTableau& t);

}  // namespace mre
