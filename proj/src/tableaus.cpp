#include "mre/tableaus.hpp"

#include <cmath>
#include <cstring>

namespace mre {

namespace {

ButcherTableau make_esdirk4() {
  const double s2 = std::sqrt(2.0);
  ButcherTableau t;
  t.name = "ESDIRK4(3)6L[2]SA";
  t.order = 4;
  t.stages = 6;
  t.A.assign(36, 0.0);
  t.c = {0.0, 0.5, (2.0 - s2) / 4.0, 5.0 / 8.0, 26.0 / 25.0, 1.0};
  t.b = {(1181.0 - 987.0 * s2) / 13782.0,
         (1181.0 - 987.0 * s2) / 13782.0,
         47.0 * (-267.0 + 1783.0 * s2) / 273343.0,
         -16.0 * (-22922.0 + 3525.0 * s2) / 571953.0,
         -15625.0 * (97.0 + 376.0 * s2) / 90749876.0,
         0.25};
  auto set = [&t](std::size_t i, std::size_t j, double v) { t.A[i * 6 + j] = v; };
  set(1, 1, 0.25);
  set(2, 1, (1.0 - s2) / 8.0);
  set(2, 2, 0.25);
  set(3, 1, (5.0 - 7.0 * s2) / 64.0);
  set(3, 2, 7.0 * (1.0 + s2) / 32.0);
  set(3, 3, 0.25);
  set(4, 1, -(13796.0 + 54539.0 * s2) / 125000.0);
  set(4, 2, (506605.0 + 132109.0 * s2) / 437500.0);
  set(4, 3, 166.0 * (-97.0 + 376.0 * s2) / 109375.0);
  set(4, 4, 0.25);
  for (std::size_t j = 1; j < 6; ++j) set(5, j, t.b[j]);
  // first column from the row-sum condition
  for (std::size_t i = 1; i < 5; ++i) {
    double sum = 0.0;
    for (std::size_t j = 1; j < 6; ++j) sum += t.A[i * 6 + j];
    set(i, 0, t.c[i] - sum);
  }
  set(5, 0, t.b[0]);
  return t;
}

ImexTableau make_ark4() {
  ImexTableau p;
  const std::vector<double> b = {82889.0 / 524892.0,  0.0,  15625.0 / 83664.0,
                                 69875.0 / 102672.0, -2260.0 / 8211.0, 0.25};
  const std::vector<double> c = {0.0, 0.5, 83.0 / 250.0, 31.0 / 50.0, 17.0 / 20.0, 1.0};

  ButcherTableau& im = p.implicit_part;
  im.name = "ARK4(3)6L[2]SA-ESDIRK";
  im.order = 4;
  im.stages = 6;
  im.A.assign(36, 0.0);
  im.b = b;
  im.c = c;
  auto si = [&im](std::size_t i, std::size_t j, double v) { im.A[i * 6 + j] = v; };
  si(1, 0, 0.25);
  si(2, 0, 8611.0 / 62500.0);
  si(2, 1, -1743.0 / 31250.0);
  si(3, 0, 5012029.0 / 34652500.0);
  si(3, 1, -654441.0 / 2922500.0);
  si(3, 2, 174375.0 / 388108.0);
  si(4, 0, 15267082809.0 / 155376265600.0);
  si(4, 1, -71443401.0 / 120774400.0);
  si(4, 2, 730878875.0 / 902184768.0);
  si(4, 3, 2285395.0 / 8070912.0);
  for (std::size_t j = 0; j < 5; ++j) si(5, j, b[j]);
  for (std::size_t i = 1; i < 6; ++i) si(i, i, 0.25);

  ButcherTableau& ex = p.explicit_part;
  ex.name = "ARK4(3)6L[2]SA-ERK";
  ex.order = 4;
  ex.stages = 6;
  ex.A.assign(36, 0.0);
  ex.b = b;
  ex.c = c;
  auto se = [&ex](std::size_t i, std::size_t j, double v) { ex.A[i * 6 + j] = v; };
  se(1, 0, 0.5);
  se(2, 0, 13861.0 / 62500.0);
  se(2, 1, 6889.0 / 62500.0);
  se(3, 0, -116923316275.0 / 2393684061468.0);
  se(3, 1, -2731218467317.0 / 15368042101831.0);
  se(3, 2, 9408046702089.0 / 11113171139209.0);
  se(4, 0, -451086348788.0 / 2902428689909.0);
  se(4, 1, -2682348792572.0 / 7519795681897.0);
  se(4, 2, 12662868775082.0 / 11960479115383.0);
  se(4, 3, 3355817975965.0 / 11060851509271.0);
  se(5, 0, 647845179188.0 / 3216320057751.0);
  se(5, 1, 73281519250.0 / 8382639484533.0);
  se(5, 2, 552539513391.0 / 3454668386233.0);
  se(5, 3, 3354512671639.0 / 8306763924573.0);
  se(5, 4, 4040.0 / 17871.0);
  return p;
}

ImexTableau make_midpoint() {
  ImexTableau p;
  ButcherTableau& ex = p.explicit_part;
  ex.name = "IMEX-midpoint-ERK";
  ex.order = 2;
  ex.stages = 2;
  ex.A = {0.0, 0.0, 0.5, 0.0};
  ex.b = {0.0, 1.0};
  ex.c = {0.0, 0.5};
  ButcherTableau& im = p.implicit_part;
  im.name = "IMEX-midpoint-DIRK";
  im.order = 2;
  im.stages = 2;
  im.A = {0.0, 0.0, 0.0, 0.5};
  im.b = {0.0, 1.0};
  im.c = {0.0, 0.5};
  return p;
}

void fnv(std::uint64_t& h, double v) {
  unsigned char bytes[sizeof(double)];
  std::memcpy(bytes, &v, sizeof(double));
  for (unsigned char byte : bytes) {
    h ^= byte;
    h *= 1099511628211ull;
  }
}

}  // namespace

const ButcherTableau& esdirk4() {
  static const ButcherTableau t = make_esdirk4();
  return t;
}

const ImexTableau& ark4() {
  static const ImexTableau t = make_ark4();
  return t;
}

const ImexTableau& imex_midpoint() {
  static const ImexTableau t = make_midpoint();
  return t;
}

std::uint64_t tableau_checksum(const ButcherTableau& t) {
  std::uint64_t h = 14695981039346656037ull;
  for (double v : t.A) fnv(h, v);
  for (double v : t.b) fnv(h, v);
  for (double v : t.c) fnv(h, v);
  return h;
}

}  // namespace mre
