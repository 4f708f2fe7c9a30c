// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mre/benchmark.hpp"
#include "mre/daitche.hpp"
#include "mre/errors.hpp"
#include "mre/grid.hpp"
#include "mre/gridded_field.hpp"
#include "mre/integrators.hpp"
#include "mre/spatial_operator.hpp"
#include "oracles.hpp"

using namespace mre;

namespace {

/// Collects indented detail lines and the verdict of one criterion.
class Report {
 public:
  void note(const std::string& line) { lines_.push_back(line); }
  void check(bool ok, const std::string& line) {
    note(std::string(ok ? "ok   " : "FAIL ") + line);
    pass_ = pass_ && ok;
  }
  bool passed() const { return pass_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
  bool pass_ = true;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double beta_for(double R) { return (3.0 * R - 1.0) / 2.0; }

FieldPtr bickley() { return std::make_shared<BickleyField>(load_bickley_params(default_bickley_path())); }

BenchmarkConfig benchmark(FieldPtr field, double R, double S, const Vec2& q0,
                          std::vector<std::string> schemes) {
  BenchmarkConfig cfg;
  cfg.problem.field = std::move(field);
  cfg.problem.params = derive_params(beta_for(R), S);
  cfg.problem.y0 = Vec2::Zero();
  cfg.problem.q0 = q0;
  cfg.problem.t0 = 0.0;
  cfg.problem.T = 1.0;
  cfg.schemes = std::move(schemes);
  return cfg;
}

std::string error_row(const SchemeConvergence& s) {
  std::string out;
  for (const auto& p : s.points) out += p.failed ? " unstable" : fmt(" %.3e", p.error);
  return out;
}

double order_of(const ConvergenceReport& rep, const std::string& scheme) {
  const auto& s = rep.at(scheme);
  return s.has_order ? s.order : std::nan("");
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

std::string r_label(double R) {
  if (std::abs(R - 7.0 / 9.0) < 1e-12) return "7/9";
  if (std::abs(R - 4.0 / 3.0) < 1e-12) return "4/3";
  if (std::abs(R - 1.0 / 3.0) < 1e-12) return "1/3";
  return fmt("%g", R);
}

// 1 ---------------------------------------------------------------------------

void boundary_coefficients(Report& r) {
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = std::pow(10.0, u(rng));
    const double gamma = std::pow(10.0, u(rng));
    const double c = std::pow(10.0, 0.5 * u(rng));
    const double d = std::pow(10.0, -1.0 - std::abs(u(rng)));
    const auto k = fd4_boundary_coefficients(alpha, gamma, c, d);
    const auto solved = oracle::boundary_coefficients(alpha, gamma, c, d);
    const double closed[5] = {-2.0 * c / (3.0 * gamma), (12.0 * alpha * d * c - 17.0 * gamma) / (18.0 * gamma),
                              0.5, 0.5, -1.0 / 18.0};
    const double got[5] = {k.b0_hat, k.b0, k.b1, k.b2, k.b3};
    for (int j = 0; j < 5; ++j) {
      const double scale = std::max(1.0, std::abs(closed[j]));
      worst = std::max(worst, std::abs(got[j] - closed[j]) / scale);
      worst = std::max(worst, std::abs(solved(j) - closed[j]) / scale);
    }
  }
  r.check(worst <= 1e-13, fmt("20 random (alpha, gamma, c, d): max deviation %.2e (tol 1e-13)", worst));

  // the assembled first rows carry the same coefficients
  const std::size_t N = 16;
  const double c = 3.0;
  const auto p = derive_params(0.9, 0.2);
  const auto blk = fd4_blocks(build_grid(N, c), p);
  const auto k = fd4_boundary_coefficients(p.alpha(), p.gamma(), c, 1.0 / N);
  const double d = 1.0 / N;
  const Eigen::Vector4d expected(k.b0 / d, k.b1 / d, k.b2 / d, k.b3 / d);
  const double row_err = (blk.B1.row(0).head<4>().transpose() - expected).norm() / expected.norm();
  r.check(row_err <= 1e-13 && std::abs(blk.source_scale - k.b0_hat) <= 1e-13 * std::abs(k.b0_hat),
          fmt("assembled boundary row, N = 16: relative deviation %.2e", row_err));
}

// 2 ---------------------------------------------------------------------------

void fd4_oracle(Report& r) {
  for (std::size_t N : {8u, 16u, 32u}) {
    const double c = 10.0;
    const auto p = derive_params(2.0 / 3.0, 0.1);
    const auto op = assemble_fd4(build_grid(N, c), p);
    const auto ref = oracle::fd4_dense(N, c, p);
    const double err = (op.interleaved_dense() - ref.A).norm() / ref.A.norm();
    const double src = (op.interleaved_source() - ref.V).norm() / ref.V.norm();
    r.check(err <= 1e-10 && src <= 1e-10,
            fmt("N = %2zu: operator %.2e, source %.2e (relative Frobenius, tol 1e-10)", N, err, src));
  }
}

// 3 ---------------------------------------------------------------------------

void fd2_structure(Report& r) {
  const auto p = derive_params(1.0, 1.0 / 3.0);
  const auto op = assemble_fd2(build_grid(8, 2.0), p);
  const Eigen::MatrixXd A = op.interleaved_dense();
  bool pattern = true;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const auto off = std::abs(i - j);
      if (off != 0 && off != 2 && A(i, j) != 0.0) pattern = false;
    }
  }
  r.check(pattern, "pentadiagonal pattern with empty first off-diagonals");

  double worst_sum = 0.0;
  for (std::size_t N : {8u, 64u, 1024u}) {
    const Eigen::MatrixXd S = assemble_fd2(build_grid(N, 10.0), p).scalar_matrix();
    for (Eigen::Index i = 1; i + 1 < S.rows(); ++i) {
      worst_sum = std::max(worst_sum, std::abs(S(i, i - 1) + S(i, i) + S(i, i + 1)) / std::abs(S(i, i)));
    }
  }
  r.check(worst_sum <= 1e-14, fmt("interior row sums, N in {8, 64, 1024}: %.2e (tol 1e-14)", worst_sum));

  const Eigen::MatrixXd ref = oracle::fd2_dense(8, 2.0, p);
  const double err = (A - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
  r.check(err <= 1e-14, fmt("N = 8 entries against the expanded formulas: %.2e", err));
}

// 4 ---------------------------------------------------------------------------

double scalar_order(const oracle::ScalarSplit& prob, Scheme scheme, double T) {
  const std::vector<double> dts = {0.1, 0.05, 0.025, 0.0125};
  std::vector<double> errs;
  for (double dt : dts) {
    StepperConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = dt;
    cfg.newton_tol = 1e-13;
    Stepper st(prob, cfg);
    Eigen::VectorXd y(1);
    y(0) = 1.0;
    const auto n = static_cast<int>(std::lround(T / dt));
    for (int k = 0; k < n; ++k) y = st.step(y, k * dt);
    errs.push_back(std::abs(y(0) - prob.exact(1.0, T)));
  }
  return oracle::slope(dts, errs);
}

void stepper_orders(Report& r) {
  const std::pair<Scheme, double> schemes[] = {
      {Scheme::Trapezoidal, 2.0}, {Scheme::Imex2, 2.0}, {Scheme::Imex4, 4.0}, {Scheme::Dirk4, 4.0}};
  const oracle::ScalarSplit dahlquist(-1.0, 0.0), split(-5.0, 1.0);
  for (const auto& [s, expected] : schemes) {
    const double a = scalar_order(dahlquist, s, 1.0);
    const double b = scalar_order(split, s, 2.0);
    r.check(std::abs(a - expected) <= 0.1 && std::abs(b - expected) <= 0.1,
            fmt("%-11s Dahlquist %.3f, split %.3f (expected %.0f +- 0.1)", scheme_name(s).c_str(), a, b,
                expected));
  }
}

// 5 ---------------------------------------------------------------------------

void quiescent(Report& r) {
  for (double R : {7.0 / 9.0, 1.0, 4.0 / 3.0}) {
    BenchmarkConfig cfg = benchmark(std::make_shared<QuiescentField>(), R, 0.1, Vec2(0.1, 0.0),
                                    {"fd2+imex2", "fd4+imex4", "daitche3"});
    const auto rep = run_convergence(cfg).report;
    const double o2 = order_of(rep, "fd2+imex2"), o4 = order_of(rep, "fd4+imex4"),
                 od = order_of(rep, "daitche3");
    r.note("R = " + r_label(R) + ", max_rel errors over N = 32..512");
    for (const auto& s : rep.schemes) r.note("  " + s.scheme + ":" + error_row(s));
    r.check(std::abs(o2 - 1.0) <= 0.3, fmt("  FD2 order %.2f (1.0 +- 0.3)", o2));
    r.check(o4 <= 1.0, fmt("  FD4 order %.2f (<= 1.0)", o4));
    r.check(in_band(od, 1.0, 2.0), fmt("  Daitche3 order %.2f (in [1.0, 2.0])", od));
    bool better = true;
    const auto& fd2 = rep.at("fd2+imex2").points;
    const auto& dt3 = rep.at("daitche3").points;
    for (std::size_t i = 0; i < fd2.size(); ++i) better = better && dt3[i].error < fd2[i].error;
    r.check(better, "  Daitche3 more accurate than FD2 at every N");
  }
}

// 6 ---------------------------------------------------------------------------

void oscillatory(Report& r) {
  const auto field = std::make_shared<OscillatoryField>(0.05, 6.0);
  for (const Vec2& q0 : {Vec2(0.0, 0.0), Vec2(0.0, 0.1)}) {
    const bool slip = q0.norm() > 0.0;
    for (double R : {7.0 / 9.0, 1.0, 4.0 / 3.0}) {
      BenchmarkConfig cfg = benchmark(field, R, 0.1, q0, {"fd2+imex2", "fd4+imex4"});
      const auto rep = run_convergence(cfg).report;
      cfg.metric = "final_rel";
      const auto fin = run_convergence(cfg).report;
      const double o2 = order_of(rep, "fd2+imex2"), o4 = order_of(rep, "fd4+imex4");
      const std::string tag = std::string(slip ? "slip q0 = (0, 0.1)" : "zero slip") + ", R = " + r_label(R);
      if (slip) {
        r.check(std::abs(o2 - 1.0) <= 0.3, fmt("%s: FD2 order %.2f (1.0 +- 0.3)", tag.c_str(), o2));
        r.check(in_band(o4, 0.5, 1.0), fmt("%s: FD4 order %.2f (0.5 to 1.0)", tag.c_str(), o4));
      } else {
        r.check(std::abs(o2 - 2.0) <= 0.3, fmt("%s: FD2 order %.2f (2.0 +- 0.3)", tag.c_str(), o2));
        if (R == 1.0) {
          r.check(o4 >= 3.0, fmt("%s: FD4 order %.2f (>= 3.0)", tag.c_str(), o4));
        } else {
          r.note(fmt("     %s: FD4 order %.2f (not asserted)", tag.c_str(), o4));
        }
      }
      r.note(fmt("       final-time relative error orders: FD2 %.2f, FD4 %.2f",
                 order_of(fin, "fd2+imex2"), order_of(fin, "fd4+imex4")));
    }
  }
}

// 7, 8 ------------------------------------------------------------------------

void print_table(Report& r, const ConvergenceRun& run) {
  r.note(fmt("reference %s, self-difference %.2e", run.source.reference->method.c_str(),
             run.source.reference->self_difference));
  for (const auto& s : run.report.schemes) r.note("  " + s.scheme + ":" + error_row(s));
}

void bickley_zero_slip(Report& r) {
  BenchmarkConfig cfg =
      benchmark(bickley(), 4.0 / 3.0, 0.1, Vec2::Zero(), {"fd2+trap", "fd2+imex2", "daitche3", "fd4+imex4"});
  cfg.reference.method = "fd4+imex4";
  cfg.reference.N = 2048;
  cfg.reference.steps = 2048;
  const auto run = run_convergence(cfg);
  print_table(r, run);
  const std::pair<const char*, double> expected[] = {
      {"fd2+trap", 2.0}, {"fd2+imex2", 2.0}, {"daitche3", 2.8}, {"fd4+imex4", 3.2}};
  for (const auto& [name, target] : expected) {
    const double tol = target < 2.5 ? 0.3 : 0.4;
    const double o = order_of(run.report, name);
    r.check(std::abs(o - target) <= tol, fmt("%-9s order %.2f (%.1f +- %.1f)", name, o, target, tol));
  }

  // insensitivity to the Newton tolerance at the finest ladder point
  const Method m = parse_method("fd2+trap");
  SolverSettings tight;
  tight.newton_tol = 1e-12;
  const Trajectory base = run_method(cfg.problem, m, 512, 512, tight);
  const double err = run.report.at("fd2+trap").points.back().error;
  for (double tol : {1e-8, 1e-10}) {
    SolverSettings s;
    s.newton_tol = tol;
    const double diff = error_final_rel_l2(run_method(cfg.problem, m, 512, 512, s), base).value;
    r.note(fmt("     Newton tolerance %.0e: FD2+Trap N = 512 moves by %.2e (error %.2e)", tol, diff, err));
  }
}

void bickley_slip(Report& r) {
  BenchmarkConfig cfg =
      benchmark(bickley(), 4.0 / 3.0, 0.1, Vec2(0.5414, 0.0), {"fd2+imex2", "fd4+imex4", "daitche3"});
  cfg.reference.method = "fd4+imex4";
  cfg.reference.N = 2048;
  cfg.reference.steps = 2048;
  try {
    run_convergence(cfg);
    r.note("fd4+imex4 N = 2048 reference accepted");
  } catch (const ConfigError& e) {
    r.note(std::string("fd4+imex4 N = 2048 reference: ") + e.what());
  }
  cfg.reference.method = "daitche3";
  cfg.reference.N = 16384;
  cfg.reference.steps = 16384;
  const auto run = run_convergence(cfg);
  print_table(r, run);
  const std::tuple<const char*, double, double> expected[] = {
      {"fd2+imex2", 1.0, 0.3}, {"fd4+imex4", 0.5, 0.3}, {"daitche3", 1.3, 0.4}};
  for (const auto& [name, target, tol] : expected) {
    const double o = order_of(run.report, name);
    r.check(std::abs(o - target) <= tol, fmt("%-9s order %.2f (%.1f +- %.1f)", name, o, target, tol));
  }
}

// 9 ---------------------------------------------------------------------------

void instability(Report& r) {
  Problem prob = benchmark(bickley(), 1.0 / 3.0, 0.01, Vec2::Zero(), {}).problem;
  std::string daitche, fd2;
  bool raised = false, completes = true;
  for (std::size_t N : {32u, 64u, 128u, 256u, 512u}) {
    try {
      run_method(prob, parse_method("daitche3"), N, N);
      daitche += fmt(" %zu:ok", N);
    } catch (const InstabilityError&) {
      raised = true;
      daitche += fmt(" %zu:unstable", N);
    }
    try {
      const Trajectory tr = run_method(prob, parse_method("fd2+imex2"), N, N);
      const bool finite = tr.positions.back().allFinite();
      completes = completes && finite;
      fd2 += finite ? fmt(" %zu:ok", N) : fmt(" %zu:non-finite", N);
    } catch (const Error& e) {
      completes = false;
      fd2 += fmt(" %zu:%s", N, e.what());
    }
  }
  r.check(raised, "Daitche3 raises the instability error:" + daitche);
  r.check(completes, "FD2+IMEX2 completes:" + fd2);
}

// 10 --------------------------------------------------------------------------

double kernel_moment(double n, int k) {
  return std::pow(n, k + 0.5) * std::tgamma(k + 1.0) * std::sqrt(M_PI) / std::tgamma(k + 1.5);
}

void weights(Report& r) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> pick(4, 10000);
  const double h = 0.01;
  for (int order = 1; order <= 3; ++order) {
    const auto W = compute_weights(order, 10000);
    std::vector<std::size_t> ns = {1, 2, 3, 4, 5, 10, 100, 1000, 10000};
    for (int i = 0; i < 20; ++i) ns.push_back(pick(rng));
    double worst = 0.0, worst_sum = 0.0;
    for (std::size_t n : ns) {
      const auto w = W.row(n);
      const int degree = std::min<int>(order, static_cast<int>(n));
      for (int k = 0; k <= degree; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::pow(static_cast<double>(j), k);
        const double exact = kernel_moment(static_cast<double>(n), k);
        worst = std::max(worst, std::abs(s - exact) / exact);
      }
      double sum = 0.0;
      for (double v : w) sum += std::sqrt(h) * v;
      const double target = 2.0 * std::sqrt(static_cast<double>(n)) * std::sqrt(h);
      worst_sum = std::max(worst_sum, std::abs(sum - target) / target);
    }
    r.check(worst <= 1e-11 && worst_sum <= 1e-11,
            fmt("order %d: polynomial moments %.2e, weight sums %.2e (tol 1e-11, n up to 10^4)", order,
                worst, worst_sum));
  }
}

// 11 --------------------------------------------------------------------------

void gridded(Report& r) {
  const VortexField vortex(1.0);
  GridSeries shape;
  shape.nx = shape.ny = 81;
  shape.nt = 3;
  shape.x0 = shape.y0 = -2.0;
  shape.dx = shape.dy = 0.05;
  shape.t0 = 0.0;
  shape.dt = 0.5;
  const GridSeries sampled = sample_field(vortex, shape);
  const GriddedField g(sampled);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double eu = 0.0, eg = 0.0, em = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Vec2 y(u(rng), u(rng));
    if (y.norm() < 1e-6) continue;
    const double t = ut(rng);
    const FlowSample a = vortex.eval(y, t);
    const FlowSample b = g.eval(y, t);
    eu = std::max(eu, (a.u - b.u).norm() / a.u.norm());
    eg = std::max(eg, (a.grad_u - b.grad_u).norm() / a.grad_u.norm());
    em = std::max(em, (a.mat_deriv - b.mat_deriv).norm() / a.mat_deriv.norm());
  }
  r.check(std::max({eu, eg, em}) < 1e-4,
          fmt("vortex on an 81x81 grid, interior: velocity %.2e, gradient %.2e, material derivative %.2e",
              eu, eg, em));

  const auto dir = std::filesystem::temp_directory_path() / "mre_acceptance";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.bin").string(), b = (dir / "b.bin").string();
  write_grid_series(sampled, a);
  write_grid_series(load_grid_series(a), b);
  const bool same_file = read_text(a) == read_text(b);
  const auto bytes = serialize_grid_series(sampled);
  const bool same_bytes = serialize_grid_series(parse_grid_series(bytes)) == bytes;
  r.check(same_file && same_bytes, fmt("binary round trip byte identical (%zu bytes)", bytes.size()));
  std::filesystem::remove_all(dir);
}

// 12 --------------------------------------------------------------------------

void work_precision(Report& r) {
  BenchmarkConfig cfg = benchmark(bickley(), 7.0 / 9.0, 0.1, Vec2::Zero(), {"fd2+imex2", "daitche3"});
  cfg.reference.method = "fd4+imex4";
  cfg.reference.N = 2048;
  cfg.reference.steps = 2048;
  cfg.timing_repeats = 5;
  const auto rows = run_work_precision(cfg);
  std::map<std::string, std::vector<WorkPrecisionRow>> by_scheme;
  for (const auto& row : rows) by_scheme[row.scheme].push_back(row);
  for (const auto& name : cfg.schemes) {
    const auto& pts = by_scheme[name];
    bool monotone = pts.size() == cfg.ladder.size();
    std::string line;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      line += fmt(" (%.2e s, %.2e)", pts[i].wall_time_s, pts[i].error);
      if (i > 0) {
        monotone = monotone && pts[i].wall_time_s > pts[i - 1].wall_time_s && pts[i].error < pts[i - 1].error;
      }
    }
    r.check(monotone, name + " monotone along the ladder:" + line);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : by_scheme["fd2+imex2"]) best = std::min(best, row.error);
  r.check(best < 1e-2, fmt("fd2+imex2 smallest error %.2e (< 1e-2)", best));
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Report&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fourth-order boundary closure coefficients", 1.0, boundary_coefficients},
      {2, "fourth-order operator against the dense assembly", 10.0, fd4_oracle},
      {3, "second-order operator structure", 1.0, fd2_structure},
      {4, "time-stepper orders on scalar problems", 5.0, stepper_orders},
      {5, "quiescent benchmark orders", 120.0, quiescent},
      {6, "oscillatory benchmark orders", 300.0, oscillatory},
      {7, "Bickley jet, zero slip", 600.0, bickley_zero_slip},
      {8, "Bickley jet, initial slip", 600.0, bickley_slip},
      {9, "direct history scheme instability", 120.0, instability},
      {10, "history weight exactness", 30.0, weights},
      {11, "gridded field resampling and binary round trip", 10.0, gridded},
      {12, "work-precision sanity", 600.0, work_precision},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Report r;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.check(secs < c.budget_s, fmt("runtime %.2f s (budget %.0f s)", secs, c.budget_s));
    std::cout << (r.passed() ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << fmt(" (%.2f s)", secs)
              << "\n";
    for (const auto& line : r.lines()) std::cout << "    " << line << "\n";
    std::cout.flush();
    if (!r.passed()) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
