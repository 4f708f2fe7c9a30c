#include "mre/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mre/errors.hpp"
#include "mre/metrics.hpp"

namespace mre {

namespace {

bool has_closed_form(const Problem& p) { return !exact_positions(p, {p.t0}).empty(); }

double dt_for(const Problem& p, std::size_t N) {
  return N == 0 ? 0.0 : (p.T - p.t0) / static_cast<double>(N);
}

void gate(const ErrorSource& src, const ConvergenceReport& rep) {
  if (!src.reference) return;
  double coarsest = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.schemes) {
    if (!s.points.empty() && !s.points.front().failed) {
      coarsest = std::min(coarsest, s.points.front().error);
    }
  }
  if (std::isfinite(coarsest)) check_reference_gate(*src.reference, coarsest);
}

}  // namespace

ErrorSource prepare_error_source(const BenchmarkConfig& cfg, std::ostream* log) {
  ErrorSource src;
  src.closed_form = has_closed_form(cfg.problem);
  src.metric = cfg.metric.empty() ? (src.closed_form ? "max_rel" : "final_rel") : cfg.metric;
  if (!src.closed_form) {
    for (std::size_t N : cfg.ladder) {
      if (cfg.reference.steps % N != 0) {
        throw ConfigError("reference steps (" + std::to_string(cfg.reference.steps) +
                          ") must be a multiple of every ladder size, got N = " + std::to_string(N));
      }
    }
    if (log) *log << "computing reference " << cfg.reference.method << " N=" << cfg.reference.N
                  << " steps=" << cfg.reference.steps << "\n";
    src.reference = reference_trajectory(cfg.problem, cfg.reference, src.metric);
    if (log) *log << "reference self-difference " << src.reference->self_difference << "\n";
  }
  return src;
}

MetricValue trajectory_error(const BenchmarkConfig& cfg, const ErrorSource& src,
                             const Trajectory& traj) {
  const std::vector<Vec2> exact = src.closed_form
                                      ? exact_positions(cfg.problem, traj.times)
                                      : positions_at(src.reference->trajectory, traj.times);
  return evaluate_metric(src.metric, traj.positions, exact);
}

ConvergenceRun run_convergence(const BenchmarkConfig& cfg, std::ostream* log) {
  if (cfg.schemes.empty()) throw ConfigError("no schemes configured");
  ConvergenceRun run;
  run.source = prepare_error_source(cfg, log);
  for (const auto& name : cfg.schemes) {
    const Method method = parse_method(name);
    SchemeConvergence sc;
    sc.scheme = name;
    std::vector<double> Ns, errs;
    for (std::size_t N : cfg.ladder) {
      ConvergencePoint pt;
      pt.N = N;
      pt.dt = dt_for(cfg.problem, N);
      try {
        const Trajectory tr = run_method(cfg.problem, method, N, N, cfg.settings);
        const MetricValue e = trajectory_error(cfg, run.source, tr);
        pt.error = e.value;
        if (log && e.absolute_fallback) *log << name << " N=" << N << ": absolute error used\n";
        Ns.push_back(static_cast<double>(N));
        errs.push_back(e.value);
      } catch (const InstabilityError& e) {
        pt.failed = true;
        if (log) *log << name << " N=" << N << " unstable: " << e.what() << "\n";
      } catch (const IntegrationAborted& e) {
        pt.failed = true;
        if (log) *log << name << " N=" << N << " aborted: " << e.what() << "\n";
      }
      sc.unstable = sc.unstable || pt.failed;
      sc.points.push_back(pt);
      if (log && !pt.failed) *log << name << " N=" << N << " error " << pt.error << "\n";
    }
    if (!sc.unstable && Ns.size() >= 2 &&
        std::all_of(errs.begin(), errs.end(), [](double e) { return e > 0.0; })) {
      sc.order = fit_order(Ns, errs);
      sc.has_order = true;
    }
    run.report.schemes.push_back(std::move(sc));
  }
  gate(run.source, run.report);
  return run;
}

std::vector<WorkPrecisionRow> run_work_precision(const BenchmarkConfig& cfg, std::ostream* log) {
  if (cfg.schemes.empty()) throw ConfigError("no schemes configured");
  const ErrorSource src = prepare_error_source(cfg, log);
  std::vector<WorkPrecisionRow> rows;
  ConvergenceReport coarse;
  for (const auto& name : cfg.schemes) {
    const Method method = parse_method(name);
    SchemeConvergence sc;
    sc.scheme = name;
    for (std::size_t N : cfg.ladder) {
      try {
        WorkPrecisionRow row{name, N, dt_for(cfg.problem, N),
                             std::numeric_limits<double>::infinity(), 0.0};
        for (int r = 0; r < cfg.timing_repeats; ++r) {
          const Trajectory tr = run_method(cfg.problem, method, N, N, cfg.settings);
          row.wall_time_s = std::min(row.wall_time_s, tr.wall_time);
          if (r == 0) row.error = trajectory_error(cfg, src, tr).value;
        }
        if (log) *log << name << " N=" << N << " time " << row.wall_time_s << " s error " << row.error << "\n";
        if (sc.points.empty()) sc.points.push_back({N, row.dt, row.error, false});
        rows.push_back(row);
      } catch (const InstabilityError& e) {
        if (log) *log << name << " N=" << N << " unstable: " << e.what() << "\n";
      } catch (const IntegrationAborted& e) {
        if (log) *log << name << " N=" << N << " aborted: " << e.what() << "\n";
      }
    }
    coarse.schemes.push_back(std::move(sc));
  }
  gate(src, coarse);
  return rows;
}

}  // namespace mre
