#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <memory>

#include "mre/benchmark.hpp"
#include "mre/config.hpp"
#include "mre/errors.hpp"
#include "mre/full_system.hpp"
#include "mre/grid.hpp"
#include "mre/gridded_field.hpp"
#include "mre/io.hpp"
#include "mre/spatial_operator.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::string dump_operator;
  std::optional<std::uint64_t> seed;
  std::string grid_input;
  std::string grid_output;
};

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

void dump_operator(const mre::BenchmarkConfig& cfg, const std::string& path) {
  const mre::Method m = mre::parse_method(cfg.scheme);
  if (m.kind != mre::Method::Kind::FiniteDifference) {
    throw mre::ConfigError("--dump-operator needs a finite-difference scheme");
  }
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  const auto grid = mre::build_grid(cfg.N, cfg.settings.c);
  auto op = std::make_shared<const mre::SpatialOperator>(
      mre::assemble(m.space_order, grid, cfg.problem.params));
  const mre::FullSystem sys = mre::assemble_full(op, cfg.problem.field, cfg.problem.params);
  mre::write_matrix_market(sys.linear_matrix(), path);
  std::cout << "operator written to " << path << "\n";
}

int cmd_run(const Options& o) {
  const auto cfg = mre::load_config(o.config);
  if (!o.dump_operator.empty()) dump_operator(cfg, o.dump_operator);
  const auto tr = mre::run_method(cfg.problem, mre::parse_method(cfg.scheme), cfg.N,
                                  cfg.run_steps(), cfg.settings);
  mre::write_trajectory_csv(tr, out_path(o, "trajectory.csv"));
  mre::write_metadata_json(tr, {cfg.hash, false, std::nullopt, o.seed}, out_path(o, "metadata.json"));
  std::cout << cfg.scheme << ": " << tr.size() - 1 << " steps in " << tr.wall_time << " s, y(T) = ("
            << tr.positions.back()(0) << ", " << tr.positions.back()(1) << ")\n";
  return 0;
}

int cmd_reference(const Options& o) {
  const auto cfg = mre::load_config(o.config);
  const std::string metric = cfg.metric.empty() ? "final_rel" : cfg.metric;
  const auto ref = mre::reference_trajectory(cfg.problem, cfg.reference, metric);
  mre::write_trajectory_csv(ref.trajectory, out_path(o, "reference.csv"));
  mre::write_metadata_json(ref.trajectory, {cfg.hash, true, ref.self_difference, o.seed},
                           out_path(o, "reference.json"));
  std::cout << "reference " << ref.method << ", self-difference " << ref.self_difference << "\n";
  return 0;
}

int cmd_convergence(const Options& o) {
  const auto cfg = mre::load_config(o.config);
  const auto run = mre::run_convergence(cfg, &std::clog);
  mre::write_text(mre::emit_convergence_csv(run.report), out_path(o, "convergence.csv"));
  for (const auto& s : run.report.schemes) {
    std::cout << s.scheme << ": ";
    if (s.unstable) {
      std::cout << "unstable\n";
    } else if (s.has_order) {
      std::cout << "order " << s.order << "\n";
    } else {
      std::cout << "no order\n";
    }
  }
  return 0;
}

int cmd_work_precision(const Options& o) {
  const auto cfg = mre::load_config(o.config);
  const auto rows = mre::run_work_precision(cfg, &std::clog);
  mre::write_text(mre::emit_workprec_csv(rows), out_path(o, "workprec.csv"));
  std::cout << rows.size() << " work-precision points written\n";
  return 0;
}

int cmd_grid_convert(const Options& o) {
  const auto g = mre::grid_series_from_csv(o.grid_input);
  mre::write_grid_series(g, o.grid_output);
  std::cout << "grid " << g.nx << " x " << g.ny << " x " << g.nt << " written to " << o.grid_output
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxey-Riley particle solver with history force"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed recorded in run metadata");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
  };
  auto* run = app.add_subcommand("run", "Integrate one trajectory");
  add_common(run);
  run->add_option("--dump-operator", o.dump_operator, "Write the system matrix (Matrix Market)");
  auto* ref = app.add_subcommand("reference", "Compute a high-resolution reference trajectory");
  add_common(ref);
  auto* conv = app.add_subcommand("convergence", "Convergence study over the ladder");
  add_common(conv);
  auto* wp = app.add_subcommand("work-precision", "Runtime against error over the ladder");
  add_common(wp);
  auto* gc = app.add_subcommand("grid-convert", "Convert a CSV snapshot stack to the binary grid format");
  gc->add_option("--input", o.grid_input, "CSV with columns t,x,y,u,v")->required()->check(CLI::ExistingFile);
  gc->add_option("--output", o.grid_output, "Binary output path")->required();

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) o.seed = seed;

  try {
    if (*run) return cmd_run(o);
    if (*ref) return cmd_reference(o);
    if (*conv) return cmd_convergence(o);
    if (*wp) return cmd_work_precision(o);
    if (*gc) return cmd_grid_convert(o);
  } catch (const mre::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
