#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mre/reference.hpp"
#include "mre/runner.hpp"

namespace mre {

/// Everything a CLI subcommand needs, parsed from one JSON object:
///
///   {
///     "field": "bickley",              // vortex | oscillatory | quiescent | bickley | gridded:<path>
///     "bickley": {"file": "..."},      // optional per-field sub-object
///     "params": {"beta": 1.5, "S": 0.1},  // or {"R", "S"} or the five physical keys
///     "y0": [0, 0], "q0": [0, 0],      // or "v0"
///     "t_span": [0, 1],
///     "schemes": ["fd2+imex2", "daitche3"],
///     "ladder": [32, 64, 128, 256, 512],
///     "metric": "final_rel",
///     "c": 10,
///     "reference": {"method": "fd4+imex4", "N": 2048, "steps": 2048}
///   }
struct BenchmarkConfig {
  Problem problem;
  std::string field_name;
  std::vector<std::string> schemes;
  std::vector<std::size_t> ladder{32, 64, 128, 256, 512};
  /// "max_rel", "final_rel", or empty: max_rel against a closed form,
  /// final_rel against a numerical reference.
  std::string metric;
  SolverSettings settings;
  /// Single-run settings (`mre run`); steps = 0 means steps = N.
  std::string scheme = "fd2+imex2";
  std::size_t N = 128;
  std::size_t steps = 0;
  ReferenceSpec reference;
  /// Repetitions per work-precision point; the minimum time is reported.
  int timing_repeats = 3;
  /// Hex digest of the canonical JSON text.
  std::string hash;

  std::size_t run_steps() const { return steps == 0 ? N : steps; }
};

/// Throws ConfigError on unknown fields, missing keys, conflicting parameter
/// spellings or a ladder that is not strictly increasing.
BenchmarkConfig parse_config(const std::string& json_text);
BenchmarkConfig load_config(const std::string& path);

/// Builds a field from its config name ("bickley", "gridded:<path>", ...) and
/// optional sub-object given as JSON text ("" for defaults).
FieldPtr make_field(const std::string& name, const std::string& options_json = "");

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string config_hash(const std::string& text);

}  // namespace mre
