#include "mre/config.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <set>

#include "mre/errors.hpp"
#include "mre/gridded_field.hpp"

namespace mre {

namespace {

using nlohmann::json;

const std::set<std::string> kTopLevelKeys = {
    "field",  "vortex", "oscillatory", "quiescent", "bickley", "gridded", "params",
    "y0",     "v0",     "q0",          "t_span",    "schemes", "ladder",  "metric",
    "c",      "newton_tol", "newton_max_iter", "linear_tol", "scheme",  "N",
    "steps",  "reference", "timing_repeats", "description"};

Vec2 read_vec2(const json& j, const char* key) {
  const auto a = j.at(key).get<std::vector<double>>();
  if (a.size() != 2) throw ConfigError(std::string("'") + key + "' must have two entries");
  return Vec2(a[0], a[1]);
}

MreParams read_params(const json& p) {
  static const char* physical[] = {"rho_p", "rho_f", "a", "T", "nu"};
  bool any_physical = false;
  for (const char* k : physical) any_physical = any_physical || p.contains(k);
  const bool nondim = p.contains("beta") || p.contains("R") || p.contains("S");
  if (any_physical && nondim) {
    throw ConfigError("params: give either beta/R and S or the physical keys, not both");
  }
  if (any_physical) {
    PhysicalParams ph;
    ph.rho_p = p.at("rho_p").get<double>();
    ph.rho_f = p.at("rho_f").get<double>();
    ph.a = p.at("a").get<double>();
    ph.T = p.at("T").get<double>();
    ph.nu = p.at("nu").get<double>();
    return params_from_physical(ph);
  }
  if (p.contains("beta") && p.contains("R")) throw ConfigError("params: give beta or R, not both");
  const double S = p.at("S").get<double>();
  if (p.contains("R")) return derive_params((3.0 * p.at("R").get<double>() - 1.0) / 2.0, S);
  return derive_params(p.at("beta").get<double>(), S);
}

void read_settings(const json& j, SolverSettings& s) {
  if (j.contains("c")) s.c = j.at("c").get<double>();
  if (j.contains("newton_tol")) s.newton_tol = j.at("newton_tol").get<double>();
  if (j.contains("newton_max_iter")) s.newton_max_iter = j.at("newton_max_iter").get<int>();
  if (j.contains("linear_tol")) s.linear_tol = j.at("linear_tol").get<double>();
  if (!(s.c > 0.0)) throw ConfigError("c must be positive");
}

BenchmarkConfig build(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kTopLevelKeys.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  BenchmarkConfig cfg;
  cfg.field_name = j.value("field", std::string("quiescent"));
  const std::string sub_key = cfg.field_name.rfind("gridded:", 0) == 0 ? "gridded" : cfg.field_name;
  const std::string options = j.contains(sub_key) ? j.at(sub_key).dump() : "";
  cfg.problem.field = make_field(cfg.field_name, options);

  if (!j.contains("params")) throw ConfigError("missing 'params'");
  cfg.problem.params = read_params(j.at("params"));

  if (j.contains("y0")) cfg.problem.y0 = read_vec2(j, "y0");
  if (j.contains("t_span")) {
    const auto ts = j.at("t_span").get<std::vector<double>>();
    if (ts.size() != 2 || !(ts[1] >= ts[0])) throw ConfigError("t_span must be [t0, T] with T >= t0");
    cfg.problem.t0 = ts[0];
    cfg.problem.T = ts[1];
  }
  if (j.contains("v0") && j.contains("q0")) throw ConfigError("give v0 or q0, not both");
  if (j.contains("q0")) cfg.problem.q0 = read_vec2(j, "q0");
  if (j.contains("v0")) {
    cfg.problem.q0 = read_vec2(j, "v0") - cfg.problem.field->eval(cfg.problem.y0, cfg.problem.t0).u;
  }

  if (j.contains("schemes")) cfg.schemes = j.at("schemes").get<std::vector<std::string>>();
  for (const auto& s : cfg.schemes) parse_method(s);
  if (j.contains("ladder")) cfg.ladder = j.at("ladder").get<std::vector<std::size_t>>();
  if (cfg.ladder.empty()) throw ConfigError("ladder must not be empty");
  for (std::size_t i = 1; i < cfg.ladder.size(); ++i) {
    if (cfg.ladder[i] <= cfg.ladder[i - 1]) throw ConfigError("ladder must be strictly increasing");
  }
  cfg.metric = j.value("metric", std::string());
  if (!cfg.metric.empty() && cfg.metric != "max_rel" && cfg.metric != "final_rel") {
    throw ConfigError("metric must be max_rel or final_rel");
  }
  read_settings(j, cfg.settings);

  cfg.scheme = j.value("scheme", cfg.scheme);
  parse_method(cfg.scheme);
  cfg.N = j.value("N", cfg.N);
  cfg.steps = j.value("steps", cfg.steps);

  cfg.reference.settings = cfg.settings;
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    cfg.reference.method = r.value("method", cfg.reference.method);
    cfg.reference.N = r.value("N", cfg.reference.N);
    cfg.reference.steps = r.value("steps", cfg.reference.steps);
    read_settings(r, cfg.reference.settings);
    parse_method(cfg.reference.method);
  }
  cfg.timing_repeats = j.value("timing_repeats", cfg.timing_repeats);
  if (cfg.timing_repeats < 1) throw ConfigError("timing_repeats must be >= 1");
  cfg.hash = config_hash(j.dump());
  return cfg;
}

}  // namespace

FieldPtr make_field(const std::string& name, const std::string& options_json) {
  json opt = options_json.empty() ? json::object() : json::parse(options_json);
  try {
    if (name == "quiescent") return std::make_shared<QuiescentField>();
    if (name == "vortex") return std::make_shared<VortexField>(opt.value("omega", 1.0));
    if (name == "oscillatory") {
      return std::make_shared<OscillatoryField>(opt.value("u1", 0.05), opt.value("lambda", 6.0));
    }
    if (name == "bickley") {
      if (opt.contains("file")) {
        return std::make_shared<BickleyField>(load_bickley_params(opt.at("file").get<std::string>()));
      }
      if (opt.empty()) return std::make_shared<BickleyField>(load_bickley_params(default_bickley_path()));
      return std::make_shared<BickleyField>(parse_bickley_params(opt.dump()));
    }
    if (name.rfind("gridded:", 0) == 0) {
      return std::make_shared<GriddedField>(load_grid_series(name.substr(8)));
    }
  } catch (const json::exception& e) {
    throw ConfigError("options for field '" + name + "': " + e.what());
  }
  throw ConfigError("unknown field '" + name + "'");
}

BenchmarkConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return build(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

BenchmarkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config(text);
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mre
