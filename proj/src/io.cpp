#include "mre/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "mre/errors.hpp"

namespace mre {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t offset) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("invalid number '" + s + "'", offset);
  }
  return v;
}

std::size_t to_size(const std::string& s, std::size_t offset) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("invalid integer '" + s + "'", offset);
  }
  return v;
}

/// Calls fn(fields, offset) for every data row after checking the header.
template <class Fn>
void for_each_row(const std::string& text, const std::string& header, Fn fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(in, line) || split(line, ',') != split(header, ',')) {
    throw FormatError("expected header '" + header + "'", 0);
  }
  const std::size_t columns = split(header, ',').size();
  offset += line.size() + 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") {
      const auto f = split(line, ',');
      if (f.size() != columns) throw FormatError("wrong number of columns", offset);
      fn(f, offset);
    }
    offset += line.size() + 1;
  }
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,y1,y2,q1,q2\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vec2& y = traj.positions[k];
    const Vec2& q = traj.rel_velocity[k];
    out += fmt(traj.times[k]) + ',' + fmt(y(0)) + ',' + fmt(y(1)) + ',' + fmt(q(0)) + ',' +
           fmt(q(1)) + '\n';
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  write_text(trajectory_csv(traj), path);
}

Trajectory parse_trajectory_csv(const std::string& text) {
  Trajectory tr;
  for_each_row(text, "t,y1,y2,q1,q2", [&](const std::vector<std::string>& f, std::size_t off) {
    tr.times.push_back(to_double(f[0], off));
    tr.positions.emplace_back(to_double(f[1], off), to_double(f[2], off));
    tr.rel_velocity.emplace_back(to_double(f[3], off), to_double(f[4], off));
  });
  if (tr.times.size() >= 2) tr.dt = tr.times[1] - tr.times[0];
  return tr;
}

std::string metadata_json(const Trajectory& traj, const RunInfo& info) {
  nlohmann::json j;
  j["scheme"] = traj.scheme;
  j["N"] = traj.N;
  j["c"] = traj.c;
  j["dt"] = traj.dt;
  j["steps"] = traj.size() == 0 ? 0 : traj.size() - 1;
  j["wall_time"] = traj.wall_time;
  j["newton_iterations"] = traj.newton_iterations;
  j["config_hash"] = info.config_hash;
  j["reference"] = info.reference;
  if (info.self_difference) j["self_difference"] = *info.self_difference;
  if (info.seed) j["seed"] = *info.seed;
  return j.dump(2) + "\n";
}

void write_metadata_json(const Trajectory& traj, const RunInfo& info, const std::string& path) {
  write_text(metadata_json(traj, info), path);
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path) {
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + ' ' +
         std::to_string(m.nonZeros()) + '\n';
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      out += std::to_string(it.row() + 1) + ' ' + std::to_string(it.col() + 1) + ' ' +
             fmt(it.value()) + '\n';
    }
  }
  write_text(out, path);
}

const SchemeConvergence& ConvergenceReport::at(const std::string& scheme) const {
  for (const auto& s : schemes) {
    if (s.scheme == scheme) return s;
  }
  throw ConfigError("no scheme '" + scheme + "' in report");
}

std::string emit_convergence_csv(const ConvergenceReport& report) {
  std::string out = "scheme,N,dt,error,order_fit,unstable\n";
  for (const auto& s : report.schemes) {
    const std::string order = s.has_order ? fmt(s.order) : "";
    for (const auto& p : s.points) {
      out += s.scheme + ',' + std::to_string(p.N) + ',' + fmt(p.dt) + ',' +
             (p.failed ? std::string() : fmt(p.error)) + ',' + order + ',' +
             (s.unstable ? "1" : "0") + '\n';
    }
  }
  return out;
}

ConvergenceReport parse_convergence_csv(const std::string& text) {
  ConvergenceReport rep;
  for_each_row(text, "scheme,N,dt,error,order_fit,unstable",
               [&](const std::vector<std::string>& f, std::size_t off) {
                 if (rep.schemes.empty() || rep.schemes.back().scheme != f[0]) {
                   SchemeConvergence s;
                   s.scheme = f[0];
                   s.has_order = !f[4].empty();
                   if (s.has_order) s.order = to_double(f[4], off);
                   if (f[5] != "0" && f[5] != "1") throw FormatError("unstable must be 0 or 1", off);
                   s.unstable = f[5] == "1";
                   rep.schemes.push_back(s);
                 }
                 ConvergencePoint p;
                 p.N = to_size(f[1], off);
                 p.dt = to_double(f[2], off);
                 p.failed = f[3].empty();
                 if (!p.failed) p.error = to_double(f[3], off);
                 rep.schemes.back().points.push_back(p);
               });
  return rep;
}

std::string emit_workprec_csv(const std::vector<WorkPrecisionRow>& rows) {
  std::string out = "scheme,N,dt,wall_time_s,error\n";
  for (const auto& r : rows) {
    out += r.scheme + ',' + std::to_string(r.N) + ',' + fmt(r.dt) + ',' + fmt(r.wall_time_s) + ',' +
           fmt(r.error) + '\n';
  }
  return out;
}

std::vector<WorkPrecisionRow> parse_workprec_csv(const std::string& text) {
  std::vector<WorkPrecisionRow> rows;
  for_each_row(text, "scheme,N,dt,wall_time_s,error",
               [&](const std::vector<std::string>& f, std::size_t off) {
                 rows.push_back({f[0], to_size(f[1], off), to_double(f[2], off),
                                 to_double(f[3], off), to_double(f[4], off)});
               });
  return rows;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write to " + path + " failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace mre
