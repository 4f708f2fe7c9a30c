#include "mre/gridded_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "mre/errors.hpp"

namespace mre {
namespace {

constexpr char kMagic[8] = {'M', 'R', 'E', 'G', 'R', 'I', 'D', '1'};
constexpr std::size_t kHeaderBytes = 8 + 3 * 8 + 6 * 8;

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
  }
}

template <typename T>
T get_le(const std::vector<unsigned char>& in, std::size_t offset) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(in[offset + i]) << (8 * i);
  }
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

// Maps nodal values to nodal slopes of the not-a-knot cubic spline on n
// uniformly spaced nodes: slopes = D * values.
Eigen::MatrixXd spline_slope_matrix(std::size_t n, double h) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  const auto N = static_cast<Eigen::Index>(n);
  // not-a-knot at node 1: equal third derivatives on the first two cells
  M(0, 0) = 1.0;
  M(0, 2) = -1.0;
  B(0, 0) = -2.0 / h;
  B(0, 1) = 4.0 / h;
  B(0, 2) = -2.0 / h;
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    M(i, i - 1) = 1.0;
    M(i, i) = 4.0;
    M(i, i + 1) = 1.0;
    B(i, i - 1) = -3.0 / h;
    B(i, i + 1) = 3.0 / h;
  }
  M(N - 1, N - 1) = 1.0;
  M(N - 1, N - 3) = -1.0;
  B(N - 1, N - 1) = 2.0 / h;
  B(N - 1, N - 2) = -4.0 / h;
  B(N - 1, N - 3) = 2.0 / h;
  return M.partialPivLu().solve(B);
}

// Cubic Hermite basis on [0, 1] and first derivatives.
struct Hermite {
  double h00, h01, h10, h11;
  double d00, d01, d10, d11;
  explicit Hermite(double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    h00 = 2 * s3 - 3 * s2 + 1;
    h01 = -2 * s3 + 3 * s2;
    h10 = s3 - 2 * s2 + s;
    h11 = s3 - s2;
    d00 = 6 * s2 - 6 * s;
    d01 = -6 * s2 + 6 * s;
    d10 = 3 * s2 - 4 * s + 1;
    d11 = 3 * s2 - 2 * s;
  }
};

std::size_t cell_index(double s, std::size_t n) {
  const auto i = static_cast<std::size_t>(std::floor(s));
  return std::min(i, n - 2);
}

}  // namespace

void validate_grid_series(const GridSeries& g) {
  if (g.nx < 4 || g.ny < 4) {
    throw ConfigError("grid needs at least 4 nodes per direction for bicubic support");
  }
  if (g.nt < 2) {
    throw ConfigError("grid series needs at least 2 snapshots");
  }
  for (double v : {g.x0, g.y0, g.t0}) {
    if (!std::isfinite(v)) throw ConfigError("grid origin must be finite");
  }
  for (double v : {g.dx, g.dy, g.dt}) {
    if (!std::isfinite(v) || v <= 0.0) throw ConfigError("grid spacings must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(g.nt) * g.plane();
  if (g.u_data.size() != expected || g.v_data.size() != expected) {
    throw ConfigError("grid data length does not match nt*nx*ny");
  }
}

std::vector<unsigned char> serialize_grid_series(const GridSeries& g) {
  validate_grid_series(g);
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 16 * g.u_data.size());
  out.resize(sizeof kMagic);
  std::memcpy(out.data(), kMagic, sizeof kMagic);
  put_le(out, g.nx);
  put_le(out, g.ny);
  put_le(out, g.nt);
  for (double v : {g.x0, g.y0, g.dx, g.dy, g.t0, g.dt}) put_le(out, v);
  const std::size_t plane = g.plane();
  for (std::size_t s = 0; s < g.nt; ++s) {
    for (std::size_t i = 0; i < plane; ++i) put_le(out, g.u_data[s * plane + i]);
    for (std::size_t i = 0; i < plane; ++i) put_le(out, g.v_data[s * plane + i]);
  }
  return out;
}

GridSeries parse_grid_series(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("truncated grid header", bytes.size());
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError("bad magic, expected MREGRID1", 0);
  }
  GridSeries g;
  std::size_t off = 8;
  g.nx = get_le<std::uint64_t>(bytes, off);
  g.ny = get_le<std::uint64_t>(bytes, off + 8);
  g.nt = get_le<std::uint64_t>(bytes, off + 16);
  off += 24;
  double* header[] = {&g.x0, &g.y0, &g.dx, &g.dy, &g.t0, &g.dt};
  for (double* field : header) {
    *field = get_le<double>(bytes, off);
    if (!std::isfinite(*field)) throw FormatError("non-finite header value", off);
    off += 8;
  }
  if (g.nx < 4 || g.ny < 4 || g.nt < 2 || g.nx > (1u << 20) || g.ny > (1u << 20) ||
      g.nt > (1u << 24)) {
    throw FormatError("unsupported grid dimensions", 8);
  }
  if (g.dx <= 0.0 || g.dy <= 0.0 || g.dt <= 0.0) {
    throw FormatError("grid spacings must be positive", 8 + 24 + 16);
  }
  const std::size_t plane = g.plane();
  const std::size_t samples = plane * g.nt;
  const std::size_t expected = kHeaderBytes + 16 * samples;
  if (bytes.size() < expected) {
    throw FormatError("truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  if (bytes.size() > expected) {
    throw FormatError("trailing bytes after payload", expected);
  }
  g.u_data.resize(samples);
  g.v_data.resize(samples);
  for (std::size_t s = 0; s < g.nt; ++s) {
    for (auto* dest : {&g.u_data, &g.v_data}) {
      for (std::size_t i = 0; i < plane; ++i) {
        const double v = get_le<double>(bytes, off);
        if (!std::isfinite(v)) throw FormatError("non-finite velocity sample", off);
        (*dest)[s * plane + i] = v;
        off += 8;
      }
    }
  }
  return g;
}

GridSeries load_grid_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open grid file " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return parse_grid_series(bytes);
}

void write_grid_series(const GridSeries& g, const std::string& path) {
  const auto bytes = serialize_grid_series(g);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write grid file " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

GridSeries grid_series_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file " + path);
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(in, line)) throw FormatError("empty CSV file", 0);
  line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
  line.erase(std::remove(line.begin(), line.end(), ' '), line.end());
  if (line != "t,x,y,u,v") throw FormatError("expected CSV header t,x,y,u,v", 0);
  offset += line.size() + 1;

  struct Row {
    double t, x, y, u, v;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Row r{};
    if (!(ss >> r.t >> r.x >> r.y >> r.u >> r.v)) {
      throw FormatError("malformed CSV row", line_offset);
    }
    if (!std::isfinite(r.u) || !std::isfinite(r.v)) {
      throw FormatError("non-finite velocity in CSV row", line_offset);
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw FormatError("CSV file has no data rows", offset);

  // Recover a uniform lattice from the coordinate values of one axis.
  const auto lattice = [&](auto member, const char* axis) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r.*member);
    std::sort(values.begin(), values.end());
    const double span = values.back() - values.front();
    const double tol = 1e-9 * std::max(1.0, std::abs(span));
    std::vector<double> uniq;
    for (double v : values) {
      if (uniq.empty() || v - uniq.back() > tol) uniq.push_back(v);
    }
    if (uniq.size() < 2) throw ConfigError(std::string("CSV lattice along ") + axis + " is degenerate");
    const double h = (uniq.back() - uniq.front()) / static_cast<double>(uniq.size() - 1);
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      if (std::abs(uniq[i] - (uniq.front() + h * static_cast<double>(i))) > 1e-6 * h) {
        throw ConfigError(std::string("CSV lattice along ") + axis + " is not uniform");
      }
    }
    return std::make_tuple(uniq.front(), h, static_cast<std::uint64_t>(uniq.size()));
  };

  GridSeries g;
  std::tie(g.t0, g.dt, g.nt) = lattice(&Row::t, "t");
  std::tie(g.x0, g.dx, g.nx) = lattice(&Row::x, "x");
  std::tie(g.y0, g.dy, g.ny) = lattice(&Row::y, "y");
  const std::size_t plane = g.plane();
  g.u_data.assign(plane * g.nt, 0.0);
  g.v_data.assign(plane * g.nt, 0.0);
  std::vector<char> seen(plane * g.nt, 0);
  for (const auto& r : rows) {
    const auto s = static_cast<std::size_t>(std::llround((r.t - g.t0) / g.dt));
    const auto ix = static_cast<std::size_t>(std::llround((r.x - g.x0) / g.dx));
    const auto iy = static_cast<std::size_t>(std::llround((r.y - g.y0) / g.dy));
    const std::size_t idx = s * plane + iy * g.nx + ix;
    if (seen[idx]) throw ConfigError("duplicate CSV sample");
    seen[idx] = 1;
    g.u_data[idx] = r.u;
    g.v_data[idx] = r.v;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ConfigError("CSV does not cover the full t/x/y lattice");
  }
  validate_grid_series(g);
  return g;
}

GridSeries sample_field(const FlowField& field, GridSeries shape) {
  const std::size_t plane = shape.plane();
  shape.u_data.assign(plane * shape.nt, 0.0);
  shape.v_data.assign(plane * shape.nt, 0.0);
  for (std::size_t s = 0; s < shape.nt; ++s) {
    const double t = shape.t0 + static_cast<double>(s) * shape.dt;
    for (std::size_t iy = 0; iy < shape.ny; ++iy) {
      for (std::size_t ix = 0; ix < shape.nx; ++ix) {
        const Vec2 y(shape.x0 + static_cast<double>(ix) * shape.dx,
                     shape.y0 + static_cast<double>(iy) * shape.dy);
        const Vec2 u = field.eval(y, t).u;
        shape.u_data[s * plane + iy * shape.nx + ix] = u(0);
        shape.v_data[s * plane + iy * shape.nx + ix] = u(1);
      }
    }
  }
  validate_grid_series(shape);
  return shape;
}

GriddedField::GriddedField(GridSeries series) : series_(std::move(series)) {
  validate_grid_series(series_);
  const auto nx = static_cast<Eigen::Index>(series_.nx);
  const auto ny = static_cast<Eigen::Index>(series_.ny);
  const Eigen::MatrixXd Dx = spline_slope_matrix(series_.nx, series_.dx);
  const Eigen::MatrixXd Dy = spline_slope_matrix(series_.ny, series_.dy);
  const std::size_t plane = series_.plane();
  tables_.resize(series_.nt);

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (std::size_t s = 0; s < series_.nt; ++s) {
    for (int comp = 0; comp < 2; ++comp) {
      const auto& data = comp == 0 ? series_.u_data : series_.v_data;
      // F(iy, ix)
      Eigen::Map<const RowMajor> F(data.data() + s * plane, ny, nx);
      const RowMajor Fx = F * Dx.transpose();
      const RowMajor Fy = Dy * F;
      const RowMajor Fxy = Dy * Fx;
      Nodal& nodal = tables_[s][comp];
      nodal.f.assign(F.data(), F.data() + plane);
      nodal.fx.assign(Fx.data(), Fx.data() + plane);
      nodal.fy.assign(Fy.data(), Fy.data() + plane);
      nodal.fxy.assign(Fxy.data(), Fxy.data() + plane);
    }
  }
}

GriddedField::Local GriddedField::eval_snapshot(std::size_t snapshot, double sx, double sy,
                                                std::size_t ix, std::size_t iy) const {
  const Hermite hx(sx);
  const Hermite hy(sy);
  const double dx = series_.dx;
  const double dy = series_.dy;
  const std::size_t nx = series_.nx;
  // value and derivative weights of the two corners along each axis
  const double wx[2] = {hx.h00, hx.h01};
  const double wxs[2] = {hx.h10 * dx, hx.h11 * dx};
  const double dwx[2] = {hx.d00 / dx, hx.d01 / dx};
  const double dwxs[2] = {hx.d10, hx.d11};
  const double wy[2] = {hy.h00, hy.h01};
  const double wys[2] = {hy.h10 * dy, hy.h11 * dy};
  const double dwy[2] = {hy.d00 / dy, hy.d01 / dy};
  const double dwys[2] = {hy.d10, hy.d11};

  Local out{Vec2::Zero(), Mat2::Zero()};
  for (int comp = 0; comp < 2; ++comp) {
    const Nodal& n = tables_[snapshot][comp];
    double val = 0.0, ddx = 0.0, ddy = 0.0;
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        const std::size_t idx = (iy + b) * nx + (ix + a);
        const double f = n.f[idx], fx = n.fx[idx], fy = n.fy[idx], fxy = n.fxy[idx];
        val += f * wx[a] * wy[b] + fx * wxs[a] * wy[b] + fy * wx[a] * wys[b] +
               fxy * wxs[a] * wys[b];
        ddx += f * dwx[a] * wy[b] + fx * dwxs[a] * wy[b] + fy * dwx[a] * wys[b] +
               fxy * dwxs[a] * wys[b];
        ddy += f * wx[a] * dwy[b] + fx * wxs[a] * dwy[b] + fy * wx[a] * dwys[b] +
               fxy * wxs[a] * dwys[b];
      }
    }
    out.u(comp) = val;
    out.grad(comp, 0) = ddx;
    out.grad(comp, 1) = ddy;
  }
  return out;
}

FlowSample GriddedField::eval(const Vec2& y, double t) const {
  const GridSeries& g = series_;
  const double x_end = g.x0 + static_cast<double>(g.nx - 1) * g.dx;
  const double y_end = g.y0 + static_cast<double>(g.ny - 1) * g.dy;
  const double t_end = g.t0 + static_cast<double>(g.nt - 1) * g.dt;
  const auto inside = [](double v, double lo, double hi) {
    const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
    return std::isfinite(v) && v >= lo - slack && v <= hi + slack;
  };
  if (!inside(y(0), g.x0, x_end) || !inside(y(1), g.y0, y_end)) {
    std::ostringstream msg;
    msg << "gridded field queried outside its spatial box at (" << y(0) << ", " << y(1) << ")";
    throw DomainError(msg.str());
  }
  if (!inside(t, g.t0, t_end)) {
    throw DomainError("gridded field queried outside its time range at t = " + std::to_string(t));
  }
  const double px = std::clamp((y(0) - g.x0) / g.dx, 0.0, static_cast<double>(g.nx - 1));
  const double py = std::clamp((y(1) - g.y0) / g.dy, 0.0, static_cast<double>(g.ny - 1));
  const double pt = std::clamp((t - g.t0) / g.dt, 0.0, static_cast<double>(g.nt - 1));
  const std::size_t ix = cell_index(px, g.nx);
  const std::size_t iy = cell_index(py, g.ny);
  const std::size_t it = cell_index(pt, g.nt);
  const double sx = px - static_cast<double>(ix);
  const double sy = py - static_cast<double>(iy);
  const double theta = pt - static_cast<double>(it);

  const Local a = eval_snapshot(it, sx, sy, ix, iy);
  const Local b = eval_snapshot(it + 1, sx, sy, ix, iy);
  FlowSample out;
  out.u = (1.0 - theta) * a.u + theta * b.u;
  out.grad_u = (1.0 - theta) * a.grad + theta * b.grad;
  // slope of the linear-in-time blend, constant between snapshots
  const Vec2 du_dt = (b.u - a.u) / g.dt;
  out.mat_deriv = du_dt + out.grad_u * out.u;
  return out;
}

FlowSample eval_gridded(const GriddedField& g, const Vec2& y, double t) { return g.eval(y, t); }

}  // namespace mre
