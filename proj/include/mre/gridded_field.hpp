#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mre/flow_fields.hpp"

namespace mre {

/// Stack of velocity snapshots on a uniform rectangular grid.
///
/// Sample (ix, iy) of snapshot s lives at index s*nx*ny + iy*nx + ix in both
/// u_data and v_data; its position is (x0 + ix*dx, y0 + iy*dy) and its time
/// t0 + s*dt.
struct GridSeries {
  std::uint64_t nx = 0;
  std::uint64_t ny = 0;
  std::uint64_t nt = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> u_data;
  std::vector<double> v_data;

  std::size_t plane() const { return static_cast<std::size_t>(nx * ny); }
};

/// Throws ConfigError when the grid shape or spacings are unusable.
void validate_grid_series(const GridSeries& g);

/// Binary layout (little-endian): magic "MREGRID1"; u64 nx, ny, nt;
/// f64 x0, y0, dx, dy, t0, dt; then per snapshot nx*ny f64 of u followed by
/// nx*ny f64 of v.
std::vector<unsigned char> serialize_grid_series(const GridSeries& g);
GridSeries parse_grid_series(const std::vector<unsigned char>& bytes);

GridSeries load_grid_series(const std::string& path);
void write_grid_series(const GridSeries& g, const std::string& path);

/// Reads a long-format CSV with header `t,x,y,u,v` (one row per grid point and
/// snapshot, any order) into a GridSeries. The t, x and y values must form
/// complete uniform lattices.
GridSeries grid_series_from_csv(const std::string& path);

/// Samples an analytic field on the lattice described by `shape` (its data
/// arrays are ignored and overwritten).
GridSeries sample_field(const FlowField& field, GridSeries shape);

/// Piecewise bicubic (tensor-product not-a-knot spline) interpolation in space,
/// linear interpolation between snapshots in time.
class GriddedField final : public FlowField {
 public:
  explicit GriddedField(GridSeries series);

  const GridSeries& series() const { return series_; }
  FlowSample eval(const Vec2& y, double t) const override;
  std::string name() const override { return "gridded"; }

 private:
  struct Nodal {
    std::vector<double> f, fx, fy, fxy;
  };
  struct Local {
    Vec2 u;
    Mat2 grad;
  };

  Local eval_snapshot(std::size_t snapshot, double sx, double sy, std::size_t ix,
                      std::size_t iy) const;

  GridSeries series_;
  // [snapshot][component]
  std::vector<std::array<Nodal, 2>> tables_;
};

/// Convenience wrapper matching the single-call evaluation contract.
FlowSample eval_gridded(const GriddedField& g, const Vec2& y, double t);

}  // namespace mre
