// Scalar samples on a uniform 2-D box grid, with CSV / GF01 binary IO and
// grid-graph geodesics on a 16-neighbor stencil.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace logcert::grid {

using Point2 = Eigen::Vector2d;

class GridField {
 public:
  GridField() = default;
  GridField(Point2 lo, Point2 hi, int nx, int ny);

  static GridField from_function(Point2 lo, Point2 hi, int nx, int ny,
                                 const std::function<double(const Point2&)>& f);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double h() const { return hx_; }  // uniform spacing (hx == hy enforced on IO)
  const Point2& lo() const { return lo_; }
  const Point2& hi() const { return hi_; }

  double& at(int ix, int iy) { return values_[idx(ix, iy)]; }
  double at(int ix, int iy) const { return values_[idx(ix, iy)]; }
  bool valid(int ix, int iy) const { return mask_[idx(ix, iy)] != 0; }
  void set_mask(int ix, int iy, bool ok) { mask_[idx(ix, iy)] = ok ? 1 : 0; }
  Point2 cell_center(int ix, int iy) const {
    return {lo_.x() + (ix + 0.5) * hx_, lo_.y() + (iy + 0.5) * hy_};
  }
  bool in_grid(int ix, int iy) const {
    return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_;
  }
  size_t idx(int ix, int iy) const {
    return static_cast<size_t>(ix) * ny_ + iy;  // x-major
  }
  // Nearest cell indices to a physical point.
  std::pair<int, int> nearest_cell(const Point2& p) const;

  double sup_bound = 0.0;  // declared sup-norm bound

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  void save_csv(const std::string& path) const;
  static GridField load_csv(const std::string& path);
  // Compact binary: magic "GF01", then little-endian doubles.
  void save_gf01(const std::string& path) const;
  static GridField load_gf01(const std::string& path);

 private:
  Point2 lo_ = Point2::Zero(), hi_ = Point2::Zero();
  int nx_ = 0, ny_ = 0;
  double hx_ = 0, hy_ = 0;
  std::vector<double> values_;
  std::vector<uint8_t> mask_;
};

// Per-cell diagonal metric coefficients; geodesic edge length of a step
// (dx, dy) is sqrt(gx dx^2 + gy dy^2) with coefficients averaged between
// the endpoints.
struct DiagonalMetric {
  std::vector<double> gx, gy;
};

// Multi-source Dijkstra over the valid cells with a 16-neighbor stencil.
// Returns one distance per cell (inf where unreachable or masked).
std::vector<double> grid_shortest_paths(const GridField& f,
                                        const DiagonalMetric& metric,
                                        const std::vector<size_t>& sources);

// Isotropic convenience overload: gx = gy = g.
std::vector<double> grid_shortest_paths(const GridField& f,
                                        const std::vector<double>& g,
                                        const std::vector<size_t>& sources);

}  // namespace logcert::grid
