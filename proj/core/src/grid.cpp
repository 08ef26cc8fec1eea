#include "logcert/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace logcert::grid {

GridField::GridField(Point2 lo, Point2 hi, int nx, int ny)
    : lo_(std::move(lo)), hi_(std::move(hi)), nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid needs >= 1 cell per axis");
  if (!(hi_.x() > lo_.x() && hi_.y() > lo_.y()))
    throw std::invalid_argument("degenerate box");
  hx_ = (hi_.x() - lo_.x()) / nx;
  hy_ = (hi_.y() - lo_.y()) / ny;
  values_.assign(static_cast<size_t>(nx) * ny, 0.0);
  mask_.assign(values_.size(), 1);
}

GridField GridField::from_function(Point2 lo, Point2 hi, int nx, int ny,
                                   const std::function<double(const Point2&)>& f) {
  GridField g(std::move(lo), std::move(hi), nx, ny);
  double sup = 0.0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      double v = f(g.cell_center(ix, iy));
      g.at(ix, iy) = v;
      if (std::isfinite(v))
        sup = std::max(sup, std::abs(v));
      else
        g.set_mask(ix, iy, false);
    }
  g.sup_bound = sup;
  return g;
}

std::pair<int, int> GridField::nearest_cell(const Point2& p) const {
  int ix = static_cast<int>(std::floor((p.x() - lo_.x()) / hx_));
  int iy = static_cast<int>(std::floor((p.y() - lo_.y()) / hy_));
  ix = std::clamp(ix, 0, nx_ - 1);
  iy = std::clamp(iy, 0, ny_ - 1);
  return {ix, iy};
}

void GridField::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << "# box " << lo_.x() << " " << lo_.y() << " " << hi_.x() << " " << hi_.y()
      << "\n# grid " << nx_ << " " << ny_ << "\n# sup_bound " << sup_bound << "\n";
  for (int ix = 0; ix < nx_; ++ix) {
    for (int iy = 0; iy < ny_; ++iy) {
      if (iy) out << ",";
      out << (valid(ix, iy) ? at(ix, iy) : std::nan(""));
    }
    out << "\n";
  }
}

GridField GridField::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  Point2 lo, hi;
  int nx = 0, ny = 0;
  double sup = 0;
  std::string tag;
  std::getline(in, line);
  {
    std::istringstream ss(line);
    char hash;
    ss >> hash >> tag >> lo.x() >> lo.y() >> hi.x() >> hi.y();
    if (tag != "box") throw std::runtime_error("bad CSV header (box)");
  }
  std::getline(in, line);
  {
    std::istringstream ss(line);
    char hash;
    ss >> hash >> tag >> nx >> ny;
    if (tag != "grid") throw std::runtime_error("bad CSV header (grid)");
  }
  std::getline(in, line);
  {
    std::istringstream ss(line);
    char hash;
    ss >> hash >> tag >> sup;
    if (tag != "sup_bound") throw std::runtime_error("bad CSV header (sup_bound)");
  }
  GridField g(lo, hi, nx, ny);
  g.sup_bound = sup;
  for (int ix = 0; ix < nx; ++ix) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated CSV grid");
    std::istringstream ss(line);
    std::string cell;
    for (int iy = 0; iy < ny; ++iy) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short CSV row");
      double v = std::strtod(cell.c_str(), nullptr);
      g.at(ix, iy) = v;
      if (!std::isfinite(v)) g.set_mask(ix, iy, false);
    }
  }
  return g;
}

void GridField::save_gf01(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write("GF01", 4);
  auto wd = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  auto wi = [&](int64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  wd(lo_.x());
  wd(lo_.y());
  wd(hi_.x());
  wd(hi_.y());
  wi(nx_);
  wi(ny_);
  wd(sup_bound);
  for (size_t i = 0; i < values_.size(); ++i)
    wd(mask_[i] ? values_[i] : std::numeric_limits<double>::quiet_NaN());
}

GridField GridField::load_gf01(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "GF01", 4) != 0) throw std::runtime_error("bad GF01 magic");
  auto rd = [&]() {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  auto ri = [&]() {
    int64_t v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  Point2 lo(rd(), rd()), hi(rd(), rd());
  int nx = static_cast<int>(ri()), ny = static_cast<int>(ri());
  GridField g(lo, hi, nx, ny);
  g.sup_bound = rd();
  for (size_t i = 0; i < g.values().size(); ++i) {
    double v = rd();
    g.values()[i] = v;
    if (!std::isfinite(v)) g.set_mask(static_cast<int>(i / ny),
                                      static_cast<int>(i % ny), false);
  }
  if (!in) throw std::runtime_error("truncated GF01 file");
  return g;
}

std::vector<double> grid_shortest_paths(const GridField& f,
                                        const DiagonalMetric& metric,
                                        const std::vector<size_t>& sources) {
  // 16-neighbor stencil halves the worst-case metric anisotropy of the
  // 8-neighbor one.
  static const int offs[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                  {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
                                  {2, 1},  {2, -1}, {-2, 1}, {-2, -1},
                                  {1, 2},  {1, -2}, {-1, 2}, {-1, -2}};
  const size_t ncells = f.values().size();
  if (metric.gx.size() != ncells || metric.gy.size() != ncells)
    throw std::invalid_argument("metric size mismatch");
  std::vector<double> dist(ncells, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (size_t s : sources) {
    dist[s] = 0.0;
    heap.push({0.0, s});
  }
  const double hx = f.hx(), hy = f.hy();
  const int ny = f.ny();
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    int ux = static_cast<int>(u) / ny, uy = static_cast<int>(u) % ny;
    for (const auto& o : offs) {
      int vx = ux + o[0], vy = uy + o[1];
      if (!f.in_grid(vx, vy) || !f.valid(vx, vy)) continue;
      size_t v = f.idx(vx, vy);
      double gx = 0.5 * (metric.gx[u] + metric.gx[v]);
      double gy = 0.5 * (metric.gy[u] + metric.gy[v]);
      double dx = o[0] * hx, dy = o[1] * hy;
      double w = std::sqrt(gx * dx * dx + gy * dy * dy);
      if (d + w < dist[v]) {
        dist[v] = d + w;
        heap.push({dist[v], v});
      }
    }
  }
  return dist;
}

std::vector<double> grid_shortest_paths(const GridField& f,
                                        const std::vector<double>& g,
                                        const std::vector<size_t>& sources) {
  DiagonalMetric m{g, g};
  return grid_shortest_paths(f, m, sources);
}

}  // namespace logcert::grid
