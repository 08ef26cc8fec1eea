#include <doctest.h>

#include "logcert/grid.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace logcert::grid;

namespace {

GridField make_sample() {
  auto u = GridField::from_function({-1, -1}, {1, 1}, 16, 16, [](const Point2& p) {
    return std::sin(3 * p.x()) + p.y() * p.y();
  });
  u.sup_bound = 2.0;
  u.set_mask(3, 5, false);
  return u;
}

}  // namespace

TEST_CASE("grid layout and cell centers") {
  GridField u({0, 0}, {1, 1}, 4, 4);
  CHECK(u.h() == doctest::Approx(0.25));
  CHECK(u.cell_center(0, 0).x() == doctest::Approx(0.125));
  CHECK(u.cell_center(3, 3).y() == doctest::Approx(0.875));
  auto [ix, iy] = u.nearest_cell({0.13, 0.87});
  CHECK(ix == 0);
  CHECK(iy == 3);
}

TEST_CASE("CSV round trip preserves values, box and mask") {
  auto u = make_sample();
  auto path = std::filesystem::temp_directory_path() / "logcert_grid_rt.csv";
  u.save_csv(path.string());
  auto v = GridField::load_csv(path.string());
  std::filesystem::remove(path);
  REQUIRE(v.nx() == u.nx());
  REQUIRE(v.ny() == u.ny());
  CHECK(v.lo().x() == doctest::Approx(u.lo().x()));
  CHECK(v.hi().y() == doctest::Approx(u.hi().y()));
  CHECK(v.sup_bound == doctest::Approx(u.sup_bound));
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      CHECK(v.valid(ix, iy) == u.valid(ix, iy));
      if (u.valid(ix, iy))
        CHECK(v.at(ix, iy) == doctest::Approx(u.at(ix, iy)).epsilon(1e-12));
    }
}

TEST_CASE("GF01 binary round trip is exact") {
  auto u = make_sample();
  auto path = std::filesystem::temp_directory_path() / "logcert_grid_rt.gf01";
  u.save_gf01(path.string());
  auto v = GridField::load_gf01(path.string());
  std::filesystem::remove(path);
  REQUIRE(v.nx() == u.nx());
  REQUIRE(v.ny() == u.ny());
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      CHECK(v.valid(ix, iy) == u.valid(ix, iy));
      if (u.valid(ix, iy)) CHECK(v.at(ix, iy) == u.at(ix, iy));  // bit-exact
    }
}

TEST_CASE("shortest paths on a uniform metric approximate Euclidean distance") {
  GridField u({0, 0}, {1, 1}, 128, 128);
  std::vector<double> g(u.values().size(), 1.0);
  auto d = grid_shortest_paths(u, g, {u.idx(64, 64)});
  Point2 src = u.cell_center(64, 64);
  double worst = 0;
  for (int ix = 0; ix < u.nx(); ix += 7)
    for (int iy = 0; iy < u.ny(); iy += 7) {
      double euclid = (u.cell_center(ix, iy) - src).norm();
      if (euclid < 0.1) continue;
      double rel = d[u.idx(ix, iy)] / euclid;
      CHECK(rel >= 1.0 - 1e-9);  // graph paths never undershoot
      worst = std::max(worst, rel);
    }
  CHECK(worst <= 1.03);  // 16-neighbor stencil anisotropy
}

TEST_CASE("shortest paths respect masked cells") {
  GridField u({0, 0}, {1, 1}, 32, 32);
  // two-cell-thick wall (knight moves cannot hop it) with a gap at the top
  for (int iy = 0; iy < 30; ++iy) {
    u.set_mask(15, iy, false);
    u.set_mask(16, iy, false);
  }
  std::vector<double> g(u.values().size(), 1.0);
  auto d = grid_shortest_paths(u, g, {u.idx(2, 2)});
  CHECK(!std::isfinite(d[u.idx(16, 5)]));           // masked cell unreachable
  CHECK(d[u.idx(30, 2)] > (u.cell_center(30, 2) - u.cell_center(2, 2)).norm() + 0.5);
}
