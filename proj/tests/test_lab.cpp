#include <doctest.h>

#include "logcert/lab.hpp"

#include <cmath>

using namespace logcert::lab;

namespace {

GridField constant_field(double c, int n = 64) {
  return GridField::from_function({-1, -1}, {1, 1}, n, n,
                                  [c](const Point2&) { return c; });
}

GridField quadratic_field(int n = 512) {
  return GridField::from_function({-1, -1}, {1, 1}, n, n,
                                  [](const Point2& p) { return p.squaredNorm(); });
}

GridField clipped_log(int n, double box = 0.2) {
  return GridField::from_function(
      {-box, -box}, {box, box}, n, n,
      [](const Point2& p) { return std::max(std::log(p.norm()), -1.0); });
}

double sup_diff(const GridField& a, const GridField& b) {
  double worst = 0;
  for (int ix = 0; ix < a.nx(); ++ix)
    for (int iy = 0; iy < a.ny(); ++iy)
      if (a.valid(ix, iy) && b.valid(ix, iy))
        worst = std::max(worst, std::abs(a.at(ix, iy) - b.at(ix, iy)));
  return worst;
}

}  // namespace

TEST_CASE("sup and mean over balls: constant field") {
  auto u = constant_field(3.5);
  CHECK(sup_ball(u, {0, 0}, 0.3) == doctest::Approx(3.5));
  CHECK(mean_ball(u, {0, 0}, 0.3) == doctest::Approx(3.5));
}

TEST_CASE("mean of |x|^2 over a ball is r^2/2 up to O(h^2)") {
  auto u = quadratic_field(512);
  for (double r : {0.2, 0.4}) {
    double expect = r * r / 2.0;  // d = 2: r^2 d/(d+2)
    CHECK(mean_ball(u, {0, 0}, r) == doctest::Approx(expect).epsilon(0.02));
  }
}

TEST_CASE("sup_ball >= mean_ball >= u(x) for subharmonic fields") {
  auto u = quadratic_field(256);
  for (double cx : {-0.3, 0.0, 0.4})
    for (double cy : {-0.2, 0.25}) {
      Point2 x(cx, cy);
      auto [ix, iy] = u.nearest_cell(x);
      double s = 0.2;
      double sup = sup_ball(u, x, s), mean = mean_ball(u, x, s);
      CHECK(sup >= mean);
      CHECK(mean >= u.at(ix, iy) - 2 * u.h());  // submean up to grid error
    }
}

TEST_CASE("ball scans reject balls leaving the box") {
  auto u = constant_field(0.0);
  CHECK_THROWS_AS(sup_ball(u, {0.9, 0}, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(mean_ball(u, {0, 0}, 1e-4), std::invalid_argument);  // s < h
}

TEST_CASE("jensen gap: harmonic field gap bounded by Lip * s * area") {
  auto u = GridField::from_function({-4, -4}, {4, 4}, 256, 256,
                                    [](const Point2& p) { return 0.7 * p.x(); });
  Point2 klo(-1, -1), khi(1, 1);
  double s = 0.1;
  CHECK(jensen_gap(u, klo, khi, s) <= 0.7 * (s + 2 * u.h()) * 4.0 + 1e-9);
}

TEST_CASE("jensen gap is monotone in s and guards its domain") {
  auto u = GridField::from_function(
      {-4, -4}, {4, 4}, 256, 256,
      [](const Point2& p) { return std::max(std::log(p.norm()), -1.0); });
  Point2 klo(-1, -1), khi(1, 1);
  CHECK(jensen_gap(u, klo, khi, 0.1) <= jensen_gap(u, klo, khi, 0.2));
  CHECK_THROWS_AS(jensen_gap(u, klo, khi, 0.5), std::invalid_argument);  // >= r0^3
  CHECK_THROWS_AS(jensen_gap(u, {-5, -5}, khi, 0.1), std::invalid_argument);
}

TEST_CASE("jensen exponent: clipped log beats 2/3, planted jump field fails") {
  auto u = GridField::from_function(
      {-4, -4}, {4, 4}, 256, 256,
      [](const Point2& p) { return std::max(std::log(p.norm()), -1.0); });
  Point2 klo(-1, -1), khi(1, 1);
  std::vector<double> ladder = {0.05, 0.1, 0.2, 0.4};
  auto fit = jensen_exponent(u, klo, khi, ladder);
  CHECK(fit.exponent >= 2.0 / 3.0 - 0.1);

  // dense jumps: the sup-gap saturates at every scale, exponent ~ 0
  auto jump = GridField::from_function(
      {-4, -4}, {4, 4}, 256, 256, [](const Point2& p) {
        return std::sin(130.0 * p.x()) * std::sin(130.0 * p.y()) > 0 ? 1.0 : 0.0;
      });
  auto bad = jensen_exponent(jump, klo, khi, ladder);
  CHECK(bad.exponent < 0.2);
}

TEST_CASE("lelong ratio: smooth field carries only the O(eps^2) mass") {
  auto v = quadratic_field(512);
  for (double eps : {0.05, 0.1}) {
    // Laplacian 4 over the ball + vol term: ~ 5 pi eps^2
    double lam = lelong_ratio(v, {0, 0}, eps);
    CHECK(lam == doctest::Approx(5.0 * M_PI * eps * eps).epsilon(0.1));
    CHECK(lam * std::abs(std::log(eps)) < 0.5);  // decays faster than 1/|log eps|
  }
  CHECK_THROWS_AS(lelong_ratio(v, {0, 0}, 1e-4), std::invalid_argument);
}

TEST_CASE("lelong linearity of the Laplacian mass part") {
  auto v = quadratic_field(256);
  auto w = GridField::from_function({-1, -1}, {1, 1}, 256, 256, [](const Point2& p) {
    return std::sin(2 * p.x()) * std::cosh(p.y());
  });
  GridField combo = v;
  for (int ix = 0; ix < v.nx(); ++ix)
    for (int iy = 0; iy < v.ny(); ++iy)
      combo.at(ix, iy) = 2.0 * v.at(ix, iy) - 0.5 * w.at(ix, iy);
  double eps = 0.1;
  double vol = M_PI * eps * eps;
  double mc = lelong_ratio(combo, {0.1, 0.1}, eps) - vol;
  double mv = lelong_ratio(v, {0.1, 0.1}, eps) - vol;
  double mw = lelong_ratio(w, {0.1, 0.1}, eps) - vol;
  CHECK(mc == doctest::Approx(2.0 * mv - 0.5 * mw).epsilon(1e-9));
}

TEST_CASE("lelong sweep: clipped log stays bounded, raw log is flagged") {
  std::vector<double> ladder = {0.01, 0.0316, 0.1};
  auto clipped = clipped_log(1024);
  auto sc = lelong_sweep(clipped, {0, 0}, ladder);
  CHECK_FALSE(sc.positive_mass_flag());

  auto raw = GridField::from_function(
      {-0.2, -0.2}, {0.2, 0.2}, 1024, 1024,
      [](const Point2& p) { return std::log(p.norm()); });
  auto sr = lelong_sweep(raw, {0, 0}, ladder);
  CHECK(sr.positive_mass_flag());
  // analytic mass of log|z| is 2 pi
  double eps = 0.05;
  CHECK(lelong_ratio(raw, {0, 0}, eps) - M_PI * eps * eps ==
        doctest::Approx(2.0 * M_PI).epsilon(0.05));
}

TEST_CASE("mollify: smooth theta-psh field keeps nonpositive defect") {
  auto u = quadratic_field(256);  // Lap/4 = 1
  auto res = mollify(u, 0.05, 0.0);
  CHECK(res.curvature_defect <= 1e-8);
  CHECK_THROWS_AS(mollify(u, 1e-4, 0.0), std::invalid_argument);  // eps < 2h
}

TEST_CASE("mollify: sup error bounded by the measured modulus") {
  auto u = clipped_log(256, 1.0);  // clip radius inside the box
  double eps = 0.02;
  auto res = mollify(u, eps);
  CHECK(sup_diff(res.field, u) <= measured_modulus(u, eps) + 1e-12);
}

TEST_CASE("mollify error decreases along eps-halving") {
  auto u = clipped_log(256, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.08, 0.04, 0.02}) {
    double err = sup_diff(mollify(u, eps).field, u);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("measured modulus of a linear field is Lip * r on the grid") {
  auto u = GridField::from_function({0, 0}, {1, 1}, 64, 64,
                                    [](const Point2& p) { return 2.0 * p.x(); });
  double r = 0.1;
  CHECK(measured_modulus(u, r) <= 2.0 * r + 1e-12);
  CHECK(measured_modulus(u, r) >= 2.0 * (r - 2 * u.h()));
}

TEST_CASE("campanato: zero field with unit conformal factor") {
  auto z = GridField::from_function({-0.7, -0.7}, {0.7, 0.7}, 128, 128,
                                    [](const Point2&) { return 0.0; });
  auto rep = campanato_distance_check(z, 1.0, 0.0, 2.0, 1.0);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.worst_hypothesis_ratio == 0.0);
  CHECK(rep.min_conformal == doctest::Approx(1.0));
  // Euclidean distance: dyadic ball averages converge quadratically
  REQUIRE(rep.gaps.size() == 4);
  CHECK(rep.C5 < 10.0);
}

TEST_CASE("campanato: radial log profile with M = 2") {
  auto u = GridField::from_function(
      {-0.7, -0.7}, {0.7, 0.7}, 256, 256, [](const Point2& p) {
        double L = std::abs(std::log(p.norm()));
        return 0.04 * std::pow(1.0 + L, -4.0);
      });
  auto rep = campanato_distance_check(u, 0.0, 1e-6, 2.0, 1.0);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.min_conformal > 0.0);
  CHECK(rep.fitted_exponent >= 0.9);
  CHECK(rep.pass(2.0));
}

TEST_CASE("campanato rejects a failing hypothesis and bad conformal factors") {
  auto big = GridField::from_function({-0.7, -0.7}, {0.7, 0.7}, 64, 64,
                                      [](const Point2& p) { return 5.0 * p.x(); });
  CHECK_THROWS(campanato_distance_check(big, 1.0, 0.0, 2.0, 0.01));
  auto concave = GridField::from_function(
      {-0.7, -0.7}, {0.7, 0.7}, 64, 64,
      [](const Point2& p) { return 1e-4 * (1.0 - p.squaredNorm()); });
  CHECK_THROWS_AS(campanato_distance_check(concave, 0.0, 0.0, 2.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("fit_log_modulus recovers the planted exponent") {
  // 1-D edge profile with a cell center exactly at the singular point
  int nx = 4096;
  double width = 0.01, hx = width / nx;
  auto u = GridField::from_function(
      {-hx / 2, 0.0}, {width - hx / 2, 4.0 * hx}, nx, 4, [](const Point2& p) {
        double a = std::abs(p.x());
        if (a == 0.0) return 0.0;
        return std::min(1.0, std::pow(std::abs(std::log(a)), -3.0));
      });
  auto fit = fit_log_modulus(u);
  CHECK_FALSE(fit.at_infinity);
  CHECK_FALSE(fit.at_max);
  CHECK(fit.M == doctest::Approx(3.0).epsilon(0.04));
  CHECK(fit.C == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("fit_log_modulus sentinels") {
  auto c = constant_field(2.0);
  auto fc = fit_log_modulus(c);
  CHECK(fc.at_infinity);
  CHECK(std::isinf(fc.M));

  auto lin = GridField::from_function({0, 0}, {1, 1}, 256, 256,
                                      [](const Point2& p) { return p.x(); });
  auto fl = fit_log_modulus(lin);
  CHECK(fl.at_max);
  CHECK(fl.M == doctest::Approx(20.0));
}

TEST_CASE("fit_log_modulus snaps to a grid when provided") {
  int nx = 4096;
  double width = 0.01, hx = width / nx;
  auto u = GridField::from_function(
      {-hx / 2, 0.0}, {width - hx / 2, 4.0 * hx}, nx, 4, [](const Point2& p) {
        double a = std::abs(p.x());
        if (a == 0.0) return 0.0;
        return std::min(1.0, std::pow(std::abs(std::log(a)), -3.0));
      });
  auto fit = fit_log_modulus(u, {1.0, 2.0, 3.0, 4.0});
  CHECK(fit.M == 3.0);
}
