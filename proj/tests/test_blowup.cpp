#include <doctest.h>

#include "logcert/blowup.hpp"

#include <cmath>
#include <random>

using namespace logcert::blowup;

TEST_CASE("chart validation") {
  BlowupChart small_q{2, 1, 1}, big_q{2, 3, 1}, bad_chart{3, 2, 3}, ok{3, 2, 2};
  CHECK_THROWS_AS(small_q.validate(), std::invalid_argument);
  CHECK_THROWS_AS(big_q.validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad_chart.validate(), std::invalid_argument);
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("forward map worked example (n = q = 2, chart 1)") {
  BlowupChart chart{2, 2, 1};
  CVec v(2);
  v << Cplx(1, 0), Cplx(2, 0);
  CVec tail(0);
  CVec out = blowup_forward(chart, Cplx(0.5, 0), v, tail);
  REQUIRE(out.size() == 2);
  CHECK(std::abs(out[0] - Cplx(0.5, 0)) == doctest::Approx(0.0));
  CHECK(std::abs(out[1] - Cplx(1.0, 0)) == doctest::Approx(0.0));

  // x_j = 0 maps into the center
  CVec on_v = blowup_forward(chart, Cplx(0, 0), v, tail);
  CHECK(dist_to_center(on_v, 2) == doctest::Approx(0.0));
}

TEST_CASE("lift throws on the center and inverts the forward map") {
  CVec zero = CVec::Zero(3);
  CHECK_THROWS_AS(blowup_lift(zero, 3, 2), std::invalid_argument);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(-1, 1);
  for (int n : {2, 3, 4})
    for (int q = 2; q <= n; ++q)
      for (int rep = 0; rep < 500; ++rep) {
        CVec a(n);
        for (int i = 0; i < n; ++i) a[i] = Cplx(unif(rng), unif(rng));
        if (dist_to_center(a, q) < 1e-6) continue;
        auto p = blowup_lift(a, n, q);
        BlowupChart chart{n, q, p.chart};
        CVec back = blowup_forward(chart, p.x_j, p.v, p.tail);
        CHECK((back - a).norm() <= 1e-12);
        CHECK(std::abs(p.v[p.chart - 1] - Cplx(1, 0)) == doctest::Approx(0.0));
      }
}

TEST_CASE("route constants JSON round trip") {
  RouteConstants K{1.5, 2.25, 3.125};
  auto K2 = route_constants_from_json(route_constants_to_json(K));
  CHECK(K2.K1 == K.K1);
  CHECK(K2.K2 == K.K2);
  CHECK(K2.K3 == K.K3);
  CHECK_THROWS(route_constants_from_json("{\"K1\": 1.0}"));
}

TEST_CASE("fiber distance routes select as specified") {
  RouteConstants K{1.0, 1.0, 1.0};
  CVec a(2), b(2);

  // endpoint on the center: K1 |a-b| applies
  a << Cplx(0, 0), Cplx(0, 0);
  b << Cplx(0.9, 0), Cplx(0.1, 0);
  double t = (a - b).norm();
  CHECK(fiber_distance_upper(a, b, 2, K) <=
        doctest::Approx(std::min(K.K1 * t, K.K3 * std::pow(t, 0.25))));

  // far from the center, well separated: derivative route
  a << Cplx(0.9, 0), Cplx(0.0, 0);
  b << Cplx(0.9, 0), Cplx(0.4, 0);
  t = (a - b).norm();
  double dmin = std::min(dist_to_center(a, 2), dist_to_center(b, 2));
  double expect = K.K2 * t / (dmin * dmin);
  if (dmin * dmin <= std::sqrt(t))
    expect = std::min(expect, K.K3 * std::pow(t, 0.25));
  CHECK(fiber_distance_upper(a, b, 2, K) == doctest::Approx(expect));

  // near the center: the |a-b|^{1/4} route caps the blowup of the K2 bound
  a << Cplx(1e-3, 0), Cplx(0, 0);
  b << Cplx(0, 0), Cplx(1e-3, 0);
  t = (a - b).norm();
  CHECK(fiber_distance_upper(a, b, 2, K) ==
        doctest::Approx(K.K3 * std::pow(t, 0.25)));
  CHECK(fiber_distance_upper(a, a, 2, K) == 0.0);
}

TEST_CASE("oracle distance is symmetric-ish and bounded by the routes") {
  ChartGridOracle oracle(64);
  auto K = default_route_constants_2_2();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample = [&]() {
    double x = (unif(rng) < 0.5 ? -1 : 1) * (0.1 + 0.8 * unif(rng));
    return Eigen::Vector2d(x, (2 * unif(rng) - 1) * x);
  };
  int checked = 0, covered = 0;
  for (int i = 0; i < 300; ++i) {
    Eigen::Vector2d a = sample(), b = sample();
    double t = (a - b).norm();
    if (t < 4 * oracle.cell_diameter()) continue;
    CVec ca(2), cb(2);
    ca << Cplx(a.x(), 0), Cplx(a.y(), 0);
    cb << Cplx(b.x(), 0), Cplx(b.y(), 0);
    double bound = fiber_distance_upper(ca, cb, 2, K);
    double od = oracle.fiber_distance(a, b);
    ++checked;
    if (bound >= od - 2 * oracle.cell_diameter()) ++covered;
  }
  REQUIRE(checked > 100);
  CHECK(covered == checked);
}

TEST_CASE("calibration reproduces the frozen constants") {
  auto K = calibrate_route_constants(64, 4000, 2024, 1.25);
  auto F = default_route_constants_2_2();
  CHECK(K.K1 == doctest::Approx(F.K1).epsilon(1e-5));
  CHECK(K.K2 == doctest::Approx(F.K2).epsilon(1e-5));
  CHECK(K.K3 == doctest::Approx(F.K3).epsilon(1e-5));
}

TEST_CASE("transfer constant and the base modulus check") {
  auto K = default_route_constants_2_2();
  double C_base = transfer_base_constant(2.0, 1.0, K.K3);
  CHECK(C_base > 3.0);  // the split at least triples the pullback constant
  CHECK(std::isfinite(C_base));

  // base field with the log^2 profile; grid avoids the origin
  auto u = logcert::grid::GridField::from_function(
      {0.1, 0.1}, {1.1, 1.1}, 128, 128, [](const logcert::grid::Point2& p) {
        double r = p.norm();
        return std::min(1.0, std::pow(std::abs(std::log(r)), -2.0));
      });
  auto rep = transfer_logmod(u, 2.0, 1.0, K, 20000, 7);
  CHECK(rep.C_base == doctest::Approx(C_base));
  CHECK(rep.pairs_checked > 1000);
  CHECK(rep.pass());
}

TEST_CASE("transfer rejects grids touching the center") {
  auto u = logcert::grid::GridField::from_function(
      {-0.5, -0.5}, {0.5, 0.5}, 32, 32,
      [](const logcert::grid::Point2&) { return 0.0; });
  CHECK_THROWS_AS(transfer_logmod(u, 2.0, 1.0, default_route_constants_2_2()),
                  std::invalid_argument);
}
