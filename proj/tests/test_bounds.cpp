#include <doctest.h>

#include "logcert/bounds.hpp"

#include <cmath>

using namespace logcert::bounds;

TEST_CASE("schedule basics") {
  ApproxSchedule s;  // n = 2
  CHECK(s.m0() == 7);
  CHECK(s.delta(10.0) == doctest::Approx(std::pow(10.0, -4.0)));
  CHECK(s.gamma0() == doctest::Approx(8.0 / 13.0));
  CHECK(s.gamma() == doctest::Approx(8.0 / 14.0));
  CHECK(s.admits(10.0));
  CHECK_FALSE(s.admits(7.0));  // m must exceed m0
}

TEST_CASE("lower envelope worked example") {
  ApproxSchedule s;
  s.D = 1.0;
  s.generic_C = 1.0;
  // m = 100, delta = m^{-2} = 1e-4: -(1 + |log 1e-4|)/200
  double expect = -(1.0 + 4.0 * std::log(10.0)) / 200.0;
  CHECK(lower_envelope(s, 100.0, 1e-4) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("upper and gradient envelopes match the closed forms") {
  ApproxSchedule s;
  s.generic_C = 2.0;
  double m = 10, delta = 1e-4, r = 1e-3, osc = 0.2;
  double up = ((m - s.m0()) / m) * osc + s.generic_C * r +
              s.generic_C * std::abs(std::log(r)) / m;
  CHECK(upper_envelope(s, m, delta, r, osc) == doctest::Approx(up).epsilon(1e-12));

  double grad = s.generic_C +
                s.generic_C / (m * std::sqrt(delta) * std::pow(r, s.n + 1)) *
                    std::exp((m - s.m0()) * osc + s.generic_C * (m - s.m0()) * r);
  CHECK(gradient_envelope(s, m, delta, r, osc) ==
        doctest::Approx(grad).epsilon(1e-12));
}

TEST_CASE("weak envelope terms") {
  ApproxSchedule s;
  s.D = 1.0;
  s.B = 1.0;
  s.A = 1.0;
  double t = 1e-6, m = 10, gamma = 0.5;
  auto terms = weak_logmod_envelope(s, t, m, gamma);
  double L = std::abs(std::log(t));
  CHECK(terms.term1 == doctest::Approx(std::pow(m, -gamma)).epsilon(1e-12));
  // D m^{-2D} |log t| with D = 1, m = 10: 0.01 * 6 ln 10
  CHECK(terms.term2 == doctest::Approx(0.01 * 6.0 * std::log(10.0)).epsilon(1e-12));
  CHECK(terms.term3 ==
        doctest::Approx(t * m * std::exp(2.0 * m) *
                        std::exp(std::pow(m, -1.0) * L))
            .epsilon(1e-10));
  CHECK(terms.total() == doctest::Approx(terms.term1 + terms.term2 + terms.term3));
}

TEST_CASE("choose_m worked example") {
  ApproxSchedule s;
  s.n = 2;
  s.B = 2.0;
  // gamma |log t| / (3(B+1)) = 0.9 * 30 ln 10 / 9 ~ 6.9 < m0 + 1 = 8
  CHECK(choose_m(s, 1e-30, 0.9) == 8);
  ApproxSchedule s1;
  s1.B = 1.0;
  CHECK(choose_m(s1, 1e-12, 0.5) == 8);
  // far smaller t: the log term takes over
  CHECK(choose_m(s1, 1e-200, 0.9) ==
        static_cast<int>(std::floor(0.9 * 200.0 * std::log(10.0) / 6.0)));
}

TEST_CASE("certified sweep: bounded product, slope at most -gamma") {
  for (double gamma : {0.5, 0.9})
    for (double D : {1.0, 2.0}) {
      ApproxSchedule s;
      s.D = D;
      auto cert = certify_weak_logmod(s, gamma);
      CHECK(std::isfinite(cert.c));
      CHECK(cert.c > 0);
      CHECK(cert.fitted_slope <= -gamma + 0.05);
      REQUIRE(cert.t_grid.size() == cert.envelope.size());
      // c really is the sup of envelope * |log t|^gamma over the grid
      double sup = 0;
      for (size_t i = 0; i < cert.t_grid.size(); ++i)
        sup = std::max(sup, cert.envelope[i] *
                                std::pow(std::abs(std::log(cert.t_grid[i])), gamma));
      CHECK(cert.c == doctest::Approx(sup).epsilon(1e-12));
    }
}

TEST_CASE("improved route sharpens the sweep as well") {
  ApproxSchedule s;
  auto cert = certify_weak_logmod(s, 0.9, 1e-12, 1e-2, true, 1.0);
  CHECK(std::isfinite(cert.c));
  CHECK(cert.fitted_slope <= -0.9 + 0.05);
}

TEST_CASE("bootstrap sequence is exact") {
  auto seq = bootstrap_exponents(0.5, 3.0);
  REQUIRE(seq.size() == 4);
  CHECK(seq[0] == 0.5);
  CHECK(seq[1] == 0.75);
  CHECK(seq[2] == 1.3125);
  CHECK(seq[3] == 3.03515625);

  auto big = bootstrap_exponents(0.5, 100.0);
  CHECK(big.back() > 100.0);
  CHECK(big.size() <= 9);  // within 8 iterations

  auto unit = bootstrap_exponents(1.0, 5.0);
  REQUIRE(unit.size() == 3);
  CHECK(unit[0] == 1.0);
  CHECK(unit[1] == 2.0);
  CHECK(unit[2] == 6.0);
}

TEST_CASE("stability exponent") {
  CHECK(stability_exponent(2, 1.0, 2.0) == doctest::Approx(1.0 / 3.0));
  // monotone in beta and r
  CHECK(stability_exponent(2, 2.0, 2.0) > stability_exponent(2, 1.0, 2.0));
  CHECK(stability_exponent(2, 1.0, 4.0) > stability_exponent(2, 1.0, 2.0));
  // r -> infinity limit is beta r / (beta r) -> ... bounded by 1
  CHECK(stability_exponent(2, 1.0, 1e9) < 1.0);
  CHECK(stability_exponent(2, 1.0, 1e9) > 0.99);
}

TEST_CASE("fit_slope recovers an exact line") {
  std::vector<double> xs = {0, 1, 2, 3}, ys = {1, 3, 5, 7};
  CHECK(fit_slope(xs, ys) == doctest::Approx(2.0).epsilon(1e-12));
}
