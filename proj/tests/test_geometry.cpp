#include <doctest.h>

#include "logcert/geometry.hpp"

#include <cmath>
#include <random>

using namespace logcert::geom;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

AffineSubspace z_axis() {
  Mat dirs(3, 1);
  dirs << 0, 0, 1;
  return AffineSubspace(Vec::Zero(3), dirs);
}

}  // namespace

TEST_CASE("dist_to_affine: z-axis in R^3") {
  auto N = z_axis();
  CHECK(dist_to_affine(v3(3, 4, 5), N) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(dist_to_affine(v3(0, 0, 7), N) == doctest::Approx(0.0));
}

TEST_CASE("dist_to_affine: codim-3 flat in R^4") {
  // N = {x1 = x2 = x3 = 0}, p = (1,1,0,0) -> sqrt(2)
  Mat dirs(4, 1);
  dirs << 0, 0, 0, 1;
  AffineSubspace N(Vec::Zero(4), dirs);
  Vec p(4);
  p << 1, 1, 0, 0;
  CHECK(dist_to_affine(p, N) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("dist_to_affine: dimension mismatch throws") {
  auto N = z_axis();
  Vec p(2);
  p << 1, 2;
  CHECK_THROWS_AS(dist_to_affine(p, N), std::invalid_argument);
}

TEST_CASE("dist_to_affine is convex along segments") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-2, 2);
  auto N = z_axis();
  for (int rep = 0; rep < 50; ++rep) {
    Vec a = v3(unif(rng), unif(rng), unif(rng));
    Vec b = v3(unif(rng), unif(rng), unif(rng));
    double da = N.distance(a), db = N.distance(b);
    for (double t : {0.25, 0.5, 0.75}) {
      Vec m = a + t * (b - a);
      CHECK(N.distance(m) <= (1 - t) * da + t * db + 1e-10);
    }
  }
}

TEST_CASE("dist_to_boundary: balls") {
  auto U = ConvexDomain::ball(Vec::Zero(2), 1.0);
  CHECK(U.dist_to_boundary(Vec::Zero(2)) == doctest::Approx(1.0));
  Vec p(2);
  p << 0.25, 0.0;
  CHECK(U.dist_to_boundary(p) == doctest::Approx(0.75));
  Vec out(2);
  out << 2.0, 0.0;
  CHECK_THROWS_AS(U.dist_to_boundary(out), std::invalid_argument);
}

TEST_CASE("dist_to_boundary: unit square via halfspaces") {
  std::vector<Hyperplane> cuts;
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  cuts.push_back({e1, 1.0});
  cuts.push_back({-e1, 0.0});
  cuts.push_back({e2, 1.0});
  cuts.push_back({-e2, 0.0});
  auto U = ConvexDomain::halfspaces(cuts, 2);
  Vec p(2);
  p << 0.3, 0.4;
  CHECK(U.dist_to_boundary(p) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("dist_to_boundary is concave along sampled segments") {
  auto U = ConvexDomain::ball(Vec::Zero(3), 2.0).with_cut({v3(1, 0, 0), 1.0});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-0.9, 0.9);
  int tried = 0;
  while (tried < 40) {
    Vec a = v3(unif(rng), unif(rng), unif(rng));
    Vec b = v3(unif(rng), unif(rng), unif(rng));
    if (!U.contains(a) || !U.contains(b)) continue;
    ++tried;
    double da = U.dist_to_boundary(a), db = U.dist_to_boundary(b);
    for (double t : {0.25, 0.5, 0.75}) {
      Vec m = a + t * (b - a);
      CHECK(U.dist_to_boundary(m) >= (1 - t) * da + t * db - 1e-10);
    }
  }
}

TEST_CASE("chebyshev center of a ball is its center") {
  Vec c = v3(0.5, -1.0, 2.0);
  auto U = ConvexDomain::ball(c, 1.5);
  CHECK((U.chebyshev_center() - c).norm() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(U.diameter() == doctest::Approx(3.0));
}

TEST_CASE("chamber counts") {
  auto ball2 = ConvexDomain::ball(Vec::Zero(2), 1.0);
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;

  CHECK(chambers(ball2, {}).size() == 1);
  CHECK(chambers(ball2, {Hyperplane{e1, 0.0}}).size() == 2);

  // three generic lines -> 7 chambers of the disk
  Vec n3(2);
  n3 << 1, 1;
  n3.normalize();
  std::vector<Hyperplane> three = {{e1, 0.1}, {e2, -0.15}, {n3, 0.05}};
  CHECK(chambers(ball2, three).size() == 7);
}

TEST_CASE("chamber witnesses carry consistent sign vectors") {
  auto ball2 = ConvexDomain::ball(Vec::Zero(2), 1.0);
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  std::vector<Hyperplane> cuts = {{e1, 0.1}, {e2, -0.15}};
  for (const auto& ch : chambers(ball2, cuts)) {
    REQUIRE(ch.sign_vector.size() == cuts.size());
    CHECK(ch.domain.contains(ch.witness));
    for (size_t i = 0; i < cuts.size(); ++i) {
      double sd = cuts[i].signed_dist(ch.witness);
      CHECK(ch.sign_vector[i] == (sd > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("hyperplane_containing") {
  auto H = hyperplane_containing(z_axis());
  CHECK(std::abs(H.signed_dist(v3(0, 0, 3))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(H.signed_dist(v3(0, 5, -1))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(H.normal.norm() == doctest::Approx(1.0));

  // a point in R^2: first complement direction is e1
  Vec p(2);
  p << 1, 2;
  auto Hp = hyperplane_containing(AffineSubspace::point(p));
  CHECK(std::abs(Hp.signed_dist(p)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("segment_flat_distance matches dense sampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2, 2);
  auto N = z_axis();
  for (int rep = 0; rep < 30; ++rep) {
    Vec a = v3(unif(rng), unif(rng), unif(rng));
    Vec b = v3(unif(rng), unif(rng), unif(rng));
    auto sfd = segment_flat_distance(a, b, N);
    double sampled = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      double t = i / 2000.0;
      sampled = std::min(sampled, N.distance(a + t * (b - a)));
    }
    CHECK(sfd.distance <= sampled + 1e-12);
    CHECK(sfd.distance >= sampled - 1e-5);
    CHECK(sfd.t >= 0.0);
    CHECK(sfd.t <= 1.0);
  }
}

TEST_CASE("arrangement JSON round trip") {
  Arrangement A;
  Mat dirs(3, 1);
  dirs << 0, 0, 1;
  A.subspaces.emplace_back(v3(0.5, -0.25, 0), dirs);
  A.subspaces.push_back(AffineSubspace::point(v3(1, 2, 3)));
  auto B = arrangement_from_json(arrangement_to_json(A));
  REQUIRE(B.subspaces.size() == A.subspaces.size());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-3, 3);
  for (int i = 0; i < 100; ++i) {
    Vec p = v3(unif(rng), unif(rng), unif(rng));
    CHECK(A.distance(p) == doctest::Approx(B.distance(p)).epsilon(1e-12));
  }
}

TEST_CASE("validate_codim2 rejects hyperplane flats") {
  Arrangement A;
  Mat dirs(3, 2);
  dirs << 1, 0, 0, 1, 0, 0;
  A.subspaces.emplace_back(Vec::Zero(3), dirs);
  CHECK_THROWS_AS(A.validate_codim2(), std::invalid_argument);
}
