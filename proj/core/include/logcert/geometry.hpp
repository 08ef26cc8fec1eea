// Affine flats, arrangements, convex domains and the chamber decomposition
// used by the chain construction and the propagation lemmas.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace logcert::geom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Global geometric tolerance. Configurable; 1e-10 by default.
double geo_tolerance();
void set_geo_tolerance(double tol);

struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An affine flat: base_point + span(directions). The direction basis is
// orthonormalized at construction (modified Gram-Schmidt); an empty basis
// is a point.
class AffineSubspace {
 public:
  AffineSubspace(Vec base_point, Mat directions);
  static AffineSubspace point(Vec p);

  int ambient_dim() const { return static_cast<int>(base_.size()); }
  int dim() const { return static_cast<int>(dirs_.cols()); }
  int codim() const { return ambient_dim() - dim(); }

  const Vec& base_point() const { return base_; }
  const Mat& directions() const { return dirs_; }

  // Orthogonal projection onto the flat.
  Vec project(const Vec& p) const;
  double distance(const Vec& p) const;
  bool contains(const Vec& p, double tol = -1.0) const;

  // First orthonormal basis of the orthogonal complement (deterministic).
  Mat complement_basis() const;

 private:
  Vec base_;
  Mat dirs_;  // ambient_dim x dim, orthonormal columns
};

// dist(p, N) = |p - proj_N(p)|.
double dist_to_affine(const Vec& p, const AffineSubspace& N);

struct Hyperplane {
  Vec normal;     // unit
  double offset;  // {x : normal . x = offset}
  double signed_dist(const Vec& p) const { return normal.dot(p) - offset; }
};

// A hyperplane containing N: normal = first complement direction,
// offset through the base point.
Hyperplane hyperplane_containing(const AffineSubspace& N);

struct Arrangement {
  std::vector<AffineSubspace> subspaces;

  int ambient_dim() const;
  // Minimum over flats.
  double distance(const Vec& p) const;
  void validate_codim2() const;
};

// Bounded convex domain: optional ball constraint intersected with
// half-spaces {normal . x <= offset}. Membership and boundary distance are
// exact.
class ConvexDomain {
 public:
  static ConvexDomain ball(Vec center, double radius);
  static ConvexDomain halfspaces(std::vector<Hyperplane> cuts, int ambient_dim);

  int ambient_dim() const { return dim_; }
  bool has_ball() const { return ball_radius_ > 0; }
  const Vec& ball_center() const { return ball_center_; }
  double ball_radius() const { return ball_radius_; }
  const std::vector<Hyperplane>& cuts() const { return cuts_; }

  ConvexDomain with_cut(const Hyperplane& h) const;

  bool contains(const Vec& p, double tol = -1.0) const;
  // dist(p, boundary) for p in the closure; throws for p outside.
  double dist_to_boundary(const Vec& p) const;

  // Point maximizing dist_to_boundary (Chebyshev center). Exact for balls,
  // subgradient ascent on the concave boundary-distance otherwise; a hint
  // supplies a strictly interior starting point.
  Vec chebyshev_center(std::optional<Vec> interior_hint = std::nullopt) const;

  // Max pairwise distance estimate (exact for balls: 2r; otherwise the
  // ball constraint diameter, tight enough for normalization purposes).
  double diameter() const;

 private:
  ConvexDomain() = default;
  int dim_ = 0;
  Vec ball_center_;
  double ball_radius_ = -1.0;  // <0: no ball constraint
  std::vector<Hyperplane> cuts_;
};

struct Chamber {
  ConvexDomain domain;
  std::vector<int> sign_vector;  // one sign per hyperplane
  Vec witness;                   // an interior point
};

// Open chambers of ball \ union(hyperplanes), found as nonempty sign-vector
// cells via randomized sampling of the ball (seeded, deterministic).
std::vector<Chamber> chambers(const ConvexDomain& ball,
                              const std::vector<Hyperplane>& hyperplanes,
                              int samples = 40000, unsigned long seed = 12345);

// Exact distance from the segment [a,b] to a flat, plus the minimizing
// parameter t in [0,1]. The squared distance is a 1-D convex quadratic.
struct SegmentFlatDistance {
  double distance;
  double t;
};
SegmentFlatDistance segment_flat_distance(const Vec& a, const Vec& b,
                                          const AffineSubspace& N);

// JSON round trip for arrangements ({"ambient_dim":m,"subspaces":[...]}).
std::string arrangement_to_json(const Arrangement& A);
Arrangement arrangement_from_json(const std::string& text);

}  // namespace logcert::geom
