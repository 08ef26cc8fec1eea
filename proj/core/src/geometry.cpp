#include "logcert/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace logcert::geom {

namespace {
double g_geo_tol = 1e-10;
}

double geo_tolerance() { return g_geo_tol; }
void set_geo_tolerance(double tol) { g_geo_tol = tol; }

AffineSubspace::AffineSubspace(Vec base_point, Mat directions)
    : base_(std::move(base_point)) {
  const int m = static_cast<int>(base_.size());
  if (directions.size() > 0 && directions.rows() != m)
    throw dimension_mismatch("direction rows != ambient dim");
  // Modified Gram-Schmidt; drop dependent columns.
  Mat out(m, directions.cols());
  int kept = 0;
  for (int j = 0; j < directions.cols(); ++j) {
    Vec v = directions.col(j);
    for (int i = 0; i < kept; ++i) v -= out.col(i).dot(v) * out.col(i);
    double n = v.norm();
    if (n > 1e-12) {
      // second pass for orthonormality to ~1e-15
      v /= n;
      for (int i = 0; i < kept; ++i) v -= out.col(i).dot(v) * out.col(i);
      out.col(kept++) = v / v.norm();
    }
  }
  dirs_ = out.leftCols(kept);
}

AffineSubspace AffineSubspace::point(Vec p) {
  const int m = static_cast<int>(p.size());
  return AffineSubspace(std::move(p), Mat(m, 0));
}

Vec AffineSubspace::project(const Vec& p) const {
  if (p.size() != base_.size()) throw dimension_mismatch("point dim != ambient dim");
  if (dirs_.cols() == 0) return base_;
  return base_ + dirs_ * (dirs_.transpose() * (p - base_));
}

double AffineSubspace::distance(const Vec& p) const { return (p - project(p)).norm(); }

bool AffineSubspace::contains(const Vec& p, double tol) const {
  if (tol < 0) tol = g_geo_tol;
  return distance(p) <= tol;
}

Mat AffineSubspace::complement_basis() const {
  const int m = ambient_dim();
  const int d = dim();
  Mat comp(m, m - d);
  int kept = 0;
  // Deterministic: sweep the standard basis in order, orthogonalize against
  // the flat directions and previously kept complement vectors.
  for (int j = 0; j < m && kept < m - d; ++j) {
    Vec v = Vec::Unit(m, j);
    v -= dirs_ * (dirs_.transpose() * v);
    for (int i = 0; i < kept; ++i) v -= comp.col(i).dot(v) * comp.col(i);
    double n = v.norm();
    if (n > 1e-8) {
      v /= n;
      v -= dirs_ * (dirs_.transpose() * v);
      for (int i = 0; i < kept; ++i) v -= comp.col(i).dot(v) * comp.col(i);
      comp.col(kept++) = v / v.norm();
    }
  }
  return comp.leftCols(kept);
}

double dist_to_affine(const Vec& p, const AffineSubspace& N) { return N.distance(p); }

Hyperplane hyperplane_containing(const AffineSubspace& N) {
  if (N.codim() < 1) throw std::invalid_argument("flat is full-dimensional");
  Vec normal = N.complement_basis().col(0);
  return Hyperplane{normal, normal.dot(N.base_point())};
}

int Arrangement::ambient_dim() const {
  if (subspaces.empty()) throw std::invalid_argument("empty arrangement");
  return subspaces.front().ambient_dim();
}

double Arrangement::distance(const Vec& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& N : subspaces) d = std::min(d, N.distance(p));
  return d;
}

void Arrangement::validate_codim2() const {
  const int m = ambient_dim();
  for (const auto& N : subspaces) {
    if (N.ambient_dim() != m) throw dimension_mismatch("inconsistent ambient dim");
    if (N.codim() < 2) throw std::invalid_argument("obstacle flat with codim < 2");
  }
}

ConvexDomain ConvexDomain::ball(Vec center, double radius) {
  if (radius <= 0) throw std::invalid_argument("ball radius must be positive");
  ConvexDomain U;
  U.dim_ = static_cast<int>(center.size());
  U.ball_center_ = std::move(center);
  U.ball_radius_ = radius;
  return U;
}

ConvexDomain ConvexDomain::halfspaces(std::vector<Hyperplane> cuts, int ambient_dim) {
  ConvexDomain U;
  U.dim_ = ambient_dim;
  for (auto& h : cuts) {
    double n = h.normal.norm();
    h.normal /= n;
    h.offset /= n;
  }
  U.cuts_ = std::move(cuts);
  return U;
}

ConvexDomain ConvexDomain::with_cut(const Hyperplane& h) const {
  ConvexDomain U = *this;
  Hyperplane hn = h;
  double n = hn.normal.norm();
  hn.normal /= n;
  hn.offset /= n;
  U.cuts_.push_back(hn);
  return U;
}

bool ConvexDomain::contains(const Vec& p, double tol) const {
  if (tol < 0) tol = g_geo_tol;
  if (p.size() != dim_) throw dimension_mismatch("point dim != domain dim");
  if (has_ball() && (p - ball_center_).norm() > ball_radius_ + tol) return false;
  for (const auto& h : cuts_)
    if (h.signed_dist(p) > tol) return false;
  return true;
}

double ConvexDomain::dist_to_boundary(const Vec& p) const {
  if (!contains(p)) throw std::invalid_argument("point outside domain");
  double d = std::numeric_limits<double>::infinity();
  if (has_ball()) d = std::min(d, ball_radius_ - (p - ball_center_).norm());
  for (const auto& h : cuts_) d = std::min(d, -h.signed_dist(p));
  return std::max(0.0, d);
}

Vec ConvexDomain::chebyshev_center(std::optional<Vec> interior_hint) const {
  if (cuts_.empty() && has_ball()) return ball_center_;
  Vec x;
  if (interior_hint) {
    x = *interior_hint;
  } else if (has_ball()) {
    x = ball_center_;
    // Pull into the half-space intersection if the ball center violates it.
    for (int it = 0; it < 200 && !contains(x); ++it)
      for (const auto& h : cuts_)
        if (h.signed_dist(x) > 0) x -= (h.signed_dist(x) + 1e-6) * h.normal;
  } else {
    throw std::invalid_argument("half-space domain needs an interior hint");
  }
  if (!contains(x, 1e-7)) throw std::invalid_argument("no interior start point found");

  // Subgradient ascent on the concave p -> dist(p, boundary).
  auto subgrad = [&](const Vec& p) {
    double best = std::numeric_limits<double>::infinity();
    Vec g = Vec::Zero(dim_);
    if (has_ball()) {
      double d = ball_radius_ - (p - ball_center_).norm();
      if (d < best) {
        best = d;
        double n = (p - ball_center_).norm();
        g = n > 1e-14 ? Vec(-(p - ball_center_) / n) : Vec::Zero(dim_);
      }
    }
    for (const auto& h : cuts_) {
      double d = -h.signed_dist(p);
      if (d < best) {
        best = d;
        g = -h.normal;
      }
    }
    return std::pair<double, Vec>(best, g);
  };
  double scale = has_ball() ? ball_radius_ : 1.0;
  Vec best_x = x;
  double best_v = dist_to_boundary(x);
  for (int it = 1; it <= 600; ++it) {
    auto [v, g] = subgrad(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
    double step = 0.5 * scale / std::sqrt(static_cast<double>(it));
    Vec y = x + step * g;
    if (!contains(y, 0.0)) {
      // project back: clip against violated constraints
      if (has_ball()) {
        Vec r = y - ball_center_;
        if (r.norm() > ball_radius_) y = ball_center_ + r * (ball_radius_ / r.norm());
      }
      for (const auto& h : cuts_)
        if (h.signed_dist(y) > 0) y -= h.signed_dist(y) * h.normal;
      if (!contains(y, 1e-9)) continue;
    }
    x = y;
  }
  return best_x;
}

double ConvexDomain::diameter() const {
  if (has_ball() && cuts_.empty()) return 2.0 * ball_radius_;
  if (has_ball()) {
    // Crude but safe upper estimate; refined below by sampling extreme pairs.
    return 2.0 * ball_radius_;
  }
  throw std::invalid_argument("diameter needs a bounding ball");
}

std::vector<Chamber> chambers(const ConvexDomain& ball,
                              const std::vector<Hyperplane>& hyperplanes,
                              int samples, unsigned long seed) {
  if (!ball.has_ball()) throw std::invalid_argument("chambers expects a ball domain");
  const int m = ball.ambient_dim();
  if (hyperplanes.empty()) return {Chamber{ball, {}, ball.ball_center()}};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample_ball = [&]() {
    Vec v(m);
    for (int i = 0; i < m; ++i) v[i] = gauss(rng);
    v.normalize();
    double u = std::pow(unif(rng), 1.0 / m);
    return Vec(ball.ball_center() + ball.ball_radius() * u * v);
  };

  struct Cell {
    std::vector<int> signs;
    Vec witness;
    double margin;  // min |signed dist| of the witness
  };
  std::vector<Cell> cells;
  auto classify = [&](const Vec& p) {
    std::vector<int> s(hyperplanes.size());
    double margin = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < hyperplanes.size(); ++j) {
      double d = hyperplanes[j].signed_dist(p);
      s[j] = d >= 0 ? 1 : -1;
      margin = std::min(margin, std::abs(d));
    }
    return std::pair<std::vector<int>, double>(std::move(s), margin);
  };
  auto add_point = [&](const Vec& p) {
    auto [s, margin] = classify(p);
    if (margin < 1e-9) return;  // on a hyperplane, skip
    for (auto& c : cells) {
      if (c.signs == s) {
        if (margin > c.margin) {
          c.margin = margin;
          c.witness = p;
        }
        return;
      }
    }
    cells.push_back(Cell{std::move(s), p, margin});
  };

  for (int i = 0; i < samples; ++i) add_point(sample_ball());
  // Perturbed points near pairwise hyperplane intersections catch thin cells.
  for (size_t a = 0; a < hyperplanes.size(); ++a)
    for (size_t b = a + 1; b < hyperplanes.size(); ++b)
      for (int i = 0; i < 64; ++i) {
        Vec p = sample_ball();
        p -= hyperplanes[a].signed_dist(p) * hyperplanes[a].normal;
        p -= hyperplanes[b].signed_dist(p) * hyperplanes[b].normal;
        Vec jitter(m);
        for (int k = 0; k < m; ++k) jitter[k] = gauss(rng);
        p += 1e-4 * ball.ball_radius() * jitter;
        if (ball.contains(p)) add_point(p);
      }

  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.signs < b.signs; });

  std::vector<Chamber> out;
  out.reserve(cells.size());
  for (const auto& c : cells) {
    ConvexDomain dom = ball;
    for (size_t j = 0; j < hyperplanes.size(); ++j) {
      const auto& h = hyperplanes[j];
      // keep the side containing the witness: sign * (n.x - o) >= 0
      Hyperplane cut{-static_cast<double>(c.signs[j]) * h.normal,
                     -static_cast<double>(c.signs[j]) * h.offset};
      dom = dom.with_cut(cut);
    }
    out.push_back(Chamber{std::move(dom), c.signs, c.witness});
  }
  return out;
}

SegmentFlatDistance segment_flat_distance(const Vec& a, const Vec& b,
                                          const AffineSubspace& N) {
  // residual(t) = (I - P)(a + t(b-a) - base); |residual|^2 is quadratic in t.
  Vec ra = a - N.project(a);
  Vec rb = b - N.project(b);
  Vec d = rb - ra;
  double dd = d.squaredNorm();
  double t = 0.0;
  if (dd > 1e-300) t = std::clamp(-ra.dot(d) / dd, 0.0, 1.0);
  double dist = (ra + t * d).norm();
  // endpoints can win under clamping
  double d0 = ra.norm(), d1 = rb.norm();
  if (d0 < dist) {
    dist = d0;
    t = 0.0;
  }
  if (d1 < dist) {
    dist = d1;
    t = 1.0;
  }
  return {dist, t};
}

std::string arrangement_to_json(const Arrangement& A) {
  nlohmann::json j;
  j["ambient_dim"] = A.ambient_dim();
  j["subspaces"] = nlohmann::json::array();
  for (const auto& N : A.subspaces) {
    nlohmann::json s;
    s["base"] = std::vector<double>(N.base_point().data(),
                                    N.base_point().data() + N.base_point().size());
    auto dirs = nlohmann::json::array();
    for (int c = 0; c < N.directions().cols(); ++c) {
      Vec col = N.directions().col(c);
      dirs.push_back(std::vector<double>(col.data(), col.data() + col.size()));
    }
    s["directions"] = dirs;
    j["subspaces"].push_back(s);
  }
  return j.dump(2);
}

Arrangement arrangement_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  const int m = j.at("ambient_dim").get<int>();
  Arrangement A;
  for (const auto& s : j.at("subspaces")) {
    auto base = s.at("base").get<std::vector<double>>();
    if (static_cast<int>(base.size()) != m)
      throw dimension_mismatch("base dim != ambient_dim");
    Vec b = Eigen::Map<Vec>(base.data(), m);
    auto dirs = s.at("directions");
    Mat D(m, dirs.size());
    int c = 0;
    for (const auto& col : dirs) {
      auto v = col.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != m)
        throw dimension_mismatch("direction dim != ambient_dim");
      D.col(c++) = Eigen::Map<Vec>(v.data(), m);
    }
    A.subspaces.emplace_back(std::move(b), std::move(D));
  }
  if (A.subspaces.empty()) throw std::invalid_argument("empty arrangement");
  return A;
}

}  // namespace logcert::geom
