#include "logcert/chains.hpp"

#include <cmath>
#include <stdexcept>

namespace logcert::chains {

using geom::Mat;
using geom::segment_flat_distance;

double PolygonalChain::length() const {
  double L = 0;
  for (size_t i = 0; i + 1 < vertices.size(); ++i)
    L += (vertices[i + 1] - vertices[i]).norm();
  return L;
}

bool ChainCertificate::passes(double tol) const {
  return measured_length <= length_bound + geom::geo_tolerance() &&
         measured_min_clearance_ratio >= 1.0 - tol;
}

double chain_constant(int k) {
  if (k < 1) throw std::invalid_argument("chain_constant needs k >= 1");
  double C = kBaseChainConstant;
  for (int j = 1; j < k; ++j) C = 8.0 * (C + std::pow(4.0, j));
  return C;
}

namespace {

// Unit vector pointing radially away from the flat at p; falls back to the
// first complement direction when p lies on the flat.
Vec away_direction(const Vec& p, const AffineSubspace& N) {
  Vec v = p - N.project(p);
  double n = v.norm();
  if (n > 1e-12) return v / n;
  return N.complement_basis().col(0);
}

}  // namespace

Vec waypoint_single_subspace(const Vec& x, const Vec& y, const AffineSubspace& N,
                             double r) {
  if (N.codim() < 2) throw std::invalid_argument("obstacle flat with codim < 2");
  if (r < 1.0) throw std::invalid_argument("r must be >= 1");
  const double dx = N.distance(x), dy = N.distance(y);
  if (dx <= geom::geo_tolerance() || dy <= geom::geo_tolerance())
    throw std::invalid_argument("endpoint on the obstacle flat");
  const double sep = (x - y).norm();
  if (sep <= geom::geo_tolerance()) return x;

  const double R = std::min(dx, dy);
  auto sfd = segment_flat_distance(x, y, N);

  // Case 1: the segment keeps clearance R/(2r) everywhere (covers parallel
  // configurations and minimizers outside the segment).
  if (sfd.distance >= R / (2.0 * r)) return x;

  if (sfd.distance < 1e-10 * sep) {
    // Case 2: the segment meets N. Lift off a hyperplane containing x, y, N:
    // the lift direction is orthogonal to span{dirs(N), y-x}.
    Vec w0 = x + sfd.t * (y - x);
    Mat span(x.size(), N.dim() + 1);
    span.leftCols(N.dim()) = N.directions();
    span.col(N.dim()) = y - x;
    AffineSubspace widened(w0, span);
    if (widened.codim() < 1)
      throw std::invalid_argument("no room to lift off the segment");
    Vec u = widened.complement_basis().col(0);
    return w0 + (R / r) * u;
  }

  // Case 3: skew configuration. The common perpendicular foot on the line
  // through x,y lies inside the segment; lift from it away from N.
  Vec w2 = x + sfd.t * (y - x);
  Vec u = away_direction(w2, N);
  return w2 + (R / r) * u;
}

namespace {

double min_dist_segment_to_flats(const Vec& a, const Vec& b,
                                 const std::vector<AffineSubspace>& flats,
                                 size_t count) {
  double d = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < count; ++j)
    d = std::min(d, segment_flat_distance(a, b, flats[j]).distance);
  return d;
}

double min_dist_point_to_flats(const Vec& p, const std::vector<AffineSubspace>& flats,
                               size_t count) {
  double d = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < count; ++j) d = std::min(d, flats[j].distance(p));
  return d;
}

}  // namespace

ChainResult build_safe_chain(const Vec& x, const Vec& y, const Arrangement& A) {
  A.validate_codim2();
  const auto& flats = A.subspaces;
  const int k = static_cast<int>(flats.size());
  const double dxN = A.distance(x), dyN = A.distance(y);
  if (dxN <= geom::geo_tolerance() || dyN <= geom::geo_tolerance())
    throw std::invalid_argument("endpoint on the arrangement");

  std::vector<Vec> chain;
  if ((x - y).norm() <= geom::geo_tolerance()) {
    chain.assign(static_cast<size_t>(std::pow(4.0, k)) + 1, x);
  } else {
    // Base case: one flat, the detour lemma with r = 1, padded to 5 vertices.
    Vec w = waypoint_single_subspace(x, y, flats[0], 1.0);
    chain = {x, w, y, y, y};

    for (int j = 1; j < k; ++j) {
      const AffineSubspace& next = flats[j];
      const double C0 = chain_constant(j);
      const double Aval =
          std::min(min_dist_point_to_flats(x, flats, j + 1),
                   min_dist_point_to_flats(y, flats, j + 1));

      bool trivially_clear = true;
      for (size_t s = 0; s + 1 < chain.size(); ++s) {
        if (2.0 * C0 * min_dist_segment_to_flats(chain[s], chain[s + 1], flats, j + 1) <
            Aval) {
          trivially_clear = false;
          break;
        }
      }

      std::vector<Vec> out;
      out.reserve(4 * (chain.size() - 1) + 1);
      if (trivially_clear) {
        // Keep the chain, pad every segment to four edges.
        for (size_t s = 0; s + 1 < chain.size(); ++s) {
          out.push_back(chain[s]);
          out.push_back(chain[s + 1]);
          out.push_back(chain[s + 1]);
          out.push_back(chain[s + 1]);
        }
        out.push_back(chain.back());
        chain = std::move(out);
        continue;
      }

      const double lift_half = Aval / (2.0 * C0);
      const double lift_quarter = Aval / (4.0 * C0);

      // Anchor vertices b_{4s}: keep a_s if it already clears the full union,
      // otherwise push it radially off the new flat to clearance A/(2 C0).
      std::vector<Vec> anchors(chain.size());
      std::vector<bool> lifted(chain.size(), false);
      for (size_t s = 0; s < chain.size(); ++s) {
        if (2.0 * C0 * min_dist_point_to_flats(chain[s], flats, j + 1) >= Aval) {
          anchors[s] = chain[s];
        } else {
          lifted[s] = true;
          Vec u = away_direction(chain[s], next);
          double tau = lift_half - next.distance(chain[s]);
          anchors[s] = chain[s] + tau * u;
        }
      }

      for (size_t s = 0; s + 1 < chain.size(); ++s) {
        const Vec& b0 = anchors[s];
        const Vec& b4 = anchors[s + 1];
        out.push_back(b0);
        auto sfd = segment_flat_distance(b0, b4, next);
        if (sfd.distance >= lift_quarter) {
          out.push_back(b4);
          out.push_back(b4);
          out.push_back(b4);
        } else if (lifted[s] || lifted[s + 1]) {
          Vec q = waypoint_single_subspace(b0, b4, next, 2.0);
          out.push_back(q);
          out.push_back(q);
          out.push_back(q);
        } else {
          // Both anchors untouched: split at the closest approach, lift it to
          // clearance A/(4 C0), and route each half with the detour lemma.
          Vec xi0 = b0 + sfd.t * (b4 - b0);
          Vec u = away_direction(xi0, next);
          Vec mid = xi0 + (lift_quarter - next.distance(xi0)) * u;
          out.push_back(waypoint_single_subspace(b0, mid, next, 1.0));
          out.push_back(mid);
          out.push_back(waypoint_single_subspace(mid, b4, next, 1.0));
        }
      }
      out.push_back(anchors.back());
      chain = std::move(out);
    }
  }

  const double C = chain_constant(std::max(k, 1));
  const double Afinal = std::min(dxN, dyN);
  double minclear = std::numeric_limits<double>::infinity();
  for (size_t s = 0; s + 1 < chain.size(); ++s)
    minclear = std::min(minclear,
                        min_dist_segment_to_flats(chain[s], chain[s + 1], flats, k));

  ChainResult res;
  res.chain.vertices = std::move(chain);
  res.certificate.clearance_constant = C;
  res.certificate.length_bound = C * (x - y).norm();
  res.certificate.measured_length = res.chain.length();
  res.certificate.measured_min_clearance_ratio =
      Afinal > 0 ? C * minclear / Afinal : C;
  return res;
}

ChainReport verify_chain(const PolygonalChain& chain, const Arrangement& A, double C,
                         int samples_per_segment) {
  const auto& flats = A.subspaces;
  ChainReport rep{};
  rep.measured_length = chain.length();

  double exact = std::numeric_limits<double>::infinity();
  double sampled = std::numeric_limits<double>::infinity();
  for (size_t s = 0; s + 1 < chain.vertices.size(); ++s) {
    const Vec& a = chain.vertices[s];
    const Vec& b = chain.vertices[s + 1];
    exact = std::min(exact, min_dist_segment_to_flats(a, b, flats, flats.size()));
    for (int i = 0; i <= samples_per_segment; ++i) {
      double t = static_cast<double>(i) / samples_per_segment;
      Vec xi = a + t * (b - a);
      sampled = std::min(sampled, A.distance(xi));
    }
  }
  rep.min_clearance = exact;
  rep.sampled_min_clearance = sampled;

  const Vec& x = chain.vertices.front();
  const Vec& y = chain.vertices.back();
  double endpoint_min = std::min(A.distance(x), A.distance(y));
  rep.min_clearance_ratio = endpoint_min > 0 ? C * exact / endpoint_min
                                             : std::numeric_limits<double>::infinity();
  rep.length_ok = rep.measured_length <= C * (x - y).norm() + geom::geo_tolerance();
  rep.clearance_ok = rep.min_clearance_ratio >= 1.0 - 1e-8;
  return rep;
}

ChainInstance make_random_instance(int m, int k, std::mt19937_64& rng) {
  if (m < 3 || k < 1) throw std::invalid_argument("need m >= 3, k >= 1");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> dim_pick(0, m - 2);  // codim >= 2
  auto rand_vec = [&]() {
    Vec v(m);
    for (int i = 0; i < m; ++i) v[i] = unif(rng);
    return v;
  };
  ChainInstance inst;
  for (int f = 0; f < k; ++f) {
    int d = dim_pick(rng);
    geom::Mat dirs(m, d);
    for (int c = 0; c < d; ++c) dirs.col(c) = rand_vec();
    inst.arrangement.subspaces.emplace_back(rand_vec(), dirs);
  }
  auto off_arrangement = [&]() {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Vec p = 2.0 * rand_vec();
      if (inst.arrangement.distance(p) > 1e-3) return p;
    }
    throw std::runtime_error("could not sample a point off the arrangement");
  };
  inst.x = off_arrangement();
  inst.y = off_arrangement();
  return inst;
}

}  // namespace logcert::chains
