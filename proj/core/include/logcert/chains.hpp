// Certified polygonal chains around affine arrangements: a chain from x to y
// keeps clearance proportional to the smaller endpoint clearance and has
// length at most C|x-y|, with C from the recursion C_{k+1} = 8(C_k + 4^k).
#pragma once

#include "logcert/geometry.hpp"

#include <random>
#include <vector>

namespace logcert::chains {

using geom::AffineSubspace;
using geom::Arrangement;
using geom::Vec;

struct PolygonalChain {
  std::vector<Vec> vertices;  // repeats allowed; 4^k + 1 entries for k flats
  double length() const;
  int segment_count() const { return static_cast<int>(vertices.size()) - 1; }
};

struct ChainCertificate {
  double clearance_constant;            // C >= 1
  double length_bound;                  // C * |x - y|
  double measured_length;               // L(l)
  double measured_min_clearance_ratio;  // inf_xi C dist(xi,N) / min endpoint dist
  bool passes(double tol = 1e-8) const;
};

// Detour waypoint of the single-flat lemma. Postconditions for every
// xi in [x,w] u [w,y]:
//   2r dist(xi,N) >= min(dist(x,N), dist(y,N)) >= r dist(xi, [x,y])
// and |x-w| + |w-y| <= 3|x-y|.
Vec waypoint_single_subspace(const Vec& x, const Vec& y, const AffineSubspace& N,
                             double r = 1.0);

// Base constant of the recursion (k = 1).
inline constexpr double kBaseChainConstant = 6.0;

// C_k for k flats: C_1 = 6, C_{k+1} = 8(C_k + 4^k).
double chain_constant(int k);

struct ChainResult {
  PolygonalChain chain;
  ChainCertificate certificate;
};

ChainResult build_safe_chain(const Vec& x, const Vec& y, const Arrangement& A);

struct ChainReport {
  double measured_length;
  double min_clearance;        // exact min over segments, min over flats
  double min_clearance_ratio;  // C * min_clearance / min endpoint clearance
  double sampled_min_clearance;
  bool length_ok;
  bool clearance_ok;
  bool pass() const { return length_ok && clearance_ok; }
};

ChainReport verify_chain(const PolygonalChain& chain, const Arrangement& A,
                         double C, int samples_per_segment = 1000);

struct ChainInstance {
  Arrangement arrangement;
  Vec x, y;
};

// Seeded random instance: k flats of codimension >= 2 in R^m with bases in
// [-1,1]^m, endpoints off the arrangement.
ChainInstance make_random_instance(int m, int k, std::mt19937_64& rng);

}  // namespace logcert::chains
