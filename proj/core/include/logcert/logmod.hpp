// Local-to-global propagation of log^alpha moduli of continuity for
// B-pseudometrics, with the certified constants of the convex, unit-shrink
// and ball-minus-arrangement routes.
#pragma once

#include "logcert/geometry.hpp"

#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace logcert::logmod {

using geom::Arrangement;
using geom::ConvexDomain;
using geom::Vec;

// d(x,y) <= C / |log|x-y||^alpha on the stated validity set.
struct LogModulus {
  double C;
  double alpha;
  enum class Validity { AllPairs, ClearanceRestricted } validity =
      Validity::AllPairs;
};

// Evaluator plus the weak chain-inequality constant B >= 1.
struct PseudometricSpec {
  std::function<double(const Vec&, const Vec&)> evaluate;
  double quasi_triangle_B = 1.0;
};

struct ConvexCertificate {
  Vec center;        // chosen a
  double r;          // dist(a, boundary)
  int M;             // [1/r] + 1
  double C1;
  double C2;
  double D;
  double scale;      // normalization factor applied (1 if diam <= 1 already)
};

struct PropagationResult {
  LogModulus global;
  ConvexCertificate certificate;
};

// Convex route, D > 1: local (C0, alpha) on pairs with
// |x-y|^D <= min boundary clearance becomes global (B(C1+C2), alpha) with
// C1 = B^2 C0 M / (D^alpha - 1) and C2 = 2^alpha C1.
PropagationResult propagate_convex(const PseudometricSpec& d, const ConvexDomain& U,
                                   const LogModulus& local, double D,
                                   std::optional<Vec> center_hint = std::nullopt);

// Unit-shrink route, D = 1, alpha > 1: exponent drops to alpha - 1 and
// C1 = B C0 / ((alpha - 1) log 2).
PropagationResult propagate_convex_unit(const PseudometricSpec& d,
                                        const ConvexDomain& U,
                                        const LogModulus& local,
                                        std::optional<Vec> center_hint = std::nullopt);

enum class ArrangementVariant {
  DGreaterOne,   // local exponent alpha, D > 1
  DEqualOnePlus  // local exponent alpha + 1, D = 1
};

struct ArrangementCertificate {
  std::vector<double> chamber_constants;
  double chamber_max;
  int p;  // number of flats
  double final_C;
};

struct ArrangementPropagationResult {
  LogModulus global;
  ArrangementCertificate certificate;
};

// Ball-minus-arrangement route: per-chamber convex propagation, then
// C = B^2 * max_chamber_C * (p+1)^2 at exponent alpha.
ArrangementPropagationResult propagate_ball_minus_arrangement(
    const PseudometricSpec& d, const ConvexDomain& ball, const Arrangement& A,
    const LogModulus& local, ArrangementVariant variant, double D = 2.0);

struct VerifyReport {
  int violation_count = 0;
  double worst_ratio = 0.0;  // max d(x,y) |log|x-y||^alpha / C
  Vec worst_x, worst_y;
  int pairs_checked = 0;
  bool pass(double tol = 1e-6) const { return worst_ratio <= 1.0 + tol; }
};

// Pair sampler: must return pairs inside the domain, off obstacles.
using PairSampler = std::function<std::pair<Vec, Vec>(std::mt19937_64&)>;

VerifyReport verify_logmod(const PseudometricSpec& d, const LogModulus& bound,
                           const PairSampler& sampler, int n_pairs,
                           unsigned long seed, int n_threads = 0);

// Log-uniform separation sampler over a convex domain minus an optional
// arrangement; separations span [sep_min, sep_max].
PairSampler make_domain_sampler(const ConvexDomain& U,
                                const Arrangement* obstacles = nullptr,
                                double sep_min = 1e-12, double sep_max = 0.5);

}  // namespace logcert::logmod
