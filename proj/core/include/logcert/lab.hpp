// Grid experiments: Jensen sup/mean gaps, Lelong mass ratios, mollification
// with curvature defects, Campanato geodesic-distance iteration, and
// log-modulus fitting.
#pragma once

#include "logcert/grid.hpp"

#include <optional>
#include <vector>

namespace logcert::lab {

using grid::GridField;
using grid::Point2;

// Max / average of u over grid cells with centers in the closed ball B(x, s).
// Throws if the ball exits the box or s < h.
double sup_ball(const GridField& u, const Point2& x, double s);
double mean_ball(const GridField& u, const Point2& x, double r);

// Integral of |sup_{B(.,s)} u - u| over the cells of the inner box K
// (Lebesgue weights h^2).  Requires s < r0^3 with r0 = margin/4, where
// margin is the distance from K to the boundary of u's box.
double jensen_gap(const GridField& u, const Point2& k_lo, const Point2& k_hi,
                  double s);

struct ExponentFit {
  double exponent;
  double intercept;
  std::vector<double> scales, values;
};

// Fit gap ~ C s^alpha over a dyadic ladder of s values; returns alpha.
ExponentFit jensen_exponent(const GridField& u, const Point2& k_lo,
                            const Point2& k_hi, const std::vector<double>& s_ladder);

// Normalized ball mass eps^{-2n+2} (sum of 5-point Laplacian mass + vol term)
// for n = 1 (2-D grid the exponent is 0).  Requires eps >= 2h.
double lelong_ratio(const GridField& v, const Point2& x, double eps);

struct LelongSweep {
  std::vector<double> eps, lambda_logeps;  // lambda(eps) * |log eps|
  double max_over_min() const;
  // growth of lambda*|log eps| toward small eps flags positive Lelong mass
  bool positive_mass_flag(double growth_tol = 0.25) const;
};

LelongSweep lelong_sweep(const GridField& v, const Point2& x,
                         const std::vector<double>& eps_ladder);

struct MollifyResult {
  GridField field;
  double curvature_defect;  // -min over interior cells of (Lap u_eps / 4 + theta)
};

// Convolution with the radial bump chi(|zeta|^2/eps^2), chi(s) ~ exp(-1/(1-s)),
// renormalized near the boundary and masked cells.  Requires eps >= 2h.
MollifyResult mollify(const GridField& u, double eps, double theta_const = 0.0);

// Sup over cell pairs at distance <= r of |u(a) - u(b)| (local window scan).
double measured_modulus(const GridField& u, double r);

struct CampanatoReport {
  bool hypothesis_ok = false;
  double worst_hypothesis_ratio = 0.0;  // osc * |log t|^{2M} / C0, sampled
  double min_conformal = 0.0;
  std::vector<double> radii, gaps;      // |d(x0) - d_r(x0)| per dyadic r
  double C5 = 0.0;                      // max gap * |log r|^{M-1}
  double fitted_exponent = 0.0;         // slope of -log gap vs log|log r|
  bool pass(double M, double slack = 0.1) const {
    return hypothesis_ok && fitted_exponent >= M - 1.0 - slack;
  }
};

// Campanato distance iteration on a 2-D chart: checks the log^{2M} modulus
// hypothesis with constant C0, builds the conformal metric
// (Lap u / 4 + theta_const + delta) |dx|^2, runs geodesics from a base cell,
// and compares d(x0) with dyadic ball averages d_r(x0) around the profile
// center x0.  Throws on nonpositive conformal factor or failed hypothesis.
CampanatoReport campanato_distance_check(const GridField& u, double theta_const,
                                         double delta, double M, double C0,
                                         const Point2& x0 = Point2::Zero(),
                                         unsigned long seed = 11);

struct ModulusFit {
  double C = 0.0;
  double M = 0.0;
  bool at_infinity = false;  // zero oscillation at every scale
  bool at_max = false;       // decay faster than every resolvable log power
};

// Per-decade sup oscillations, least squares of log osc against log|log t|;
// slope is -M.  If M_grid is nonempty the returned M is the grid value with
// the smallest residual; M_max is the largest exponent the grid can resolve.
ModulusFit fit_log_modulus(const GridField& u,
                           const std::vector<double>& M_grid = {},
                           double M_max = 20.0, int n_pairs = 200000,
                           unsigned long seed = 3);

}  // namespace logcert::lab
