// Blowups of C^n along coordinate subspaces: chart maps, fiber-distance
// upper bounds via the three proof routes, and the log^M modulus transfer
// from the blown-up space down to the base.
#pragma once

#include "logcert/grid.hpp"

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace logcert::blowup {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

// Blowup of C^n along V = {x_1 = ... = x_q = 0}, chart j in {1..q}.
struct BlowupChart {
  int n;
  int q;
  int chart;  // 1-based

  void validate() const;
};

// |first q coordinates|.
double dist_to_center(const CVec& a, int q);

// Chart map: (x_j, v with v_j = 1, tail) -> point in C^n.
CVec blowup_forward(const BlowupChart& chart, Cplx x_j, const CVec& v,
                    const CVec& tail);

struct ChartPoint {
  int chart;  // selected by largest leading |a_i|
  Cplx x_j;
  CVec v;     // affine chart coordinates, v[chart-1] = 1
  CVec tail;
};

// Unique preimage of a point off the center.
ChartPoint blowup_lift(const CVec& a, int n, int q);

// Route constants hiding the proof's "\lesssim"; calibrated per (n, q).
struct RouteConstants {
  double K1 = 1.0;  // endpoint-on-center route, K1 |a-b|
  double K2 = 1.0;  // derivative route, K2 max(clearance^-2) |a-b|
  double K3 = 1.0;  // projection route, K3 |a-b|^{1/4}
};

std::string route_constants_to_json(const RouteConstants& K);
RouteConstants route_constants_from_json(const std::string& text);

// Minimum over the applicable proof routes:
//   * K1 |a-b| when an endpoint lies on V,
//   * K2 max(dist(a,V)^-2, dist(b,V)^-2) |a-b| always,
//   * K3 |a-b|^{1/4} when min(clearance)^2 <= |a-b|^{1/2}.
double fiber_distance_upper(const CVec& a, const CVec& b, int q,
                            const RouteConstants& K);

// Graph-geodesic oracle on the real slice of the blowup of C^2 at 0:
// chart coordinates (x, v) with f(x, v) = (x, v x), metric
// ds^2 = dx^2 + dv^2/(1+v^2)^2 (Euclidean times Fubini-Study).
class ChartGridOracle {
 public:
  explicit ChartGridOracle(int resolution = 64, double extent = 1.0);

  // Fiber distance between real base points with |a2| <= |a1| (chart-1 cone);
  // a = 0 means the exceptional divisor.
  double fiber_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const;

  double cell_diameter() const;

 private:
  std::vector<double> distances_from(const Eigen::Vector2d& base) const;
  grid::GridField shape_;
  grid::DiagonalMetric metric_;
};

// Calibrate K1..K3 for the (n=2, q=2) real-slice model against the oracle;
// margin multiplies the observed max ratios.
RouteConstants calibrate_route_constants(int resolution, int n_samples,
                                         unsigned long seed, double margin = 1.25);

// Frozen calibration for (n=2, q=2), resolution 64 (margin 1.25).
RouteConstants default_route_constants_2_2();

struct TransferReport {
  double C_base;
  int violations = 0;
  double worst_ratio = 0.0;
  int pairs_checked = 0;
  bool pass(double tol = 1e-9) const { return worst_ratio <= 1.0 + tol; }
};

// Push a log^M modulus of u's pullback down to the base: given that
// |u(f(p)) - u(f(p'))| <= C_pullback |log d(p,p')|^{-M} on the charts, the
// three-term split bounds |u(a) - u(b)| <= C_base |log|a-b||^{-M} for
// separations below valid_below. The report re-checks the base bound on
// sampled grid pairs.
TransferReport transfer_logmod(const grid::GridField& u, double M,
                               double C_pullback, const RouteConstants& K,
                               int n_pairs = 20000, unsigned long seed = 7);

// The constant produced by the three-term split (exposed for tests).
double transfer_base_constant(double M, double C_pullback, double K3);

}  // namespace logcert::blowup
