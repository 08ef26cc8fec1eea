// Scalar bound-budget calculus: approximation envelopes, the delta = m^{-2D}
// schedule, the m-selection rule, the weak-log-continuity certificate and the
// exponent bootstrap.
#pragma once

#include <vector>

namespace logcert::bounds {

struct ApproxSchedule {
  int n = 2;              // complex dimension
  double B = 1.0;         // sup-norm bound
  double D = 2.0;         // schedule exponent, delta = m^{-2D}
  double p = 8.0;         // integrability parameter behind gamma
  double a0 = 0.25;       // admissibility constant in (0, 1/2)
  double generic_C = 1.0; // generic envelope constant
  double A = 1.0;         // gradient-route constant

  int m0() const { return 2 * n + 3; }
  double delta(double m) const;
  // m admitted when m > m0 and delta(m) < a0 / m.
  bool admits(double m) const;
  double gamma0() const { return p / (p + 2.0 * n + 1.0); }
  double gamma() const { return p / (p + 2.0 * n + 2.0); }
};

// ((m - m0)/m) osc + C r + C |log r| / m.
double upper_envelope(const ApproxSchedule& s, double m, double delta, double r,
                      double osc);

// -(C + |log delta|) / (2m).
double lower_envelope(const ApproxSchedule& s, double m, double delta);

// C + C / (m sqrt(delta) r^{n+1}) * exp((m - m0) osc + C (m - m0) r).
double gradient_envelope(const ApproxSchedule& s, double m, double delta, double r,
                         double osc);

struct WeakEnvelopeTerms {
  double term1;  // m^{-gamma}
  double term2;  // D m^{-2D} |log t|
  double term3;  // t m^D e^{m(B+1)} e^{A D m^{-2D+1} |log t|}
  double total() const { return term1 + term2 + term3; }
};

// The three-term bound at separation t with the delta = m^{-2D} schedule.
// improved_route swaps the m(B+1) exponent for C4 m^{1/(1+gamma)}.
WeakEnvelopeTerms weak_logmod_envelope(const ApproxSchedule& s, double t, double m,
                                       double gamma, bool improved_route = false,
                                       double C4 = 1.0);

// max{m0+1, floor(gamma |log t| / (3(B+1)))}; improved route uses
// (gamma |log t| / (3 C4))^{1+gamma}.
int choose_m(const ApproxSchedule& s, double t, double gamma,
             bool improved_route = false, double C4 = 1.0);

struct WeakCertificate {
  double c;             // sup over t of envelope(t) |log t|^gamma
  double fitted_slope;  // least-squares slope of log envelope vs log|log t|
  std::vector<double> t_grid, envelope;
};

// Sweep t over a log grid (40 points per decade), with m = choose_m(t).
WeakCertificate certify_weak_logmod(const ApproxSchedule& s, double gamma,
                                    double t_lo = 1e-12, double t_hi = 1e-2,
                                    bool improved_route = false, double C4 = 1.0);

// gamma_{k+1} = gamma_k (1 + gamma_k), iterated until the target exponent M
// is exceeded; includes the starting value.
std::vector<double> bootstrap_exponents(double gamma_init, double target_M,
                                        int max_iters = 200);

// beta r / (n + beta (n + r)).
double stability_exponent(int n, double beta, double r);

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace logcert::bounds
