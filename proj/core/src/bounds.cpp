#include "logcert/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace logcert::bounds {

double ApproxSchedule::delta(double m) const { return std::pow(m, -2.0 * D); }

bool ApproxSchedule::admits(double m) const {
  return m > m0() && delta(m) < a0 / m;
}

double upper_envelope(const ApproxSchedule& s, double m, double /*delta*/, double r,
                      double osc) {
  if (m <= s.m0()) throw std::invalid_argument("m must exceed m0");
  if (r <= 0) throw std::invalid_argument("r must be positive");
  const double C = s.generic_C;
  return (m - s.m0()) / m * osc + C * r + C * std::abs(std::log(r)) / m;
}

double lower_envelope(const ApproxSchedule& s, double m, double delta) {
  if (m <= 0) throw std::invalid_argument("m must be positive");
  return -(s.generic_C + std::abs(std::log(delta))) / (2.0 * m);
}

double gradient_envelope(const ApproxSchedule& s, double m, double delta, double r,
                         double osc) {
  if (r <= 0) throw std::invalid_argument("r must be positive");
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  const double C = s.generic_C;
  double amp = std::exp((m - s.m0()) * osc + C * (m - s.m0()) * r);
  return C + C / (m * std::sqrt(delta) * std::pow(r, s.n + 1)) * amp;
}

WeakEnvelopeTerms weak_logmod_envelope(const ApproxSchedule& s, double t, double m,
                                       double gamma, bool improved_route, double C4) {
  if (!(t > 0.0 && t < 0.5)) throw std::invalid_argument("separation t must be in (0, 1/2)");
  const double L = std::abs(std::log(t));
  WeakEnvelopeTerms e;
  e.term1 = std::pow(m, -gamma);
  e.term2 = s.D * std::pow(m, -2.0 * s.D) * L;
  double growth = improved_route ? C4 * std::pow(m, 1.0 / (1.0 + gamma))
                                 : m * (s.B + 1.0);
  e.term3 = t * std::pow(m, s.D) * std::exp(growth) *
            std::exp(s.A * s.D * std::pow(m, -2.0 * s.D + 1.0) * L);
  return e;
}

int choose_m(const ApproxSchedule& s, double t, double gamma, bool improved_route,
             double C4) {
  const double L = std::abs(std::log(t));
  double candidate = improved_route
                         ? std::pow(gamma * L / (3.0 * C4), 1.0 + gamma)
                         : gamma * L / (3.0 * (s.B + 1.0));
  return std::max(s.m0() + 1, static_cast<int>(std::floor(candidate)));
}

WeakCertificate certify_weak_logmod(const ApproxSchedule& s, double gamma,
                                    double t_lo, double t_hi, bool improved_route,
                                    double C4) {
  if (!(t_lo > 0 && t_lo < t_hi && t_hi < 0.5))
    throw std::invalid_argument("need 0 < t_lo < t_hi < 1/2");
  const double decades = std::log10(t_hi / t_lo);
  const int points = std::max(2, static_cast<int>(std::ceil(40.0 * decades)) + 1);

  WeakCertificate cert;
  cert.c = 0.0;
  std::vector<double> logL, logE;
  for (int i = 0; i < points; ++i) {
    double t = std::exp(std::log(t_lo) +
                        (std::log(t_hi) - std::log(t_lo)) * i / (points - 1));
    int m = choose_m(s, t, gamma, improved_route, C4);
    double env = weak_logmod_envelope(s, t, m, gamma, improved_route, C4).total();
    double L = std::abs(std::log(t));
    cert.t_grid.push_back(t);
    cert.envelope.push_back(env);
    cert.c = std::max(cert.c, env * std::pow(L, gamma));
    logL.push_back(std::log(L));
    logE.push_back(std::log(env));
  }
  cert.fitted_slope = fit_slope(logL, logE);
  return cert;
}

std::vector<double> bootstrap_exponents(double gamma_init, double target_M,
                                        int max_iters) {
  if (gamma_init <= 0) throw std::invalid_argument("gamma_init must be positive");
  std::vector<double> seq{gamma_init};
  double g = gamma_init;
  for (int i = 0; i < max_iters && g <= target_M; ++i) {
    g = g * (1.0 + g);
    seq.push_back(g);
  }
  if (g <= target_M) throw std::runtime_error("bootstrap did not reach target");
  return seq;
}

double stability_exponent(int n, double beta, double r) {
  if (n <= 0 || beta <= 0 || r <= 0)
    throw std::invalid_argument("n, beta, r must be positive");
  return beta * r / (n + beta * (n + r));
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_slope needs >= 2 points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

}  // namespace logcert::bounds
