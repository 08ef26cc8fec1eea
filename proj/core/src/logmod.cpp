#include "logcert/logmod.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

namespace logcert::logmod {

namespace {

constexpr double kUnitShrinkGuard = 1.0 + 1e-6;

ConvexCertificate make_certificate(const ConvexDomain& U, std::optional<Vec> hint,
                                   double D) {
  ConvexCertificate cert;
  cert.center = U.chebyshev_center(std::move(hint));
  cert.r = U.dist_to_boundary(cert.center);
  double diam = U.diameter();
  cert.scale = diam > 1.0 ? 1.0 / diam : 1.0;
  double r_scaled = cert.r * cert.scale;
  if (r_scaled <= 0) throw std::invalid_argument("degenerate domain: empty interior");
  cert.M = static_cast<int>(std::floor(1.0 / r_scaled)) + 1;
  cert.D = D;
  return cert;
}

}  // namespace

PropagationResult propagate_convex(const PseudometricSpec& d, const ConvexDomain& U,
                                   const LogModulus& local, double D,
                                   std::optional<Vec> center_hint) {
  if (D <= 1.0) throw std::invalid_argument("convex route needs D > 1");
  if (!U.has_ball()) throw std::invalid_argument("unbounded domain");
  const double B = d.quasi_triangle_B;
  ConvexCertificate cert = make_certificate(U, std::move(center_hint), D);
  cert.C1 = B * B * local.C * cert.M / (std::pow(D, local.alpha) - 1.0);
  cert.C2 = std::pow(2.0, local.alpha) * cert.C1;
  PropagationResult res;
  res.certificate = cert;
  res.global = LogModulus{B * (cert.C1 + cert.C2), local.alpha,
                          LogModulus::Validity::AllPairs};
  return res;
}

PropagationResult propagate_convex_unit(const PseudometricSpec& d,
                                        const ConvexDomain& U,
                                        const LogModulus& local,
                                        std::optional<Vec> center_hint) {
  if (local.alpha < kUnitShrinkGuard)
    throw std::invalid_argument("unit-shrink route needs alpha > 1 (guard 1+1e-6)");
  if (!U.has_ball()) throw std::invalid_argument("unbounded domain");
  const double B = d.quasi_triangle_B;
  const double a = local.alpha;
  ConvexCertificate cert = make_certificate(U, std::move(center_hint), 1.0);
  cert.C1 = B * local.C / ((a - 1.0) * std::log(2.0));
  cert.C2 = std::pow(2.0, a - 1.0) * cert.C1;
  PropagationResult res;
  res.certificate = cert;
  res.global = LogModulus{B * (cert.C1 + cert.C2), a - 1.0,
                          LogModulus::Validity::AllPairs};
  return res;
}

ArrangementPropagationResult propagate_ball_minus_arrangement(
    const PseudometricSpec& d, const ConvexDomain& ball, const Arrangement& A,
    const LogModulus& local, ArrangementVariant variant, double D) {
  const double B = d.quasi_triangle_B;
  const int p = static_cast<int>(A.subspaces.size());
  ArrangementPropagationResult res;
  res.certificate.p = p;

  if (p == 0) {
    auto conv = variant == ArrangementVariant::DGreaterOne
                    ? propagate_convex(d, ball, local, D)
                    : propagate_convex_unit(d, ball, local);
    res.certificate.chamber_constants = {conv.global.C};
    res.certificate.chamber_max = conv.global.C;
    res.certificate.final_C = conv.global.C;
    res.global = conv.global;
    return res;
  }

  A.validate_codim2();
  std::vector<geom::Hyperplane> cuts;
  cuts.reserve(p);
  for (const auto& N : A.subspaces) cuts.push_back(geom::hyperplane_containing(N));

  double cmax = 0.0;
  double out_alpha = 0.0;
  for (const auto& chamber : geom::chambers(ball, cuts)) {
    auto conv = variant == ArrangementVariant::DGreaterOne
                    ? propagate_convex(d, chamber.domain, local, D, chamber.witness)
                    : propagate_convex_unit(d, chamber.domain, local, chamber.witness);
    res.certificate.chamber_constants.push_back(conv.global.C);
    cmax = std::max(cmax, conv.global.C);
    out_alpha = conv.global.alpha;
  }
  res.certificate.chamber_max = cmax;
  res.certificate.final_C = B * B * cmax * (p + 1.0) * (p + 1.0);
  res.global = LogModulus{res.certificate.final_C, out_alpha,
                          LogModulus::Validity::AllPairs};
  return res;
}

VerifyReport verify_logmod(const PseudometricSpec& d, const LogModulus& bound,
                           const PairSampler& sampler, int n_pairs,
                           unsigned long seed, int n_threads) {
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vec, Vec>> pairs;
  pairs.reserve(n_pairs);
  for (int i = 0; i < n_pairs; ++i) pairs.push_back(sampler(rng));

  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LOGMOD_THREADS")) n_threads = std::atoi(env);
    if (n_threads <= 0) n_threads = 1;
  }

  std::vector<double> ratios(pairs.size(), 0.0);
  auto worker = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      const auto& [x, y] = pairs[i];
      double t = (x - y).norm();
      if (t <= 0.0 || t >= 1.0) continue;
      ratios[i] = d.evaluate(x, y) * std::pow(std::abs(std::log(t)), bound.alpha) /
                  bound.C;
    }
  };
  if (n_threads == 1) {
    worker(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (pairs.size() + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      size_t lo = t * chunk, hi = std::min(pairs.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  VerifyReport rep;
  rep.pairs_checked = static_cast<int>(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (ratios[i] > 1.0 + 1e-6) ++rep.violation_count;
    if (ratios[i] > rep.worst_ratio) {
      rep.worst_ratio = ratios[i];
      rep.worst_x = pairs[i].first;
      rep.worst_y = pairs[i].second;
    }
  }
  return rep;
}

PairSampler make_domain_sampler(const ConvexDomain& U, const Arrangement* obstacles,
                                double sep_min, double sep_max) {
  if (!U.has_ball()) throw std::invalid_argument("sampler needs a bounded domain");
  Arrangement obs;
  bool has_obs = obstacles != nullptr;
  if (has_obs) obs = *obstacles;
  return [U, obs, has_obs, sep_min, sep_max](std::mt19937_64& rng) {
    const int m = U.ambient_dim();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      Vec v(m);
      for (int i = 0; i < m; ++i) v[i] = gauss(rng);
      v.normalize();
      Vec x = U.ball_center() +
              U.ball_radius() * std::pow(unif(rng), 1.0 / m) * Vec(v);
      if (!U.contains(x)) continue;
      double t = std::exp(std::log(sep_min) +
                          unif(rng) * (std::log(sep_max) - std::log(sep_min)));
      Vec dir(m);
      for (int i = 0; i < m; ++i) dir[i] = gauss(rng);
      dir.normalize();
      Vec y = x + t * dir;
      if (!U.contains(y)) continue;
      if (has_obs && (obs.distance(x) < 1e-9 || obs.distance(y) < 1e-9)) continue;
      return std::make_pair(x, y);
    }
    throw std::runtime_error("pair sampler failed to find admissible pairs");
  };
}

}  // namespace logcert::logmod
