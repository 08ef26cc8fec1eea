#include "logcert/blowup.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace logcert::blowup {

void BlowupChart::validate() const {
  if (q < 2 || q > n) throw std::invalid_argument("need 2 <= q <= n");
  if (chart < 1 || chart > q) throw std::invalid_argument("chart index out of range");
}

double dist_to_center(const CVec& a, int q) {
  double s = 0;
  for (int i = 0; i < q; ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

CVec blowup_forward(const BlowupChart& chart, Cplx x_j, const CVec& v,
                    const CVec& tail) {
  chart.validate();
  if (v.size() != chart.q || tail.size() != chart.n - chart.q)
    throw std::invalid_argument("chart coordinate sizes do not match (n, q)");
  const Cplx vj = v[chart.chart - 1];
  if (std::abs(vj) == 0.0) throw std::invalid_argument("v_j = 0 in chart j");
  CVec out(chart.n);
  for (int i = 0; i < chart.q; ++i) out[i] = v[i] * x_j / vj;
  out[chart.chart - 1] = x_j;
  for (int i = chart.q; i < chart.n; ++i) out[i] = tail[i - chart.q];
  return out;
}

ChartPoint blowup_lift(const CVec& a, int n, int q) {
  if (a.size() != n) throw std::invalid_argument("point size != n");
  if (dist_to_center(a, q) <= 1e-12)
    throw std::invalid_argument("cannot lift a point on the blowup center");
  int best = 0;
  for (int i = 1; i < q; ++i)
    if (std::abs(a[i]) > std::abs(a[best])) best = i;
  ChartPoint p;
  p.chart = best + 1;
  p.x_j = a[best];
  p.v = CVec(q);
  for (int i = 0; i < q; ++i) p.v[i] = a[i] / a[best];
  p.tail = a.tail(n - q);
  return p;
}

std::string route_constants_to_json(const RouteConstants& K) {
  nlohmann::json j{{"K1", K.K1}, {"K2", K.K2}, {"K3", K.K3}};
  return j.dump(2);
}

RouteConstants route_constants_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  return RouteConstants{j.at("K1").get<double>(), j.at("K2").get<double>(),
                        j.at("K3").get<double>()};
}

double fiber_distance_upper(const CVec& a, const CVec& b, int q,
                            const RouteConstants& K) {
  const double t = (a - b).norm();
  if (t == 0.0) return 0.0;
  const double da = dist_to_center(a, q), db = dist_to_center(b, q);
  double best = std::numeric_limits<double>::infinity();
  if (da <= 1e-12 || db <= 1e-12) best = std::min(best, K.K1 * t);
  double dmin = std::min(da, db);
  if (dmin > 0) {
    best = std::min(best, K.K2 * t / (dmin * dmin));
  }
  if (dmin * dmin <= std::sqrt(t)) best = std::min(best, K.K3 * std::pow(t, 0.25));
  return best;
}

ChartGridOracle::ChartGridOracle(int resolution, double extent)
    : shape_(grid::Point2(-extent, -extent), grid::Point2(extent, extent),
             resolution, resolution) {
  const size_t ncells = shape_.values().size();
  metric_.gx.assign(ncells, 1.0);
  metric_.gy.assign(ncells, 1.0);
  for (int ix = 0; ix < resolution; ++ix)
    for (int iy = 0; iy < resolution; ++iy) {
      double v = shape_.cell_center(ix, iy).y();
      double fs = 1.0 / (1.0 + v * v);
      metric_.gy[shape_.idx(ix, iy)] = fs * fs;
    }
}

double ChartGridOracle::cell_diameter() const {
  return std::hypot(shape_.hx(), shape_.hy());
}

std::vector<double> ChartGridOracle::distances_from(const Eigen::Vector2d& a) const {
  std::vector<size_t> sources;
  if (a.norm() <= 1e-12) {
    // exceptional divisor: the column nearest x = 0
    int ix = shape_.nearest_cell({0.0, 0.0}).first;
    for (int iy = 0; iy < shape_.ny(); ++iy) sources.push_back(shape_.idx(ix, iy));
  } else {
    double x = a.x(), v = a.y() / a.x();
    auto [ix, iy] = shape_.nearest_cell({x, v});
    sources.push_back(shape_.idx(ix, iy));
  }
  return grid_shortest_paths(shape_, metric_, sources);
}

double ChartGridOracle::fiber_distance(const Eigen::Vector2d& a,
                                       const Eigen::Vector2d& b) const {
  auto dist = distances_from(a);
  if (b.norm() <= 1e-12) {
    int ix = shape_.nearest_cell({0.0, 0.0}).first;
    double best = std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < shape_.ny(); ++iy)
      best = std::min(best, dist[shape_.idx(ix, iy)]);
    return best;
  }
  auto [ix, iy] = shape_.nearest_cell({b.x(), b.y() / b.x()});
  return dist[shape_.idx(ix, iy)];
}

RouteConstants calibrate_route_constants(int resolution, int n_samples,
                                         unsigned long seed, double margin) {
  ChartGridOracle oracle(resolution);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample_cone = [&]() {
    // chart-1 cone |a2| <= |a1|, clearance bounded away from the grid scale
    double x = (unif(rng) < 0.5 ? -1 : 1) * (0.08 + 0.82 * unif(rng));
    double v = 2.0 * unif(rng) - 1.0;
    return Eigen::Vector2d(x, v * x);
  };

  double r1 = 0, r2 = 0, r3 = 0;
  for (int i = 0; i < n_samples; ++i) {
    Eigen::Vector2d b = sample_cone();
    // K1: divisor endpoint
    double d = oracle.fiber_distance(Eigen::Vector2d::Zero(), b);
    r1 = std::max(r1, d / b.norm());
    Eigen::Vector2d a = sample_cone();
    double t = (a - b).norm();
    if (t < 4 * oracle.cell_diameter()) continue;
    double dmin = std::min(a.norm(), b.norm());
    double od = oracle.fiber_distance(a, b);
    if (dmin * dmin > std::sqrt(t)) {
      r2 = std::max(r2, od * dmin * dmin / t);
    } else {
      r3 = std::max(r3, od / std::pow(t, 0.25));
    }
  }
  // K2 also covers well-separated pairs in general position
  return RouteConstants{margin * r1, margin * std::max(r2, 1e-6),
                        margin * std::max(r3, 1e-6)};
}

RouteConstants default_route_constants_2_2() {
  // Frozen output of calibrate_route_constants(64, 4000, 2024, 1.25).
  return RouteConstants{1.646890, 2.261014, 2.440884};
}

double transfer_base_constant(double M, double C_pullback, double K3) {
  // sup over t of 3 C_pb |log min(K3 t^{1/4}, 1/2)|^{-M} |log t|^{M}
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) {
    double t = std::exp(std::log(1e-8) + (std::log(0.5) - std::log(1e-8)) * i / 400.0);
    double d = std::min(K3 * std::pow(t, 0.25), 0.5);
    double val = std::pow(std::abs(std::log(t)) / std::abs(std::log(d)), M);
    sup = std::max(sup, val);
  }
  return 3.0 * C_pullback * sup;
}

TransferReport transfer_logmod(const grid::GridField& u, double M,
                               double C_pullback, const RouteConstants& K,
                               int n_pairs, unsigned long seed) {
  // the grid must avoid the center by at least one cell
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy)
      if (u.valid(ix, iy) && u.cell_center(ix, iy).norm() < u.h())
        throw std::invalid_argument("grid touches the blowup center");

  TransferReport rep;
  rep.C_base = transfer_base_constant(M, C_pullback, K.K3);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rx(0, u.nx() - 1), ry(0, u.ny() - 1);
  for (int i = 0; i < n_pairs; ++i) {
    int ax = rx(rng), ay = ry(rng), bx = rx(rng), by = ry(rng);
    if (!u.valid(ax, ay) || !u.valid(bx, by)) continue;
    double t = (u.cell_center(ax, ay) - u.cell_center(bx, by)).norm();
    if (t <= 0 || t >= 0.5) continue;
    double osc = std::abs(u.at(ax, ay) - u.at(bx, by));
    double ratio = osc * std::pow(std::abs(std::log(t)), M) / rep.C_base;
    ++rep.pairs_checked;
    if (ratio > 1.0 + 1e-9) ++rep.violations;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
  }
  return rep;
}

}  // namespace logcert::blowup
