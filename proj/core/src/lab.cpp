#include "logcert/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace logcert::lab {

namespace {

void check_ball_in_box(const GridField& u, const Point2& x, double s) {
  if (s < u.h()) throw std::invalid_argument("ball radius below grid spacing");
  if (x.x() - s < u.lo().x() || x.x() + s > u.hi().x() || x.y() - s < u.lo().y() ||
      x.y() + s > u.hi().y())
    throw std::invalid_argument("ball exits the box");
}

template <typename F>
void for_cells_in_ball(const GridField& u, const Point2& x, double s, F&& f) {
  int ix0 = std::max(0, static_cast<int>((x.x() - s - u.lo().x()) / u.hx()) - 1);
  int ix1 = std::min(u.nx() - 1, static_cast<int>((x.x() + s - u.lo().x()) / u.hx()) + 1);
  int iy0 = std::max(0, static_cast<int>((x.y() - s - u.lo().y()) / u.hy()) - 1);
  int iy1 = std::min(u.ny() - 1, static_cast<int>((x.y() + s - u.lo().y()) / u.hy()) + 1);
  const double s2 = s * s;
  for (int ix = ix0; ix <= ix1; ++ix)
    for (int iy = iy0; iy <= iy1; ++iy) {
      if (!u.valid(ix, iy)) continue;
      if ((u.cell_center(ix, iy) - x).squaredNorm() <= s2) f(ix, iy);
    }
}

// 5-point Laplacian, NaN when a neighbor is outside or masked.
double lap5(const GridField& u, int ix, int iy) {
  if (ix < 1 || iy < 1 || ix > u.nx() - 2 || iy > u.ny() - 2 || !u.valid(ix, iy) ||
      !u.valid(ix - 1, iy) || !u.valid(ix + 1, iy) || !u.valid(ix, iy - 1) ||
      !u.valid(ix, iy + 1))
    return std::numeric_limits<double>::quiet_NaN();
  return (u.at(ix - 1, iy) + u.at(ix + 1, iy) + u.at(ix, iy - 1) + u.at(ix, iy + 1) -
          4.0 * u.at(ix, iy)) /
         (u.h() * u.h());
}

}  // namespace

double sup_ball(const GridField& u, const Point2& x, double s) {
  check_ball_in_box(u, x, s);
  double best = -std::numeric_limits<double>::infinity();
  for_cells_in_ball(u, x, s, [&](int ix, int iy) { best = std::max(best, u.at(ix, iy)); });
  if (!std::isfinite(best)) throw std::runtime_error("empty ball");
  return best;
}

double mean_ball(const GridField& u, const Point2& x, double r) {
  check_ball_in_box(u, x, r);
  double sum = 0;
  long count = 0;
  for_cells_in_ball(u, x, r, [&](int ix, int iy) {
    sum += u.at(ix, iy);
    ++count;
  });
  if (count == 0) throw std::runtime_error("empty ball");
  return sum / count;
}

double jensen_gap(const GridField& u, const Point2& k_lo, const Point2& k_hi,
                  double s) {
  double margin = std::min(std::min(k_lo.x() - u.lo().x(), u.hi().x() - k_hi.x()),
                           std::min(k_lo.y() - u.lo().y(), u.hi().y() - k_hi.y()));
  if (margin <= 0) throw std::invalid_argument("K not strictly inside the box");
  double r0 = margin / 4.0;
  if (s >= r0 * r0 * r0) throw std::invalid_argument("scale s must be < r0^3");
  if (s < u.h()) throw std::invalid_argument("scale below grid spacing");
  double total = 0;
  const double cell_area = u.hx() * u.hy();
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      Point2 c = u.cell_center(ix, iy);
      if (c.x() < k_lo.x() || c.x() > k_hi.x() || c.y() < k_lo.y() || c.y() > k_hi.y())
        continue;
      if (!u.valid(ix, iy)) continue;
      total += std::abs(sup_ball(u, c, s) - u.at(ix, iy)) * cell_area;
    }
  return total;
}

ExponentFit jensen_exponent(const GridField& u, const Point2& k_lo,
                            const Point2& k_hi, const std::vector<double>& s_ladder) {
  if (s_ladder.size() < 2) throw std::invalid_argument("need >= 2 scales");
  ExponentFit fit;
  std::vector<double> lx, ly;
  for (double s : s_ladder) {
    double g = jensen_gap(u, k_lo, k_hi, s);
    fit.scales.push_back(s);
    fit.values.push_back(g);
    lx.push_back(std::log(s));
    ly.push_back(std::log(std::max(g, 1e-300)));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= lx.size();
  my /= ly.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.exponent = num / den;
  fit.intercept = my - fit.exponent * mx;
  return fit;
}

double lelong_ratio(const GridField& v, const Point2& x, double eps) {
  if (eps < 2.0 * v.h()) throw std::invalid_argument("eps must be >= 2h");
  check_ball_in_box(v, x, eps);
  const double h2 = v.h() * v.h();
  double mass = 0;
  for_cells_in_ball(v, x, eps, [&](int ix, int iy) {
    double l = lap5(v, ix, iy);
    if (std::isfinite(l)) mass += l * h2;
  });
  // n = 1: exponent -2n+2 = 0; the volume term is the omega-mass of the ball
  return mass + M_PI * eps * eps;
}

double LelongSweep::max_over_min() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double v : lambda_logeps) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

bool LelongSweep::positive_mass_flag(double growth_tol) const {
  // positive Lelong mass shows as growth of lambda * |log eps| as eps shrinks
  size_t i_small = 0, i_large = 0;
  for (size_t i = 1; i < eps.size(); ++i) {
    if (eps[i] < eps[i_small]) i_small = i;
    if (eps[i] > eps[i_large]) i_large = i;
  }
  return lambda_logeps[i_small] > (1.0 + growth_tol) * lambda_logeps[i_large];
}

LelongSweep lelong_sweep(const GridField& v, const Point2& x,
                         const std::vector<double>& eps_ladder) {
  LelongSweep sw;
  for (double e : eps_ladder) {
    sw.eps.push_back(e);
    sw.lambda_logeps.push_back(lelong_ratio(v, x, e) * std::abs(std::log(e)));
  }
  return sw;
}

MollifyResult mollify(const GridField& u, double eps, double theta_const) {
  if (eps < 2.0 * u.h()) throw std::invalid_argument("eps must be >= 2h");
  const int w = static_cast<int>(std::ceil(eps / u.h()));
  // radial bump chi(|zeta|^2/eps^2), chi(s) = exp(-1/(1-s)) on s < 1
  std::vector<double> ker((2 * w + 1) * (2 * w + 1), 0.0);
  for (int dx = -w; dx <= w; ++dx)
    for (int dy = -w; dy <= w; ++dy) {
      double s = (dx * dx * u.hx() * u.hx() + dy * dy * u.hy() * u.hy()) / (eps * eps);
      if (s < 1.0) ker[(dx + w) * (2 * w + 1) + dy + w] = std::exp(-1.0 / (1.0 - s));
    }
  double ker_total = 0;
  for (double k : ker) ker_total += k;
  GridField out(u.lo(), u.hi(), u.nx(), u.ny());
  out.sup_bound = u.sup_bound;
  std::vector<char> complete(u.values().size(), 0);
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      double num = 0, den = 0;
      for (int dx = std::max(-w, -ix); dx <= std::min(w, u.nx() - 1 - ix); ++dx)
        for (int dy = std::max(-w, -iy); dy <= std::min(w, u.ny() - 1 - iy); ++dy) {
          if (!u.valid(ix + dx, iy + dy)) continue;
          double k = ker[(dx + w) * (2 * w + 1) + dy + w];
          num += k * u.at(ix + dx, iy + dy);
          den += k;
        }
      if (den > 0)
        out.at(ix, iy) = num / den;
      else
        out.set_mask(ix, iy, false);
      complete[u.idx(ix, iy)] = den >= ker_total * (1.0 - 1e-12) ? 1 : 0;
    }
  // defect only where the kernel support was fully inside the (unmasked) grid
  double worst = std::numeric_limits<double>::infinity();
  for (int ix = 1; ix < u.nx() - 1; ++ix)
    for (int iy = 1; iy < u.ny() - 1; ++iy) {
      if (!complete[u.idx(ix, iy)] || !complete[u.idx(ix - 1, iy)] ||
          !complete[u.idx(ix + 1, iy)] || !complete[u.idx(ix, iy - 1)] ||
          !complete[u.idx(ix, iy + 1)])
        continue;
      double l = lap5(out, ix, iy);
      if (std::isfinite(l)) worst = std::min(worst, 0.25 * l + theta_const);
    }
  if (!std::isfinite(worst)) throw std::invalid_argument("eps too large for the grid");
  return {std::move(out), -worst};
}

double measured_modulus(const GridField& u, double r) {
  const int w = static_cast<int>(std::ceil(r / u.h()));
  double best = 0;
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      if (!u.valid(ix, iy)) continue;
      // half-plane of offsets to avoid double counting
      for (int dx = 0; dx <= w; ++dx)
        for (int dy = (dx == 0 ? 1 : -w); dy <= w; ++dy) {
          if (dx * dx + dy * dy > w * w) continue;
          double t = std::hypot(dx * u.hx(), dy * u.hy());
          if (t > r) continue;
          int jx = ix + dx, jy = iy + dy;
          if (!u.in_grid(jx, jy) || !u.valid(jx, jy)) continue;
          best = std::max(best, std::abs(u.at(ix, iy) - u.at(jx, jy)));
        }
    }
  return best;
}

CampanatoReport campanato_distance_check(const GridField& u, double theta_const,
                                         double delta, double M, double C0,
                                         const Point2& x0, unsigned long seed) {
  CampanatoReport rep;
  // 1. log^{2M} modulus hypothesis on sampled pairs
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rx(0, u.nx() - 1), ry(0, u.ny() - 1);
  for (int i = 0; i < 20000; ++i) {
    int ax = rx(rng), ay = ry(rng), bx = rx(rng), by = ry(rng);
    if (!u.valid(ax, ay) || !u.valid(bx, by)) continue;
    double t = (u.cell_center(ax, ay) - u.cell_center(bx, by)).norm();
    if (t <= 0 || t >= 0.5) continue;
    double ratio = std::abs(u.at(ax, ay) - u.at(bx, by)) *
                   std::pow(std::abs(std::log(t)), 2.0 * M) / C0;
    rep.worst_hypothesis_ratio = std::max(rep.worst_hypothesis_ratio, ratio);
  }
  rep.hypothesis_ok = rep.worst_hypothesis_ratio <= 1.0 + 1e-9;
  if (!rep.hypothesis_ok)
    throw std::runtime_error("log^{2M} modulus hypothesis fails for given C0");

  // 2. conformal factor Lap u / 4 + theta + delta
  const size_t ncells = u.values().size();
  std::vector<double> phi(ncells, theta_const + delta);
  rep.min_conformal = theta_const + delta;
  for (int ix = 1; ix < u.nx() - 1; ++ix)
    for (int iy = 1; iy < u.ny() - 1; ++iy) {
      double l = lap5(u, ix, iy);
      if (!std::isfinite(l)) continue;
      phi[u.idx(ix, iy)] = 0.25 * l + theta_const + delta;
      rep.min_conformal = std::min(rep.min_conformal, phi[u.idx(ix, iy)]);
    }
  if (rep.min_conformal <= 0)
    throw std::invalid_argument("nonpositive conformal factor");

  // 3. geodesics from a base cell on the box edge midline
  Point2 base(0.85 * u.hi().x() + 0.15 * u.lo().x(), 0.5 * (u.lo().y() + u.hi().y()));
  auto [bx, by] = u.nearest_cell(base);
  auto d = grid_shortest_paths(u, phi, {u.idx(bx, by)});

  // 4. dyadic ball averages around x0; their step differences drive the
  // Campanato iteration and stay grid-converged (pointwise values at the
  // cusp converge only logarithmically in h)
  auto [ox, oy] = u.nearest_cell(x0);
  double half = 0.5 * std::min(u.hi().x() - u.lo().x(), u.hi().y() - u.lo().y());
  double r0 = 0.25 * half;
  std::vector<double> avg_r;
  {
    double r = r0;
    while (r >= 2.0 * u.h() && avg_r.size() < 5) {
      double sum = 0;
      long cnt = 0;
      for_cells_in_ball(u, u.cell_center(ox, oy), r, [&](int ix, int iy) {
        if (std::isfinite(d[u.idx(ix, iy)])) {
          sum += d[u.idx(ix, iy)];
          ++cnt;
        }
      });
      avg_r.push_back(sum / cnt);
      r *= 0.5;
    }
  }
  if (avg_r.size() < 4) throw std::invalid_argument("grid too coarse for 4 dyadic scales");
  for (size_t j = 0; j + 1 < avg_r.size(); ++j) {
    double L = std::abs(std::log(r0 * std::pow(0.5, double(j))));
    // step bound |d_{r/2} - d_r| <= C5 |log r|^{-M}
    rep.C5 = std::max(rep.C5, std::abs(avg_r[j + 1] - avg_r[j]) * std::pow(L, M));
  }

  // 5. final bound: modulus of the geodesic distance along a probe ray from
  // a fixed anchor near x0, fitted against |log separation|
  Point2 center = u.cell_center(ox, oy);
  Point2 ray = (u.cell_center(bx, by) - center).normalized();
  double rho0 = r0 / 16.0;
  auto [px, py] = u.nearest_cell(center + rho0 * ray);
  double d_anchor = d[u.idx(px, py)];
  std::vector<double> lx, ly;
  for (double rho : {r0, r0 / 2, r0 / 4, r0 / 8}) {
    auto [tx, ty] = u.nearest_cell(center + rho * ray);
    double t = (u.cell_center(tx, ty) - u.cell_center(px, py)).norm();
    double gap = std::abs(d[u.idx(tx, ty)] - d_anchor);
    rep.radii.push_back(t);
    rep.gaps.push_back(gap);
    double L = std::abs(std::log(t));
    lx.push_back(std::log(L));
    ly.push_back(std::log(std::max(gap, 1e-300)));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= lx.size();
  my /= ly.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  rep.fitted_exponent = -num / den;
  return rep;
}

ModulusFit fit_log_modulus(const GridField& u, const std::vector<double>& M_grid,
                           double M_max, int n_pairs, unsigned long seed) {
  // per-half-decade sup oscillation; random pairs plus pairs anchored at the
  // field extrema (which typically realize the sup)
  const double bin_width = 0.5 * std::log(10.0);
  std::vector<double> osc, targ;  // per-bin sup oscillation and its separation
  auto record = [&](int ax, int ay, int bx, int by) {
    if (!u.valid(ax, ay) || !u.valid(bx, by)) return;
    double t = (u.cell_center(ax, ay) - u.cell_center(bx, by)).norm();
    if (t <= 0 || t >= 0.5) return;
    int bin = static_cast<int>(std::abs(std::log(t)) / bin_width);
    if (bin >= static_cast<int>(osc.size())) {
      osc.resize(bin + 1, 0.0);
      targ.resize(bin + 1, 1.0);
    }
    double o = std::abs(u.at(ax, ay) - u.at(bx, by));
    if (o > osc[bin]) {
      osc[bin] = o;
      targ[bin] = t;
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rx(0, u.nx() - 1), ry(0, u.ny() - 1);
  int mnx = 0, mny = 0, mxx = 0, mxy = 0;
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      if (!u.valid(ix, iy)) continue;
      if (u.at(ix, iy) < u.at(mnx, mny)) mnx = ix, mny = iy;
      if (u.at(ix, iy) > u.at(mxx, mxy)) mxx = ix, mxy = iy;
    }
  for (int i = 0; i < n_pairs; ++i) {
    int ax = rx(rng), ay = ry(rng);
    record(ax, ay, rx(rng), ry(rng));
    record(mnx, mny, ax, ay);
    record(mxx, mxy, ax, ay);
  }
  for (int ix = 0; ix < u.nx(); ++ix)
    for (int iy = 0; iy < u.ny(); ++iy) {
      record(mnx, mny, ix, iy);
      record(mxx, mxy, ix, iy);
    }

  std::vector<double> lL, lo;
  for (size_t b = 0; b < osc.size(); ++b) {
    if (osc[b] <= 0) continue;
    lL.push_back(std::log(std::abs(std::log(targ[b]))));
    lo.push_back(std::log(osc[b]));
  }
  ModulusFit fit;
  if (lL.size() < 2) {
    fit.at_infinity = true;
    fit.M = std::numeric_limits<double>::infinity();
    return fit;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lL.size(); ++i) mx += lL[i], my += lo[i];
  mx /= lL.size();
  my /= lL.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < lL.size(); ++i) {
    num += (lL[i] - mx) * (lo[i] - my);
    den += (lL[i] - mx) * (lL[i] - mx);
  }
  fit.M = -num / den;
  fit.C = std::exp(my + fit.M * mx);

  // Lipschitz-type fields decay like exp(-|log t|), faster than every
  // resolvable log power: detect them by comparing the power-law fit in
  // (log L, log osc) with an exponential fit in (L, log osc).
  double res_pow = 0;
  for (size_t i = 0; i < lL.size(); ++i) {
    double e = lo[i] - (my - fit.M * (lL[i] - mx));
    res_pow += e * e;
  }
  {
    double sx = 0, sy = 0;
    std::vector<double> L(lL.size());
    for (size_t i = 0; i < lL.size(); ++i) {
      L[i] = std::exp(lL[i]);
      sx += L[i];
      sy += lo[i];
    }
    sx /= L.size();
    sy /= L.size();
    double n2 = 0, d2 = 0;
    for (size_t i = 0; i < L.size(); ++i) {
      n2 += (L[i] - sx) * (lo[i] - sy);
      d2 += (L[i] - sx) * (L[i] - sx);
    }
    double slope = n2 / d2, res_exp = 0;
    for (size_t i = 0; i < L.size(); ++i) {
      double e = lo[i] - (sy + slope * (L[i] - sx));
      res_exp += e * e;
    }
    if (slope < 0 && res_exp < 0.25 * res_pow) fit.at_max = true;
  }

  if (fit.M > M_max || fit.at_max) {
    fit.at_max = true;
    fit.M = M_max;
  } else if (!M_grid.empty()) {
    double best_res = std::numeric_limits<double>::infinity();
    for (double Mc : M_grid) {
      double icept = my + Mc * mx, res = 0;
      for (size_t i = 0; i < lL.size(); ++i) {
        double e = lo[i] - (icept - Mc * lL[i]);
        res += e * e;
      }
      if (res < best_res) {
        best_res = res;
        fit.M = Mc;
        fit.C = std::exp(icept);
      }
    }
  }
  return fit;
}

}  // namespace logcert::lab
