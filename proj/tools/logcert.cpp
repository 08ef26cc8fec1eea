// Command-line front door: chain / logmod / blowup / budget / lab experiments
// with deterministic seeding, JSON config files and machine-readable reports.
#include <CLI11.hpp>
#include <json.hpp>

#include "logcert/blowup.hpp"
#include "logcert/bounds.hpp"
#include "logcert/chains.hpp"
#include "logcert/lab.hpp"
#include "logcert/logmod.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace logcert;

namespace {

struct Report {
  std::string status = "pass";
  json metrics = json::object();
  json certificate;  // null unless set
  std::vector<std::string> artifacts;
};

int emit(const Report& r, const std::string& out_dir, const std::string& name) {
  json j;
  j["status"] = r.status;
  j["metrics"] = r.metrics;
  if (!r.certificate.is_null()) j["certificate"] = r.certificate;
  j["artifacts"] = r.artifacts;
  std::string text = j.dump(2) + "\n";
  fs::create_directories(out_dir);
  std::ofstream(out_dir + "/" + name + ".json") << text;
  std::cout << text;
  return r.status == "pass" ? 0 : 2;
}

// JSON config merged under explicit flags; flags win, unknown keys rejected.
void merge_config(CLI::App* cmd, const std::string& cfg_path) {
  if (cfg_path.empty()) return;
  std::ifstream in(cfg_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + cfg_path);
  json cfg = json::parse(in);
  for (auto& [key, val] : cfg.items()) {
    CLI::Option* o = cmd->get_option_no_throw("--" + key);
    if (!o) throw CLI::ValidationError("--config", "unknown key: " + key);
    if (o->count() > 0) continue;
    o->add_result(val.is_string() ? val.get<std::string>() : val.dump());
    o->run_callback();
  }
}

void write_gnuplot(const std::string& out_dir, const std::string& name,
                   const std::string& csv, const std::string& xlabel,
                   const std::string& ylabel, int xcol, int ycol, bool logx,
                   bool logy, std::vector<std::string>& artifacts) {
  std::string path = out_dir + "/" + name + ".gp";
  std::ofstream gp(path);
  gp << "set datafile separator ','\n";
  if (logx) gp << "set logscale x\n";
  if (logy) gp << "set logscale y\n";
  gp << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n"
     << "plot '" << csv << "' using " << xcol << ":" << ycol
     << " with linespoints title '" << name << "'\n";
  artifacts.push_back(path);
}

json chain_certificate_json(const chains::ChainResult& res) {
  json c;
  c["clearance_constant"] = res.certificate.clearance_constant;
  c["length_bound"] = res.certificate.length_bound;
  c["measured_length"] = res.certificate.measured_length;
  c["min_clearance_ratio"] = res.certificate.measured_min_clearance_ratio;
  c["vertices"] = res.chain.vertices.size();
  return c;
}

chains::ChainInstance zaxis_instance() {
  geom::Vec base = geom::Vec::Zero(3);
  geom::Mat dirs(3, 1);
  dirs << 0, 0, 1;
  chains::ChainInstance inst;
  inst.arrangement.subspaces.emplace_back(base, dirs);
  inst.x = geom::Vec(3);
  inst.x << 1.0, 0.3, 0.2;
  inst.y = geom::Vec(3);
  inst.y << -0.8, 0.5, -0.1;
  return inst;
}

int run_chain(const std::string& out, int m, int k, int instances,
              unsigned long seed, bool zaxis, bool selftest) {
  Report rep;
  std::mt19937_64 rng(seed);
  int failures = 0;
  double worst_len_slack = std::numeric_limits<double>::infinity();
  double worst_clear_ratio = std::numeric_limits<double>::infinity();
  int total = (zaxis || selftest) ? 1 : instances;
  for (int i = 0; i < total; ++i) {
    chains::ChainInstance inst = (zaxis || selftest)
                                     ? zaxis_instance()
                                     : chains::make_random_instance(m, k, rng);
    auto res = chains::build_safe_chain(inst.x, inst.y, inst.arrangement);
    auto check = chains::verify_chain(res.chain, inst.arrangement,
                                      res.certificate.clearance_constant);
    if (!check.pass()) ++failures;
    worst_len_slack = std::min(worst_len_slack,
                               res.certificate.length_bound - check.measured_length);
    worst_clear_ratio = std::min(worst_clear_ratio, check.min_clearance_ratio);
    if (i + 1 == total) rep.certificate = chain_certificate_json(res);
  }
  rep.metrics["instances"] = total;
  rep.metrics["failures"] = failures;
  rep.metrics["worst_length_slack"] = worst_len_slack;
  rep.metrics["worst_clearance_ratio"] = worst_clear_ratio;
  rep.metrics["chain_constant"] = chains::chain_constant(zaxis || selftest ? 1 : k);
  if (failures > 0) rep.status = "fail";
  return emit(rep, out, "chain_report");
}

logmod::PseudometricSpec synthetic_metric(double C0, double alpha) {
  logmod::PseudometricSpec d;
  d.quasi_triangle_B = 1.0;
  d.evaluate = [C0, alpha](const geom::Vec& x, const geom::Vec& y) {
    double t = (x - y).norm();
    if (t <= 0) return 0.0;
    double L = std::abs(std::log(t));
    return C0 * std::min(1.0, std::pow(L, -alpha));
  };
  return d;
}

int run_logmod(const std::string& out, const std::string& variant, int pairs,
               unsigned long seed, bool plant, double alpha, int threads,
               bool selftest) {
  Report rep;
  geom::Vec c0 = geom::Vec::Zero(2);
  auto U = geom::ConvexDomain::ball(c0, 0.5);
  double C0 = 1.0;
  if (selftest) pairs = std::min(pairs, 2000);

  logmod::LogModulus local{C0, alpha};
  logmod::LogModulus global;
  json cert;
  geom::Arrangement obstacles;
  const geom::Arrangement* obs_ptr = nullptr;
  logmod::PseudometricSpec d = synthetic_metric(C0, alpha);
  if (variant == "convex") {
    auto res = logmod::propagate_convex(d, U, local, 2.0);
    global = res.global;
    cert = {{"C1", res.certificate.C1}, {"C2", res.certificate.C2},
            {"M", res.certificate.M},   {"r", res.certificate.r},
            {"D", res.certificate.D},   {"C", global.C}};
  } else if (variant == "unit") {
    if (alpha <= 1.0) throw CLI::ValidationError("--alpha", "unit route needs alpha > 1");
    auto res = logmod::propagate_convex_unit(d, U, local);
    global = res.global;
    cert = {{"C1", res.certificate.C1}, {"C2", res.certificate.C2},
            {"alpha_out", global.alpha}, {"C", global.C}};
  } else if (variant == "arrangement") {
    obstacles.subspaces.push_back(geom::AffineSubspace::point(c0));
    obs_ptr = &obstacles;
    auto res = logmod::propagate_ball_minus_arrangement(
        d, U, obstacles, local, logmod::ArrangementVariant::DGreaterOne, 2.0);
    global = res.global;
    cert = {{"chamber_max", res.certificate.chamber_max},
            {"p", res.certificate.p},
            {"C", global.C}};
  } else {
    throw CLI::ValidationError("--variant", "expected convex|unit|arrangement");
  }

  logmod::PseudometricSpec probe = d;
  if (plant) {
    double Cg = global.C, ag = global.alpha;
    auto base = d.evaluate;
    probe.evaluate = [base, Cg, ag](const geom::Vec& x, const geom::Vec& y) {
      double t = (x - y).norm();
      double v = base(x, y);
      if (t > 0 && t < 1e-5) v += 10.0 * Cg * std::pow(std::abs(std::log(t)), -ag);
      return v;
    };
  }
  auto sampler = logmod::make_domain_sampler(U, obs_ptr);
  auto check = logmod::verify_logmod(probe, global, sampler, pairs, seed, threads);
  rep.metrics["variant"] = variant;
  rep.metrics["global_C"] = global.C;
  rep.metrics["global_alpha"] = global.alpha;
  rep.metrics["pairs_checked"] = check.pairs_checked;
  rep.metrics["violations"] = check.violation_count;
  rep.metrics["worst_ratio"] = check.worst_ratio;
  rep.metrics["planted"] = plant;
  rep.certificate = cert;
  if (!check.pass()) rep.status = "fail";
  return emit(rep, out, "logmod_report");
}

int run_blowup(const std::string& out, int n, int q, int points, int pairs,
               int resolution, unsigned long seed, bool selftest) {
  Report rep;
  if (selftest) {
    points = std::min(points, 200);
    pairs = std::min(pairs, 100);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst_rt = 0;
  for (int i = 0; i < points; ++i) {
    blowup::CVec a(n);
    for (int j = 0; j < n; ++j) a[j] = {unif(rng), unif(rng)};
    if (blowup::dist_to_center(a, q) < 1e-3) continue;
    auto p = blowup::blowup_lift(a, n, q);
    blowup::BlowupChart chart{n, q, p.chart};
    blowup::CVec back = blowup_forward(chart, p.x_j, p.v, p.tail);
    worst_rt = std::max(worst_rt, (back - a).norm());
  }
  rep.metrics["roundtrip_points"] = points;
  rep.metrics["roundtrip_max_error"] = worst_rt;

  // route upper bounds vs the Dijkstra oracle on the (n=2, q=2) real slice
  blowup::ChartGridOracle oracle(resolution);
  auto K = blowup::default_route_constants_2_2();
  int checked = 0, covered = 0;
  double tol = 2.0 * oracle.cell_diameter();
  auto sample_cone = [&]() {
    double x = (unif(rng) < 0 ? -1 : 1) * (0.08 + 0.41 * (unif(rng) + 1.0));
    return Eigen::Vector2d(x, unif(rng) * x);
  };
  for (int i = 0; i < pairs; ++i) {
    Eigen::Vector2d a = sample_cone(), b = sample_cone();
    blowup::CVec ca(2), cb(2);
    ca << a.x(), a.y();
    cb << b.x(), b.y();
    double bound = blowup::fiber_distance_upper(ca, cb, 2, K);
    double od = oracle.fiber_distance(a, b);
    ++checked;
    if (bound >= od - tol) ++covered;
  }
  rep.metrics["oracle_pairs"] = checked;
  rep.metrics["oracle_coverage"] = checked ? double(covered) / checked : 1.0;
  rep.certificate = json::parse(blowup::route_constants_to_json(K));
  if (worst_rt > 1e-12 || (checked && double(covered) / checked < 0.999))
    rep.status = "fail";
  return emit(rep, out, "blowup_report");
}

int run_budget(const std::string& out, double gamma, double D, double B, int n,
               double t_lo, double t_hi, bool improved, double C4, bool gnuplot,
               bool selftest) {
  Report rep;
  bounds::ApproxSchedule s;
  s.n = n;
  s.B = B;
  s.D = D;
  if (selftest) {
    // the m-selection example: gamma=1/2, B=1, t=1e-12 picks m = m0 + 1 = 8
    bounds::ApproxSchedule st;
    st.n = 2;
    st.B = 1.0;
    int m = bounds::choose_m(st, 1e-12, 0.5);
    rep.metrics["choose_m_example"] = m;
    if (m != 8) rep.status = "fail";
    return emit(rep, out, "budget_report");
  }
  auto cert = bounds::certify_weak_logmod(s, gamma, t_lo, t_hi, improved, C4);

  std::string csv = out + "/budget_sweep.csv";
  fs::create_directories(out);
  std::ofstream f(csv);
  f.precision(17);
  f << "t,m,term1,term2,term3,envelope,envelope_logt_gamma\n";
  for (size_t i = 0; i < cert.t_grid.size(); ++i) {
    double t = cert.t_grid[i];
    int m = bounds::choose_m(s, t, gamma, improved, C4);
    auto e = bounds::weak_logmod_envelope(s, t, m, gamma, improved, C4);
    f << t << "," << m << "," << e.term1 << "," << e.term2 << "," << e.term3 << ","
      << e.total() << "," << e.total() * std::pow(std::abs(std::log(t)), gamma)
      << "\n";
  }
  rep.artifacts.push_back(csv);
  if (gnuplot)
    write_gnuplot(out, "budget", "budget_sweep.csv", "t", "envelope", 1, 6, true,
                  true, rep.artifacts);
  rep.metrics["c"] = cert.c;
  rep.metrics["fitted_slope"] = cert.fitted_slope;
  rep.metrics["gamma"] = gamma;
  if (!std::isfinite(cert.c) || cert.fitted_slope > -gamma + 0.05)
    rep.status = "fail";
  return emit(rep, out, "budget_report");
}

grid::GridField clipped_log_field(double half, int nres) {
  return grid::GridField::from_function(
      {-half, -half}, {half, half}, nres, nres,
      [](const grid::Point2& p) { return std::max(std::log(p.norm()), -1.0); });
}

int run_lab_jensen(const std::string& out, int nres, bool gnuplot, bool selftest) {
  Report rep;
  if (selftest) {
    auto c = grid::GridField::from_function({-4, -4}, {4, 4}, 256, 256,
                                            [](const grid::Point2&) { return 3.5; });
    double g = lab::jensen_gap(c, {-0.5, -0.5}, {0.5, 0.5}, 0.1);
    auto lin = grid::GridField::from_function(
        {-4, -4}, {4, 4}, 256, 256, [](const grid::Point2& p) { return p.x(); });
    double gl = lab::jensen_gap(lin, {-0.5, -0.5}, {0.5, 0.5}, 0.1);
    rep.metrics["constant_gap"] = g;
    rep.metrics["linear_gap"] = gl;
    // linear field: sup over the ball is value + Lip * (s + cell offsets)
    if (g > 1e-12 || gl > (0.1 + 2.0 * lin.h()) * 1.0 + 1e-9) rep.status = "fail";
    return emit(rep, out, "lab_jensen_report");
  }
  auto u = clipped_log_field(4.0, nres);
  std::vector<double> ladder{0.05, 0.1, 0.2, 0.4};
  auto fit = lab::jensen_exponent(u, {-1, -1}, {1, 1}, ladder);
  std::string csv = out + "/jensen_curve.csv";
  fs::create_directories(out);
  std::ofstream f(csv);
  f.precision(17);
  f << "s,gap\n";
  for (size_t i = 0; i < fit.scales.size(); ++i)
    f << fit.scales[i] << "," << fit.values[i] << "\n";
  rep.artifacts.push_back(csv);
  if (gnuplot)
    write_gnuplot(out, "jensen", "jensen_curve.csv", "s", "gap", 1, 2, true, true,
                  rep.artifacts);
  rep.metrics["fitted_exponent"] = fit.exponent;
  rep.metrics["scales"] = fit.scales.size();
  if (fit.exponent < 2.0 / 3.0 - 0.1) rep.status = "fail";
  return emit(rep, out, "lab_jensen_report");
}

int run_lab_mass(const std::string& out, int nres, bool gnuplot, bool selftest) {
  Report rep;
  if (selftest) {
    auto v = grid::GridField::from_function(
        {-0.2, -0.2}, {0.2, 0.2}, 128, 128,
        [](const grid::Point2& p) { return p.squaredNorm(); });
    double lam = lab::lelong_ratio(v, {0, 0}, 0.05);
    rep.metrics["smooth_lambda"] = lam;
    // smooth field: O(eps^2), far below 1/|log eps|
    if (lam > 0.5 / std::abs(std::log(0.05))) rep.status = "fail";
    return emit(rep, out, "lab_mass_report");
  }
  auto clipped = clipped_log_field(0.2, nres);
  auto unclipped = grid::GridField::from_function(
      {-0.2, -0.2}, {0.2, 0.2}, nres, nres,
      [](const grid::Point2& p) { return std::log(p.norm()); });
  std::vector<double> ladder{1e-3, 3.16e-3, 0.01, 0.0316, 0.1};
  auto sc = lab::lelong_sweep(clipped, {0, 0}, ladder);
  auto su = lab::lelong_sweep(unclipped, {0, 0}, ladder);
  std::string csv = out + "/lelong_curve.csv";
  fs::create_directories(out);
  std::ofstream f(csv);
  f.precision(17);
  f << "eps,clipped_lambda_logeps,unclipped_lambda_logeps\n";
  for (size_t i = 0; i < ladder.size(); ++i)
    f << ladder[i] << "," << sc.lambda_logeps[i] << "," << su.lambda_logeps[i]
      << "\n";
  rep.artifacts.push_back(csv);
  if (gnuplot)
    write_gnuplot(out, "lelong", "lelong_curve.csv", "eps", "lambda|log eps|", 1, 2,
                  true, false, rep.artifacts);
  rep.metrics["clipped_flagged"] = sc.positive_mass_flag();
  rep.metrics["unclipped_flagged"] = su.positive_mass_flag();
  rep.metrics["clipped_sup"] =
      *std::max_element(sc.lambda_logeps.begin(), sc.lambda_logeps.end());
  if (sc.positive_mass_flag() || !su.positive_mass_flag()) rep.status = "fail";
  return emit(rep, out, "lab_mass_report");
}

int run_lab_mollify(const std::string& out, int nres, bool selftest) {
  Report rep;
  if (selftest) {
    auto v = grid::GridField::from_function(
        {-1, -1}, {1, 1}, 128, 128,
        [](const grid::Point2& p) { return p.squaredNorm(); });
    auto res = lab::mollify(v, 0.1, 0.0);
    rep.metrics["smooth_defect"] = res.curvature_defect;
    if (res.curvature_defect > 1e-6) rep.status = "fail";
    return emit(rep, out, "lab_mollify_report");
  }
  std::vector<double> ladder{1e-3, 3.16e-3, 0.01, 0.0316, 0.1};
  double worst_err_slack = std::numeric_limits<double>::infinity();
  double max_defect_logeps = 0;
  json rows = json::array();
  for (double eps : ladder) {
    double half = std::min(1.0, 16.0 * eps);  // resolution scales with eps
    auto u = clipped_log_field(half, nres);
    auto res = lab::mollify(u, eps, 0.0);
    double err = 0;
    for (int ix = 0; ix < u.nx(); ++ix)
      for (int iy = 0; iy < u.ny(); ++iy)
        if (u.valid(ix, iy) && res.field.valid(ix, iy))
          err = std::max(err, std::abs(res.field.at(ix, iy) - u.at(ix, iy)));
    double omega = lab::measured_modulus(u, eps);
    worst_err_slack = std::min(worst_err_slack, omega - err);
    max_defect_logeps = std::max(
        max_defect_logeps, res.curvature_defect * std::abs(std::log(eps)));
    rows.push_back({{"eps", eps}, {"sup_error", err}, {"omega", omega},
                    {"defect_logeps", res.curvature_defect * std::abs(std::log(eps))}});
  }
  rep.metrics["sweep"] = rows;
  rep.metrics["worst_error_slack"] = worst_err_slack;
  rep.metrics["max_defect_logeps"] = max_defect_logeps;
  if (worst_err_slack < -1e-12 || max_defect_logeps > 1.0) rep.status = "fail";
  return emit(rep, out, "lab_mollify_report");
}

grid::GridField campanato_profile(int nres, double c, double M) {
  return grid::GridField::from_function(
      {-0.7, -0.7}, {0.7, 0.7}, nres, nres, [c, M](const grid::Point2& p) {
        double L = std::abs(std::log(p.norm()));
        return c * std::pow(1.0 + L, -2.0 * M);
      });
}

int run_lab_campanato(const std::string& out, int nres, bool selftest) {
  Report rep;
  double M = 2.0;
  if (selftest) {
    auto z = grid::GridField::from_function({-0.7, -0.7}, {0.7, 0.7}, 128, 128,
                                            [](const grid::Point2&) { return 0.0; });
    auto r = lab::campanato_distance_check(z, 1.0, 0.0, M, 1.0);
    rep.metrics["zero_field_C5"] = r.C5;
    rep.metrics["min_conformal"] = r.min_conformal;
    if (!r.hypothesis_ok || r.min_conformal != 1.0) rep.status = "fail";
    return emit(rep, out, "lab_campanato_report");
  }
  auto u = campanato_profile(nres, 0.04, M);
  auto r = lab::campanato_distance_check(u, 0.0, 1e-6, M, 1.0);
  rep.metrics["fitted_exponent"] = r.fitted_exponent;
  rep.metrics["C5"] = r.C5;
  rep.metrics["min_conformal"] = r.min_conformal;
  rep.metrics["worst_hypothesis_ratio"] = r.worst_hypothesis_ratio;
  json gaps = json::array();
  for (size_t i = 0; i < r.radii.size(); ++i)
    gaps.push_back({{"r", r.radii[i]}, {"gap", r.gaps[i]}});
  rep.metrics["dyadic_gaps"] = gaps;
  if (!r.pass(M)) rep.status = "fail";
  return emit(rep, out, "lab_campanato_report");
}

grid::GridField edge_log_field(int nx, double width, double Mexp) {
  double hx = width / nx;
  return grid::GridField::from_function(
      {-hx / 2, 0.0}, {width - hx / 2, 4.0 * hx}, nx, 4,
      [Mexp](const grid::Point2& p) {
        double a = std::abs(p.x());
        if (a == 0.0) return 0.0;
        return std::min(1.0, std::pow(std::abs(std::log(a)), -Mexp));
      });
}

int run_lab_fitmod(const std::string& out, bool selftest) {
  Report rep;
  if (selftest) {
    auto c = grid::GridField::from_function({0, 0}, {1, 1}, 64, 64,
                                            [](const grid::Point2&) { return 2.0; });
    auto fc = lab::fit_log_modulus(c);
    auto lin = grid::GridField::from_function(
        {0, 0}, {1, 1}, 256, 256, [](const grid::Point2& p) { return p.x(); });
    auto fl = lab::fit_log_modulus(lin);
    rep.metrics["constant_at_infinity"] = fc.at_infinity;
    rep.metrics["lipschitz_at_max"] = fl.at_max;
    if (!fc.at_infinity || !fl.at_max) rep.status = "fail";
    return emit(rep, out, "lab_fitmod_report");
  }
  auto u = edge_log_field(4096, 0.01, 3.0);
  auto fit = lab::fit_log_modulus(u);
  rep.metrics["C"] = fit.C;
  rep.metrics["M"] = fit.M;
  if (std::abs(fit.M - 3.0) > 0.1) rep.status = "fail";
  return emit(rep, out, "lab_fitmod_report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logcert: certified log-continuity experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out = "reports", config;
  unsigned long seed = 1;
  int threads = 0;
  app.add_option("--out", out, "output directory for reports and curves");
  app.add_option("--config", config, "JSON config merged under explicit flags");
  app.add_option("--seed", seed, "seed for all randomized sampling");
  app.add_option("--threads", threads, "worker pool size (0 = logical cores)");

  auto* chain = app.add_subcommand("chain", "build and verify safe chains");
  int c_m = 3, c_k = 1, c_inst = 1;
  bool c_zaxis = false, c_self = false;
  chain->add_option("--m", c_m, "ambient dimension");
  chain->add_option("--k", c_k, "number of flats");
  chain->add_option("--instances", c_inst, "random instances to run");
  chain->add_flag("--zaxis", c_zaxis, "use the canonical k=1 z-axis instance");
  chain->add_flag("--selftest", c_self, "run the module's trivial examples");

  auto* lm = app.add_subcommand("logmod", "propagate and verify log moduli");
  std::string l_variant = "convex";
  int l_pairs = 10000;
  bool l_plant = false, l_self = false;
  double l_alpha = 0.8;
  lm->add_option("--variant", l_variant, "convex|unit|arrangement");
  lm->add_option("--pairs", l_pairs, "verification pairs");
  lm->add_option("--alpha", l_alpha, "local exponent");
  lm->add_flag("--plant", l_plant, "plant a violation (expected exit 2)");
  lm->add_flag("--selftest", l_self, "run the module's trivial examples");

  auto* bu = app.add_subcommand("blowup", "chart round trips and route bounds");
  int b_n = 4, b_q = 3, b_points = 10000, b_pairs = 500, b_res = 64;
  bool b_self = false;
  bu->add_option("--n", b_n, "ambient complex dimension");
  bu->add_option("--q", b_q, "center codimension");
  bu->add_option("--points", b_points, "round-trip sample points");
  bu->add_option("--pairs", b_pairs, "oracle comparison pairs");
  bu->add_option("--resolution", b_res, "oracle grid resolution");
  bu->add_flag("--selftest", b_self, "run the module's trivial examples");

  auto* bd = app.add_subcommand("budget", "weak log-continuity budget sweep");
  double d_gamma = 0.5, d_D = 2.0, d_B = 1.0, d_tlo = 1e-12, d_thi = 1e-2,
         d_C4 = 1.0;
  int d_n = 2;
  bool d_improved = false, d_gp = false, d_self = false;
  bd->add_option("--gamma", d_gamma, "target exponent");
  bd->add_option("--D", d_D, "schedule exponent");
  bd->add_option("--B", d_B, "sup-norm bound");
  bd->add_option("--n", d_n, "complex dimension");
  bd->add_option("--tlo", d_tlo, "smallest separation");
  bd->add_option("--thi", d_thi, "largest separation");
  bd->add_option("--C4", d_C4, "improved-route constant");
  bd->add_flag("--improved", d_improved, "use the improved growth route");
  bd->add_flag("--gnuplot-script", d_gp, "emit a gnuplot script");
  bd->add_flag("--selftest", d_self, "run the module's trivial examples");

  auto* lab_cmd = app.add_subcommand("lab", "grid experiments");
  lab_cmd->require_subcommand(1);
  auto* lj = lab_cmd->add_subcommand("jensen", "sup-ball Jensen gap exponent");
  auto* lmass = lab_cmd->add_subcommand("mass", "Lelong mass ratios");
  auto* lmol = lab_cmd->add_subcommand("mollify", "mollification defects");
  auto* lcam = lab_cmd->add_subcommand("campanato", "geodesic distance iteration");
  auto* lfit = lab_cmd->add_subcommand("fitmod", "log-modulus fitting");
  int j_grid = 256, m_grid = 1024, mo_grid = 256, ca_grid = 256;
  bool j_gp = false, m_gp = false;
  bool j_self = false, m_self = false, mo_self = false, ca_self = false,
       f_self = false;
  lj->add_option("--grid", j_grid, "grid resolution");
  lj->add_flag("--gnuplot-script", j_gp, "emit a gnuplot script");
  lj->add_flag("--selftest", j_self, "run the trivial examples");
  lmass->add_option("--grid", m_grid, "grid resolution");
  lmass->add_flag("--gnuplot-script", m_gp, "emit a gnuplot script");
  lmass->add_flag("--selftest", m_self, "run the trivial examples");
  lmol->add_option("--grid", mo_grid, "grid resolution");
  lmol->add_flag("--selftest", mo_self, "run the trivial examples");
  lcam->add_option("--grid", ca_grid, "grid resolution");
  lcam->add_flag("--selftest", ca_self, "run the trivial examples");
  lfit->add_flag("--selftest", f_self, "run the trivial examples");

  for (CLI::App* sub : {chain, lm, bu, bd, lab_cmd, lj, lmass, lmol, lcam, lfit})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
    for (auto* sub : app.get_subcommands()) {
      merge_config(sub, config);
      for (auto* nested : sub->get_subcommands()) merge_config(nested, config);
    }
    if (threads > 0) {
      setenv("LOGMOD_THREADS", std::to_string(threads).c_str(), 1);
    }
    if (chain->parsed())
      return run_chain(out, c_m, c_k, c_inst, seed, c_zaxis, c_self);
    if (lm->parsed())
      return run_logmod(out, l_variant, l_pairs, seed, l_plant, l_alpha, threads,
                        l_self);
    if (bu->parsed())
      return run_blowup(out, b_n, b_q, b_points, b_pairs, b_res, seed, b_self);
    if (bd->parsed())
      return run_budget(out, d_gamma, d_D, d_B, d_n, d_tlo, d_thi, d_improved,
                        d_C4, d_gp, d_self);
    if (lab_cmd->parsed()) {
      if (lj->parsed()) return run_lab_jensen(out, j_grid, j_gp, j_self);
      if (lmass->parsed()) return run_lab_mass(out, m_grid, m_gp, m_self);
      if (lmol->parsed()) return run_lab_mollify(out, mo_grid, mo_self);
      if (lcam->parsed()) return run_lab_campanato(out, ca_grid, ca_self);
      if (lfit->parsed()) return run_lab_fitmod(out, f_self);
    }
    std::cerr << app.help();
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
