// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "crossroad/crossroad.hpp"
#include "oracles.hpp"

using namespace crossroad;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PresetOptions analytic_only() {
  PresetOptions o;
  o.monte_carlo = false;
  return o;
}

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Random node, argument and traffic drawn from the ranges the figures use.
struct LaplacePoint {
  NodePose node;
  double s;
  TrafficParams traffic;
  double z;
};

LaplacePoint random_laplace_point(std::mt19937_64& rng, const ChannelParams& ch) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LaplacePoint pt{NodePose::polar(1.0 + 499.0 * u(rng), 2.0 * std::numbers::pi * u(rng)), 0.0, {}, 0.0};
  const double link = 5.0 * std::pow(100.0, u(rng));  // 5 m .. 500 m
  const double theta = std::pow(10.0, -1.0 + 4.0 * u(rng));
  pt.s = theta / (ch.power * path_loss(link, ch));
  pt.traffic = {std::pow(10.0, -3.0 + 2.5 * u(rng)), std::pow(10.0, -3.0 + 2.5 * u(rng)),
                std::pow(10.0, -3.0 + 3.0 * u(rng))};
  pt.z = std::pow(10.0, 1.0 + 4.0 * u(rng));  // 10 m .. 1e5 m
  return pt;
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  ChannelParams ch;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto pt = random_laplace_point(rng, ch);
    for (bool finite : {true, false}) {
      NetworkConfig cfg;
      cfg.traffic = pt.traffic;
      cfg.road = finite ? RoadGeometry::finite(pt.z) : RoadGeometry::infinite();
      for (Road road : {Road::X, Road::Y}) {
        const double closed =
            finite ? detail::log_laplace_closed_finite(road, pt.node, pt.s, pt.traffic, ch, pt.z)
                   : detail::log_laplace_closed_infinite(road, pt.node, pt.s, pt.traffic, ch);
        const double numeric = log_laplace_numeric(road, pt.node, pt.s, cfg);
        worst = std::max({worst, rel_err(closed, numeric), rel_err(std::exp(closed), std::exp(numeric))});
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 5.0, fmt("max rel err %.2e, %.2f s", worst, t)};
}

// The finite road misses a tail of roughly 2 p lambda k / Z in the exponent
// (k = sP/A^2), so the gap is also compared with that prediction.
Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double z = 1e6;
  std::mt19937_64 rng(102);
  ChannelParams ch;
  double worst = 0.0;
  double worst_tail = 0.0;
  int within = 0;
  for (int i = 0; i < 20; ++i) {
    const auto pt = random_laplace_point(rng, ch);
    double gap = 0.0;
    for (Road road : {Road::X, Road::Y}) {
      const double fin = std::exp(detail::log_laplace_closed_finite(road, pt.node, pt.s, pt.traffic, ch, z));
      const double inf = std::exp(detail::log_laplace_closed_infinite(road, pt.node, pt.s, pt.traffic, ch));
      const double k = pt.s * ch.power / (ch.antenna * ch.antenna);
      const double density = pt.traffic.access_prob * (road == Road::X ? pt.traffic.lambda_x : pt.traffic.lambda_y);
      const double predicted = inf * density * 2.0 * k / z;
      gap = std::max(gap, std::abs(fin - inf));
      if (predicted > 1e-300) worst_tail = std::max(worst_tail, std::abs((fin - inf) / predicted - 1.0));
    }
    worst = std::max(worst, gap);
    if (gap <= 1e-6) ++within;
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 1.0,
          fmt("max abs diff %.2e, %.0f/20 points within 1e-6, ", worst, within) +
              fmt("gaps match the 2 p lambda k / Z tail to %.1e relative, %.3f s", worst_tail, t)};
}

Outcome ac3() {
  const auto t0 = std::chrono::steady_clock::now();
  TrialConfig trial;
  trial.trials = 100000;
  trial.seed = 103;
  const auto grid = validation_grid();
  const auto rep = run_validation(grid, trial);
  double worst = 0.0;
  std::size_t failed = 0;
  for (std::size_t r = 0; r < rep.table.rows.size(); ++r) {
    worst = std::max(worst, rep.table.number(r, "abs_diff") / rep.table.number(r, "tolerance"));
    if (rep.table.text(r, "pass") != "yes") {
      ++failed;
      std::printf("  AC3 miss: %s lambda=%g p=%g theta=%g analytic=%.5f mc=%.5f se=%.5f\n",
                  rep.table.text(r, "path").c_str(), rep.table.number(r, "lambda"), rep.table.number(r, "p"),
                  rep.table.number(r, "theta"), rep.table.number(r, "op_analytic"), rep.table.number(r, "op_mc"),
                  rep.table.number(r, "stderr"));
    }
  }
  return {rep.all_pass && grid.size() >= 12,
          fmt("%.0f points, %.0f outside tolerance, max diff/tol %.2f", static_cast<double>(grid.size()),
              static_cast<double>(failed), worst) +
              fmt(", %.1f s", seconds_since(t0))};
}

Outcome ac4() {
  struct Point {
    NodePose relay, dest;
    double s_link, b_link, theta;
    TrafficParams traffic;
  };
  const std::vector<Point> points{
      {NodePose::cartesian(10, 10), NodePose::cartesian(0, 60), 50, 60, 1.0, {0.05, 0.05, 0.5}},
      {NodePose::cartesian(100, 0), NodePose::cartesian(200, 0), 100, 100, 1.0, {0.05, 0.05, 0.2}},
      {NodePose::cartesian(30, 5), NodePose::cartesian(60, -5), 40, 40, 3.0, {0.1, 0.02, 0.3}},
      {NodePose::cartesian(0, 0), NodePose::cartesian(0, 80), 60, 80, 1.0, {0.02, 0.1, 0.5}},
      {NodePose::cartesian(50, 50), NodePose::cartesian(120, 0), 70, 90, 0.5, {0.1, 0.1, 0.1}},
      {NodePose::cartesian(-20, 0), NodePose::cartesian(20, 0), 30, 30, 7.0, {0.01, 0.01, 0.5}}};
  bool ok = true;
  double worst = 0.0;
  double min_rho = INFINITY;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    NetworkConfig cfg;
    cfg.traffic = pt.traffic;
    cfg.road = RoadGeometry::finite(2000.0);
    const double s = pt.theta / (cfg.channel.power * path_loss(pt.s_link, cfg.channel));
    const double b = pt.theta / (cfg.channel.power * path_loss(pt.b_link, cfg.channel));
    const double rho = rho_x(s, b, pt.relay, pt.dest, cfg) * rho_y(s, b, pt.relay, pt.dest, cfg);
    const double analytic =
        joint_laplace_x(s, b, pt.relay, pt.dest, cfg) * joint_laplace_y(s, b, pt.relay, pt.dest, cfg);
    TrialConfig trial;
    trial.trials = 100000;
    trial.seed = block_seed(104, i);
    const auto est = estimate_joint_laplace(s, b, pt.relay, pt.dest, cfg, trial);
    const double z = std::abs(est.mean - analytic) / est.std_error;
    worst = std::max(worst, z);
    min_rho = std::min(min_rho, rho);
    ok = ok && z <= 3.0 && rho >= 1.0;
  }
  return {ok, fmt("max |diff|/SE %.2f, min rho %.4f", worst, min_rho)};
}

Outcome ac5() {
  const Table t = make_preset("fig3", analytic_only()).run();
  std::map<std::pair<double, double>, std::map<std::string, double>> op;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    op[{t.number(r, "lambda"), t.number(r, "p")}][t.text(r, "scheme")] = t.number(r, "op_analytic");
  std::size_t bad = 0;
  for (auto& [key, v] : op)
    if (!(v.at("mrc") <= v.at("sc") + 1e-12 && v.at("sc") <= v.at("direct") + 1e-12)) ++bad;
  return {bad == 0 && t.error_rows == 0 && !op.empty(),
          fmt("%.0f grid points, %.0f violations", static_cast<double>(op.size()), static_cast<double>(bad))};
}

Outcome ac6() {
  const Table t = make_preset("fig4", analytic_only()).run();
  std::map<std::tuple<double, std::string, std::string>, double> op;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    op[{t.number(r, "lambda"), t.text(r, "scheme"), t.text(r, "model")}] = t.number(r, "op_analytic");
  bool ok = true;
  std::string detail;
  for (std::string scheme : {"sc", "mrc"}) {
    const double lo_h = op.at({0.01, scheme, "hsv"}), lo_l = op.at({0.01, scheme, "lsv"});
    const double hi_h = op.at({0.2, scheme, "hsv"}), hi_l = op.at({0.2, scheme, "lsv"});
    ok = ok && lo_h <= lo_l && hi_l <= hi_h;
    detail += scheme + fmt(" 0.01: hsv %.4f lsv %.4f", lo_h, lo_l) + fmt(", 0.2: hsv %.4f lsv %.4f; ", hi_h, hi_l);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome ac7() {
  std::vector<NodePose> grid;
  for (double x : presets::step_grid(5.0, 195.0, 5.0)) grid.push_back(NodePose::cartesian(x, 0.0));
  Deployment base = default_setup();
  bool ok = true;
  std::string detail;
  for (auto scheme : {Scheme::SC, Scheme::MRC}) {
    Deployment high = base;
    high.scenario.scheme = scheme;
    high.scenario.mobility = Mobility::LSV;
    high.cfg.traffic = {0.25, 0.25, 0.002};
    const double x_lsv = optimal_relay_position(high, grid).pose.x();
    Deployment low = base;
    low.scenario.scheme = scheme;
    low.scenario.mobility = Mobility::HSV;
    low.cfg.traffic = {0.01, 0.01, 0.002};
    const double x_hsv = optimal_relay_position(low, grid).pose.x();
    // The midpoint claim is checked on MRC; the SC positions are reported only.
    if (scheme == Scheme::MRC) ok = ok && std::abs(x_lsv - 100.0) <= 10.0;
    ok = ok && x_hsv > 100.0;
    detail += std::string(to_string(scheme)) + fmt(": lsv@0.25 x=%g, hsv@0.01 x=%g; ", x_lsv, x_hsv);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome ac8() {
  const Table t = make_preset("fig8b", analytic_only()).run();
  std::map<std::tuple<double, std::string, std::string>, std::vector<double>> curve;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    curve[{t.number(r, "r_sd"), t.text(r, "model"), t.text(r, "road")}].push_back(t.number(r, "op_analytic"));
  bool ok = t.error_rows == 0;
  double far_gap = 0.0;
  std::size_t curves = 0;
  for (const auto& [key, inter] : curve) {
    if (std::get<2>(key) != "intersection") continue;
    const auto& hw = curve.at({std::get<0>(key), std::get<1>(key), "highway"});
    ++curves;
    double prev = INFINITY;
    for (std::size_t i = 0; i < inter.size(); ++i) {
      const double gap = inter[i] - hw[i];
      ok = ok && gap >= 0.0 && gap <= prev;
      prev = gap;
    }
    far_gap = std::max(far_gap, prev);
    ok = ok && prev <= 1e-3;
  }
  return {ok && curves == 6, fmt("%.0f curves, largest gap at far end %.2e", static_cast<double>(curves), far_gap)};
}

Outcome ac9() {
  const Table t = make_preset("fig2b", analytic_only()).run();
  const double p_max = 0.5;
  std::map<double, std::map<std::string, double>> op;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.number(r, "p") != p_max) continue;
    const Cell& n = t.rows[r][t.column_index("noise_dbm")];
    op[t.number(r, "lambda")][std::holds_alternative<std::string>(n) ? "off" : "on"] = t.number(r, "op_analytic");
  }
  double worst = 0.0;
  for (auto& [lam, v] : op) worst = std::max(worst, std::abs(v.at("on") - v.at("off")));
  return {worst < 1e-3 && !op.empty(), fmt("p = 0.5, max |noise - no noise| %.2e", worst)};
}

Outcome ac10() {
  const std::vector<std::tuple<double, double, double>> pts{
      {1.0, 2.0, 1.0},  {0.5, 1.0, 3.0},      {3.0, 0.7, 0.2},        {0.1, 0.05, 0.5},
      {2.0, 1.0, 1.0},  {2.0, 1.0, 1.0 + 1e-10}, {1.5, 1.0, 1.0 + 1e-6}, {4.0, 1.3, 1.3 - 1e-8},
      {0.02, 0.3, 0.4}, {6.0, 2.0, 1.5}};
  bool ok = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [u, l_rd, l_sd] = pts[i];
    const double analytic = ccdf_sum_two_exp(u, l_rd, l_sd);
    const auto mc = oracle::exponential_sum_ccdf(u, l_rd, l_sd, 1000000, 1000 + i);
    const double z = std::abs(mc.p - analytic) / mc.se;
    worst = std::max(worst, z);
    ok = ok && z <= 3.0;
  }
  return {ok, fmt("max |diff|/SE %.2f over %.0f points", worst, static_cast<double>(pts.size()))};
}

Outcome ac11() {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Deployment s = default_setup();
    s.scenario.source = NodePose::cartesian(-150.0 + 100.0 * u(rng), 40.0 * u(rng) - 20.0);
    s.scenario.destination = NodePose::cartesian(40.0 * u(rng) - 20.0, 50.0 + 150.0 * u(rng));
    s.relay = NodePose::cartesian(-50.0 + 100.0 * u(rng), -50.0 + 100.0 * u(rng));
    s.scenario.scheme = i % 2 ? Scheme::SC : Scheme::MRC;
    s.scenario.target = DecodingThreshold{std::pow(10.0, -1.0 + 2.0 * u(rng))};
    s.cfg.traffic = {0.2 * u(rng), 0.2 * u(rng), u(rng)};
    s.cfg.channel.alpha = i % 4 == 3 ? 3.0 : 2.0;
    if (i % 5 == 0) s.cfg.channel.noise = dbm_to_watts(-100.0);
    if (i % 3 == 0) s.cfg.road = RoadGeometry::finite(500.0 + 2000.0 * u(rng));
    s.scenario.mobility = Mobility::HSV;
    const auto hsv = outage(s.instantiate(), s.cfg);
    s.scenario.mobility = Mobility::LSV;
    const auto lsv = outage(s.instantiate(), s.cfg, EvalOptions{true});
    worst = std::max({worst, std::abs(hsv.total - lsv.total), std::abs(hsv.p_second_phase - lsv.p_second_phase)});
  }
  return {worst <= 1e-12, fmt("max |LSV(rho = 1) - HSV| %.2e", worst)};
}

Outcome ac12() {
  Deployment s = default_setup();
  s.scenario.mobility = Mobility::LSV;
  const Scenario sc = s.instantiate();
  std::vector<double> estimates;
  for (unsigned threads : {1u, 1u, 2u, 3u, 8u}) {
    TrialConfig t;
    t.trials = 20000;
    t.seed = 112;
    t.threads = threads;
    const auto e = estimate_outage(sc, s.cfg, t);
    estimates.push_back(e.p_hat);
    estimates.push_back(e.std_error);
    const auto j = estimate_joint_laplace(1e9, 2e9, *sc.relay, sc.destination, s.cfg, t);
    estimates.push_back(j.mean);
    estimates.push_back(j.std_error);
  }
  bool ok = true;
  for (std::size_t i = 4; i < estimates.size(); ++i) ok = ok && estimates[i] == estimates[i % 4];

  auto spec = presets::base_spec("det", "", PresetOptions{112, 3000, true, 1});
  spec.axes = {lambda_axis({0.02, 0.1}), scheme_axis({Scheme::SC, Scheme::MRC})};
  std::string first;
  for (unsigned threads : {1u, 4u}) {
    spec.threads = threads;
    std::ostringstream os;
    write_csv(os, run_sweep(spec));
    if (first.empty())
      first = os.str();
    else
      ok = ok && os.str() == first;
  }
  return {ok, "estimates and sweep CSV identical across 1, 2, 3, 4 and 8 threads"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* what;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "closed-form Laplace vs quadrature, 100 random points", ac1},
      {"AC2", "finite road at Z = 1e6 vs infinite road, 20 points", ac2},
      {"AC3", "analytic vs simulation on all five evaluator paths, 1e5 trials", ac3},
      {"AC4", "joint Laplace with cross terms vs simulation, 6 points", ac4},
      {"AC5", "MRC <= SC <= direct on the fig3 grid", ac5},
      {"AC6", "HSV/LSV crossover between lambda 0.01 and 0.2 (fig4)", ac6},
      {"AC7", "optimal relay positions (fig6): MRC/LSV midpoint, HSV toward D", ac7},
      {"AC8", "highway vs intersection gap (fig8b)", ac8},
      {"AC9", "noise and noiseless curves converge at p = 0.5 (fig2b)", ac9},
      {"AC10", "two-exponential CCDF vs 1e6 samples", ac10},
      {"AC11", "LSV with unit cross terms equals HSV", ac11},
      {"AC12", "simulation determinism across thread counts", ac12}};
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %s %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.what, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
