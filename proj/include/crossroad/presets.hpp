#pragma once

// Named sweeps that regenerate each published figure as a table. Parameters
// a caption leaves open are fixed here; docs/presets.md lists which values
// are inferred.

#include <functional>
#include <string>
#include <vector>

#include "crossroad/experiments.hpp"

namespace crossroad {

struct PresetOptions {
  std::uint64_t seed = 0;
  std::int64_t trials = 10000;
  bool monte_carlo = true;
  unsigned threads = 0;
};

struct Preset {
  std::string name;
  std::string description;
  bool monte_carlo = false;  // whether this preset runs simulations under the given options
  std::function<Table()> run;
};

inline std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7", "fig8a", "fig8b", "fig9"};
}

namespace presets {

inline std::vector<double> step_grid(double first, double last, double step) {
  std::vector<double> g;
  const auto n = static_cast<int>(std::floor((last - first) / step + 0.5));
  for (int i = 0; i <= n; ++i) g.push_back(first + step * i);
  return g;
}

inline const std::vector<double>& fig2_lambdas() {
  static const std::vector<double> g{0.01, 0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2};
  return g;
}

inline const std::vector<double>& fig3_lambdas() {
  static const std::vector<double> g{0.005, 0.01, 0.02, 0.03, 0.05, 0.07, 0.1};
  return g;
}

inline const std::vector<double>& fig4_lambdas() {
  static const std::vector<double> g{0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25};
  return g;
}

inline const std::vector<double>& fig5_thetas() {
  static const std::vector<double> g{0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0,
                                     31.0, 63.0, 127.0, 255.0, 511.0, 1023.0};
  return g;
}

inline const std::vector<double>& fig8a_lambdas() {
  static const std::vector<double> g{0.01, 0.02, 0.05, 0.1, 0.15, 0.2};
  return g;
}

inline const std::vector<double>& fig8b_distances() {
  static const std::vector<double> g{0.0,   10.0,  25.0,  50.0,  100.0, 200.0, 500.0,
                                     1e3,   2e3,   5e3,   1e4,   2e4,   5e4,   1e5};
  return g;
}

inline SweepSpec base_spec(const std::string& name, const std::string& description, const PresetOptions& o) {
  SweepSpec spec;
  spec.name = name;
  spec.description = description;
  spec.base = default_setup();
  spec.evaluators.analytic = true;
  spec.evaluators.monte_carlo = o.monte_carlo;
  spec.evaluators.trial.trials = o.trials;
  spec.evaluators.trial.seed = o.seed;
  spec.threads = o.threads;
  return spec;
}

inline Preset from_spec(SweepSpec spec) {
  Preset p;
  p.name = spec.name;
  p.description = spec.description;
  p.monte_carlo = spec.evaluators.monte_carlo;
  p.run = [spec] { return run_sweep(spec); };
  return p;
}

// SC, HSV, p = 0.05: outage against lambda for several noise levels.
inline Preset fig2a(const PresetOptions& o) {
  auto spec = base_spec("fig2a", "SC/HSV outage vs lambda for noise levels off, -110, -100, -97, -90 dBm", o);
  spec.base.scenario.scheme = Scheme::SC;
  spec.base.cfg.traffic.access_prob = 0.05;
  spec.axes = {noise_axis({std::nullopt, -110.0, -100.0, -97.0, -90.0}),
               lambda_axis({0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2})};
  return from_spec(spec);
}

// SC, HSV: outage against lambda with and without -97 dBm noise for several p.
inline Preset fig2b(const PresetOptions& o) {
  auto spec = base_spec("fig2b", "SC/HSV outage vs lambda for p in {0.01,0.05,0.1,0.5}, noise off and -97 dBm", o);
  spec.base.scenario.scheme = Scheme::SC;
  spec.axes = {access_axis({0.01, 0.05, 0.1, 0.5}), noise_axis({std::nullopt, -97.0}),
               lambda_axis(fig2_lambdas())};
  return from_spec(spec);
}

// Direct, SC and MRC under HSV for several p, noise off.
inline Preset fig3(const PresetOptions& o) {
  auto spec = base_spec("fig3", "Direct/SC/MRC outage vs lambda for p in {0.01,0.05,0.1}, HSV", o);
  spec.axes = {lambda_axis(fig3_lambdas()), access_axis({0.01, 0.05, 0.1}),
               scheme_axis({Scheme::Direct, Scheme::SC, Scheme::MRC}), mobility_axis({Mobility::HSV})};
  return from_spec(spec);
}

// SC and MRC under both mobility models, p = 0.02, low to high traffic.
inline Preset fig4(const PresetOptions& o) {
  auto spec = base_spec("fig4", "SC/MRC outage vs lambda, HSV and LSV, p = 0.02", o);
  spec.base.cfg.traffic.access_prob = 0.02;
  spec.axes = {lambda_axis(fig4_lambdas()), scheme_axis({Scheme::SC, Scheme::MRC}),
               mobility_axis({Mobility::HSV, Mobility::LSV})};
  return from_spec(spec);
}

// MRC throughput against theta, p = 0.01.
inline Preset fig5(const PresetOptions& o) {
  auto spec = base_spec("fig5", "MRC throughput vs theta for lambda in {0.01,0.02,0.1,0.2}, HSV and LSV, p = 0.01", o);
  spec.metric = Metric::Throughput;
  spec.base.cfg.traffic.access_prob = 0.01;
  spec.axes = {theta_axis(fig5_thetas()), lambda_axis({0.01, 0.02, 0.1, 0.2}),
               mobility_axis({Mobility::HSV, Mobility::LSV})};
  return from_spec(spec);
}

inline Preset relay_position(const std::string& name, double lambda, const std::string& traffic,
                             const PresetOptions& o) {
  auto spec = base_spec(name, "outage vs relay x on S=(0,0), D=(200,0), p = 0.002, " + traffic, o);
  spec.base.cfg.traffic = {lambda, lambda, 0.002};
  spec.axes = {relay_x_axis(step_grid(5.0, 195.0, 5.0)), scheme_axis({Scheme::Direct, Scheme::SC, Scheme::MRC}),
               mobility_axis({Mobility::HSV, Mobility::LSV})};
  return from_spec(spec);
}

inline Preset fig6a(const PresetOptions& o) { return relay_position("fig6a", 0.25, "lambda = 0.25", o); }
inline Preset fig6b(const PresetOptions& o) { return relay_position("fig6b", 0.01, "lambda = 0.01", o); }

// Relay on the first bisector, S on the X road, D on the Y road; MRC, LSV.
inline Deployment fig7_setup() {
  Deployment s = default_setup();
  s.scenario.scheme = Scheme::MRC;
  s.scenario.mobility = Mobility::LSV;
  s.cfg.traffic = {0.05, 0.05, 0.05};
  return s;
}

inline const std::vector<double>& fig7_relays() {
  static const std::vector<double> g{0.0, 20.0, 40.0, 60.0, 80.0, 100.0, 120.0};
  return g;
}

inline Preset fig7(const PresetOptions&) {
  Preset p;
  p.name = "fig7";
  p.description = "MRC/LSV outage vs (|S|, |D|) for relays at (c, c), analytic";
  p.run = [] {
    const auto grid = step_grid(10.0, 200.0, 10.0);
    return bisector_relay_study(fig7_setup(), grid, grid, fig7_relays());
  };
  return p;
}

// Highway (one road) against intersection, MRC, HSV.
inline Preset fig8a(const PresetOptions& o) {
  auto spec = base_spec("fig8a", "MRC/HSV outage vs lambda, intersection and highway, p in {0.01,0.05}, theta in {1,3}", o);
  spec.axes = {road_axis({RoadLayout::Intersection, RoadLayout::Highway}), access_axis({0.01, 0.05}),
               theta_axis({1.0, 3.0}), lambda_axis(fig8a_lambdas())};
  return from_spec(spec);
}

// S-R-D triplet on the X road at distance d from the intersection, R midway.
// Analytic only: the far end of the grid lies outside any practical
// simulation window.
inline Preset fig8b(const PresetOptions& o) {
  auto spec = base_spec("fig8b", "MRC outage vs triplet distance from the intersection, analytic", o);
  spec.evaluators.monte_carlo = false;
  spec.base.cfg.traffic = {0.05, 0.05, 0.05};
  const std::vector<double> r_sd{50.0, 150.0, 250.0};
  const auto dist = fig8b_distances();
  spec.axes = {{"r_sd", numeric_labels(r_sd),
                [r_sd](Deployment& s, std::size_t i) {
                  s.scenario.source = NodePose::cartesian(0.0, 0.0);
                  s.relay = NodePose::cartesian(0.5 * r_sd[i], 0.0);
                  s.scenario.destination = NodePose::cartesian(r_sd[i], 0.0);
                }},
               mobility_axis({Mobility::HSV, Mobility::LSV}),
               road_axis({RoadLayout::Intersection, RoadLayout::Highway}),
               {"distance", numeric_labels(dist), [dist](Deployment& s, std::size_t i) {
                  auto shift = [&](const NodePose& n) { return NodePose::cartesian(n.x() + dist[i], n.y()); };
                  s.scenario.source = shift(s.scenario.source);
                  s.relay = shift(s.relay);
                  s.scenario.destination = shift(s.scenario.destination);
                }}};
  return from_spec(spec);
}

// Path-loss exponent sweep, MRC, p = 0.05.
inline Preset fig9(const PresetOptions& o) {
  auto spec = base_spec("fig9", "MRC outage vs alpha for lambda in {0.03,0.05,0.07,0.1,0.2}, HSV and LSV", o);
  spec.axes = {alpha_axis(step_grid(2.0, 5.0, 0.25)), lambda_axis({0.03, 0.05, 0.07, 0.1, 0.2}),
               mobility_axis({Mobility::HSV, Mobility::LSV})};
  return from_spec(spec);
}

}  // namespace presets

inline Preset make_preset(const std::string& name, const PresetOptions& opts = {}) {
  using Factory = Preset (*)(const PresetOptions&);
  static const std::pair<const char*, Factory> table[] = {
      {"fig2a", presets::fig2a}, {"fig2b", presets::fig2b}, {"fig3", presets::fig3},
      {"fig4", presets::fig4},   {"fig5", presets::fig5},   {"fig6a", presets::fig6a},
      {"fig6b", presets::fig6b}, {"fig7", presets::fig7},   {"fig8a", presets::fig8a},
      {"fig8b", presets::fig8b}, {"fig9", presets::fig9}};
  for (const auto& [n, f] : table)
    if (name == n) return f(opts);
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace crossroad
