#pragma once

// Command-line front end: `eval` (one scenario), `sweep` (a preset or one
// inline point) and `validate` (analytic against simulation).
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numeric or
// configuration error while evaluating, 4 validation mismatch.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "crossroad/csv.hpp"
#include "crossroad/experiments.hpp"
#include "crossroad/presets.hpp"

namespace crossroad {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitValidation = 4;

enum class Command { Eval, Sweep, Validate };

struct InlineScenario {
  std::string scheme = "mrc";
  std::string model = "hsv";
  double lambda = 0.05;
  std::optional<double> lambda_y;
  double p = 0.05;
  std::optional<double> theta;
  std::optional<double> rate;
  double sd = 200.0;
  bool relay_mid = false;
  std::optional<Point2> source;
  std::optional<Point2> relay;
  std::optional<Point2> dest;
  double alpha = 2.0;
  std::optional<double> noise_dbm;  // empty: noise off
  std::optional<double> finite_z;
};

struct CliConfig {
  Command command = Command::Eval;
  std::optional<std::string> preset;
  std::optional<InlineScenario> scenario;
  bool analytic_only = false;
  std::string grid = "default";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<std::string> out;
  unsigned threads = 0;
};

struct ParseOutcome {
  std::optional<CliConfig> config;
  int exit_code = kExitOk;
  std::string message;
};

namespace detail {

inline std::optional<Point2> parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    std::size_t a = 0;
    std::size_t b = 0;
    const std::string xs = text.substr(0, comma);
    const std::string ys = text.substr(comma + 1);
    const double x = std::stod(xs, &a);
    const double y = std::stod(ys, &b);
    if (a != xs.size() || b != ys.size()) return std::nullopt;
    return Point2{x, y};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct ScenarioFlags {
  std::string scheme;
  std::string model;
  std::optional<double> lambda;
  std::optional<double> lambda_y;
  std::optional<double> p;
  std::optional<double> theta;
  std::optional<double> rate;
  std::optional<double> sd;
  bool relay_mid = false;
  std::string source;
  std::string relay;
  std::string dest;
  std::optional<double> alpha;
  std::string noise;
  std::optional<double> finite_z;
  std::vector<CLI::Option*> options;

  void attach(CLI::App* app) {
    options = {
        app->add_option("--scheme", scheme, "direct | sc | mrc")->check(CLI::IsMember({"direct", "sc", "mrc"})),
        app->add_option("--model", model, "hsv | lsv")->check(CLI::IsMember({"hsv", "lsv"})),
        app->add_option("--lambda", lambda, "vehicle intensity per metre (both roads)"),
        app->add_option("--lambda-y", lambda_y, "override the Y-road intensity (0 for a highway)"),
        app->add_option("--p", p, "ALOHA access probability"),
        app->add_option("--theta", theta, "decoding threshold (linear)"),
        app->add_option("--rate", rate, "target rate in bits per channel use"),
        app->add_option("--sd", sd, "S-D distance on the X road, metres (default 200)"),
        app->add_flag("--relay-mid", relay_mid, "place the relay midway between S and D"),
        app->add_option("--source", source, "source position x,y"),
        app->add_option("--relay", relay, "relay position x,y"),
        app->add_option("--dest", dest, "destination position x,y"),
        app->add_option("--alpha", alpha, "path-loss exponent (default 2)"),
        app->add_option("--noise", noise, "noise power in dBm, or off (default off)"),
        app->add_option("--finite", finite_z, "road half-length Z in metres (default infinite)"),
    };
    options[5]->excludes(options[6]);
  }

  bool any() const {
    for (const auto* o : options)
      if (o->count() > 0) return true;
    return false;
  }

  // Empty string on success, otherwise the usage error.
  std::string build(InlineScenario& s) const {
    if (!scheme.empty()) s.scheme = scheme;
    if (!model.empty()) s.model = model;
    if (lambda) s.lambda = *lambda;
    s.lambda_y = lambda_y;
    if (p) s.p = *p;
    s.theta = theta;
    s.rate = rate;
    if (sd) s.sd = *sd;
    s.relay_mid = relay_mid;
    if (alpha) s.alpha = *alpha;
    s.finite_z = finite_z;
    const std::pair<const std::string*, std::optional<Point2>*> points[] = {
        {&source, &s.source}, {&relay, &s.relay}, {&dest, &s.dest}};
    for (const auto& [text, target] : points) {
      if (text->empty()) continue;
      *target = parse_point(*text);
      if (!*target) return "positions must be given as x,y (got '" + *text + "')";
    }
    if (s.relay && s.relay_mid) return "--relay and --relay-mid are mutually exclusive";
    if (s.scheme != "direct" && !s.relay && !s.relay_mid)
      return "cooperative schemes need --relay x,y or --relay-mid";
    if (!noise.empty() && noise != "off") {
      try {
        std::size_t used = 0;
        s.noise_dbm = std::stod(noise, &used);
        if (used != noise.size()) throw std::invalid_argument(noise);
      } catch (const std::exception&) {
        return "--noise expects a level in dBm or 'off' (got '" + noise + "')";
      }
    }
    return {};
  }
};

}  // namespace detail

inline ParseOutcome parse_args(int argc, const char* const* argv) {
  CliConfig cfg;
  CLI::App app{"Outage and throughput of cooperative transmissions at a two-road intersection", "crossroad"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::string out;
  unsigned threads = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed (required for simulations)");
    sub->add_option("--trials", trials, "simulation trials per point")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "CSV output path (default stdout)");
    sub->add_option("--threads", threads, "worker threads (default $CROSSROAD_THREADS or all cores)");
  };

  auto* eval = app.add_subcommand("eval", "evaluate one scenario");
  detail::ScenarioFlags eval_flags;
  eval_flags.attach(eval);
  common(eval);

  auto* sweep = app.add_subcommand("sweep", "run a preset sweep, or one inline point");
  std::string preset;
  bool analytic_only = false;
  sweep->add_option("--preset", preset, "preset name")->check(CLI::IsMember(preset_names()));
  sweep->add_flag("--analytic-only", analytic_only, "skip simulations");
  detail::ScenarioFlags sweep_flags;
  sweep_flags.attach(sweep);
  common(sweep);

  auto* validate = app.add_subcommand("validate", "compare analytic outage with simulation");
  std::string grid = "default";
  validate->add_option("--grid", grid, "validation grid")->check(CLI::IsMember({"default"}));
  common(validate);

  ParseOutcome res;
  auto usage = [&](const std::string& msg) {
    res.exit_code = kExitUsage;
    res.message = msg + "\n";
    return res;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream er;
    const int code = app.exit(e, o, er);
    res.message = o.str() + er.str();
    res.exit_code = code == 0 ? kExitOk : kExitUsage;
    return res;
  }

  cfg.seed = seed;
  cfg.trials = trials;
  if (!out.empty()) cfg.out = out;
  cfg.threads = threads;

  if (eval->parsed()) {
    cfg.command = Command::Eval;
    InlineScenario s;
    if (auto err = eval_flags.build(s); !err.empty()) return usage(err);
    cfg.scenario = s;
    if (cfg.trials && !cfg.seed) return usage("--seed is required when --trials requests a simulation");
  } else if (sweep->parsed()) {
    cfg.command = Command::Sweep;
    cfg.analytic_only = analytic_only;
    const bool has_preset = !preset.empty();
    const bool has_inline = sweep_flags.any();
    if (has_preset && has_inline) return usage("--preset cannot be combined with inline scenario flags");
    if (!has_preset && !has_inline) return usage("sweep needs --preset NAME or inline scenario flags");
    if (has_preset) {
      cfg.preset = preset;
      const bool simulates = !analytic_only && make_preset(preset).monte_carlo;
      if (simulates && !cfg.seed) return usage("--seed is required for simulation (or pass --analytic-only)");
    } else {
      InlineScenario s;
      if (auto err = sweep_flags.build(s); !err.empty()) return usage(err);
      cfg.scenario = s;
      if (!analytic_only && !cfg.seed) return usage("--seed is required for simulation (or pass --analytic-only)");
    }
  } else {
    cfg.command = Command::Validate;
    cfg.grid = grid;
    if (!cfg.seed) return usage("--seed is required for validation");
  }
  res.config = cfg;
  return res;
}

inline Deployment setup_from(const InlineScenario& in) {
  Deployment s;
  s.scenario.scheme = in.scheme == "direct" ? Scheme::Direct : in.scheme == "sc" ? Scheme::SC : Scheme::MRC;
  s.scenario.mobility = in.model == "lsv" ? Mobility::LSV : Mobility::HSV;
  if (in.rate)
    s.scenario.target = TargetRate{*in.rate};
  else
    s.scenario.target = DecodingThreshold{in.theta.value_or(1.0)};
  const Point2 src = in.source.value_or(Point2{0.0, 0.0});
  const Point2 dst = in.dest.value_or(Point2{src.x + in.sd, src.y});
  s.scenario.source = NodePose::cartesian(src.x, src.y);
  s.scenario.destination = NodePose::cartesian(dst.x, dst.y);
  if (in.relay)
    s.relay = NodePose::cartesian(in.relay->x, in.relay->y);
  else
    s.relay = NodePose::cartesian(0.5 * (src.x + dst.x), 0.5 * (src.y + dst.y));
  s.cfg.channel.alpha = in.alpha;
  s.cfg.channel.noise = in.noise_dbm ? dbm_to_watts(*in.noise_dbm) : 0.0;
  s.cfg.traffic = {in.lambda, in.lambda_y.value_or(in.lambda), in.p};
  if (in.finite_z) s.cfg.road = RoadGeometry::finite(*in.finite_z);
  return s;
}

namespace detail {

inline int write_table(const Table& t, const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.out) {
    write_csv(out, t);
    return kExitOk;
  }
  try {
    emit_csv(t, *cfg.out);
  } catch (const IoError& e) {
    err << "crossroad: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

inline TrialConfig trial_from(const CliConfig& cfg) {
  TrialConfig t;
  t.seed = cfg.seed.value_or(0);
  if (cfg.trials) t.trials = *cfg.trials;
  t.threads = cfg.threads;
  return t;
}

inline int run_eval(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const InlineScenario& in = *cfg.scenario;
  Table t;
  t.columns = {"scheme", "model", "lambda", "p", "theta", "op_analytic", "p_first_phase", "p_second_phase",
               "op_mc", "stderr"};
  try {
    const Deployment s = setup_from(in);
    const Scenario sc = s.instantiate();
    const auto op = outage(sc, s.cfg);
    Cell mc = std::string();
    Cell se = std::string();
    if (cfg.trials) {
      const auto est = estimate_outage(sc, s.cfg, trial_from(cfg));
      mc = est.p_hat;
      se = est.std_error;
    }
    t.rows.push_back({in.scheme, in.model, in.lambda, in.p, sc.theta(), op.total, op.p_first_phase,
                      op.p_second_phase, mc, se});
  } catch (const std::exception& e) {
    err << "crossroad: " << e.what() << "\n";
    return kExitNumeric;
  }
  return write_table(t, cfg, out, err);
}

inline int run_sweep_command(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  Table t;
  try {
    if (cfg.preset) {
      PresetOptions po;
      po.seed = cfg.seed.value_or(0);
      if (cfg.trials) po.trials = *cfg.trials;
      po.monte_carlo = !cfg.analytic_only;
      po.threads = cfg.threads;
      t = make_preset(*cfg.preset, po).run();
    } else {
      SweepSpec spec;
      spec.name = "inline";
      spec.base = setup_from(*cfg.scenario);
      spec.axes = {lambda_axis({cfg.scenario->lambda}), access_axis({cfg.scenario->p})};
      spec.evaluators.monte_carlo = !cfg.analytic_only;
      spec.evaluators.trial = trial_from(cfg);
      spec.threads = cfg.threads;
      t = run_sweep(spec);
    }
  } catch (const std::exception& e) {
    err << "crossroad: " << e.what() << "\n";
    return kExitNumeric;
  }
  if (const int rc = write_table(t, cfg, out, err); rc != kExitOk) return rc;
  if (t.error_rows > 0) {
    err << "crossroad: " << t.error_rows << " row(s) failed to evaluate\n";
    return kExitNumeric;
  }
  return kExitOk;
}

inline int run_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  TrialConfig trial = trial_from(cfg);
  if (!cfg.trials) trial.trials = 100000;
  ValidationReport rep;
  try {
    rep = run_validation(validation_grid(), trial);
  } catch (const std::exception& e) {
    err << "crossroad: " << e.what() << "\n";
    return kExitNumeric;
  }
  if (const int rc = write_table(rep.table, cfg, out, err); rc != kExitOk) return rc;
  std::size_t failures = 0;
  const auto pass_col = rep.table.column_index("pass");
  for (const auto& row : rep.table.rows)
    if (std::get<std::string>(row[pass_col]) != "yes") ++failures;
  err << "validate: " << rep.table.rows.size() - failures << "/" << rep.table.rows.size()
      << " points within max(3 SE, 0.01)\n";
  return rep.all_pass ? kExitOk : kExitValidation;
}

}  // namespace detail

inline int run(const CliConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  switch (cfg.command) {
    case Command::Eval: return detail::run_eval(cfg, out, err);
    case Command::Sweep: return detail::run_sweep_command(cfg, out, err);
    case Command::Validate: return detail::run_validate(cfg, out, err);
  }
  return kExitUsage;
}

}  // namespace crossroad
