#pragma once

// Parameter sweeps over scenarios, evaluated analytically and/or by
// simulation, plus the relay-placement and throughput studies built on them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "crossroad/geometry.hpp"
#include "crossroad/montecarlo.hpp"
#include "crossroad/outage.hpp"

namespace crossroad {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::size_t error_rows = 0;

  std::size_t column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }

  double number(std::size_t row, const std::string& column) const {
    const Cell& c = rows.at(row).at(column_index(column));
    if (const double* v = std::get_if<double>(&c)) return *v;
    throw ConfigError("cell '" + column + "' is not numeric");
  }

  const std::string& text(std::size_t row, const std::string& column) const {
    return std::get<std::string>(rows.at(row).at(column_index(column)));
  }
};

// Everything needed to evaluate one point. `relay` is the relay position used
// whenever the scheme is cooperative; instantiate() attaches or drops it.
struct Deployment {
  Scenario scenario;
  NetworkConfig cfg;
  NodePose relay;

  Scenario instantiate() const {
    Scenario s = scenario;
    if (s.scheme == Scheme::Direct)
      s.relay.reset();
    else
      s.relay = relay;
    return s;
  }
};

// Reference defaults: A = 650, P = 120 mW, alpha = 2, theta = 1, infinite roads,
// S-R-D on the X road with 100 m hops.
inline Deployment default_setup() {
  Deployment s;
  s.scenario.source = NodePose::cartesian(0.0, 0.0);
  s.scenario.destination = NodePose::cartesian(200.0, 0.0);
  s.relay = NodePose::cartesian(100.0, 0.0);
  s.scenario.scheme = Scheme::MRC;
  s.scenario.mobility = Mobility::HSV;
  s.scenario.target = DecodingThreshold{1.0};
  s.cfg.traffic = {0.05, 0.05, 0.05};
  return s;
}

struct Axis {
  std::string column;
  std::vector<Cell> labels;
  std::function<void(Deployment&, std::size_t)> apply;

  std::size_t size() const { return labels.size(); }
};

inline std::vector<Cell> numeric_labels(const std::vector<double>& values) {
  return {values.begin(), values.end()};
}

// Sets the same intensity on both roads (a highway setup keeps lambda_Y = 0).
inline Axis lambda_axis(std::vector<double> values) {
  return {"lambda", numeric_labels(values), [values](Deployment& s, std::size_t i) {
            s.cfg.traffic.lambda_x = values[i];
            if (s.cfg.traffic.lambda_y != 0.0) s.cfg.traffic.lambda_y = values[i];
          }};
}

inline Axis access_axis(std::vector<double> values) {
  return {"p", numeric_labels(values),
          [values](Deployment& s, std::size_t i) { s.cfg.traffic.access_prob = values[i]; }};
}

inline Axis theta_axis(std::vector<double> values) {
  return {"theta", numeric_labels(values),
          [values](Deployment& s, std::size_t i) { s.scenario.target = DecodingThreshold{values[i]}; }};
}

inline Axis alpha_axis(std::vector<double> values) {
  return {"alpha", numeric_labels(values),
          [values](Deployment& s, std::size_t i) { s.cfg.channel.alpha = values[i]; }};
}

inline Axis scheme_axis(std::vector<Scheme> values) {
  std::vector<Cell> labels;
  for (auto v : values) labels.emplace_back(std::string(to_string(v)));
  return {"scheme", labels, [values](Deployment& s, std::size_t i) { s.scenario.scheme = values[i]; }};
}

inline Axis mobility_axis(std::vector<Mobility> values) {
  std::vector<Cell> labels;
  for (auto v : values) labels.emplace_back(std::string(to_string(v)));
  return {"model", labels, [values](Deployment& s, std::size_t i) { s.scenario.mobility = values[i]; }};
}

// std::nullopt means no noise; the column reads "off".
inline Axis noise_axis(std::vector<std::optional<double>> dbm) {
  std::vector<Cell> labels;
  for (const auto& v : dbm) {
    if (v)
      labels.emplace_back(*v);
    else
      labels.emplace_back(std::string("off"));
  }
  return {"noise_dbm", labels, [dbm](Deployment& s, std::size_t i) {
            s.cfg.channel.noise = dbm[i] ? dbm_to_watts(*dbm[i]) : 0.0;
          }};
}

// Relay moved along the X road.
inline Axis relay_x_axis(std::vector<double> values) {
  return {"relay_x", numeric_labels(values),
          [values](Deployment& s, std::size_t i) { s.relay = NodePose::cartesian(values[i], 0.0); }};
}

enum class RoadLayout { Intersection, Highway };

inline const char* to_string(RoadLayout r) {
  return r == RoadLayout::Intersection ? "intersection" : "highway";
}

// Copy of the setup with the Y road removed.
inline Deployment highway_scenario(Deployment s) {
  s.cfg.traffic.lambda_y = 0.0;
  return s;
}

// Must precede any lambda axis so that the highway keeps lambda_Y = 0.
inline Axis road_axis(std::vector<RoadLayout> values) {
  std::vector<Cell> labels;
  for (auto v : values) labels.emplace_back(std::string(to_string(v)));
  return {"road", labels, [values](Deployment& s, std::size_t i) {
            if (values[i] == RoadLayout::Highway)
              s = highway_scenario(s);
            else if (s.cfg.traffic.lambda_y == 0.0)
              s.cfg.traffic.lambda_y = s.cfg.traffic.lambda_x;
          }};
}

enum class Metric { Outage, Throughput };

struct Evaluators {
  bool analytic = true;
  bool monte_carlo = false;
  TrialConfig trial;
};

struct SweepSpec {
  std::string name;
  std::string description;
  Deployment base;
  std::vector<Axis> axes;
  Evaluators evaluators;
  Metric metric = Metric::Outage;
  unsigned threads = 0;  // row-level parallelism, same convention as TrialConfig

  void validate() const {
    for (const auto& a : axes)
      if (a.labels.empty()) throw ConfigError("sweep axis '" + a.column + "' has an empty grid");
    if (!evaluators.analytic && !evaluators.monte_carlo)
      throw ConfigError("sweep requests no evaluator");
    if (evaluators.monte_carlo) evaluators.trial.validate();
  }
};

inline std::vector<std::string> value_columns(Metric m) {
  if (m == Metric::Throughput) return {"throughput_analytic", "throughput_mc", "stderr"};
  return {"op_analytic", "op_mc", "stderr"};
}

namespace detail {

// Mixed-radix decoding with the first axis outermost.
inline std::vector<std::size_t> grid_indices(const std::vector<Axis>& axes, std::size_t flat) {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    idx[k] = flat % axes[k].size();
    flat /= axes[k].size();
  }
  return idx;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Every grid point of the cartesian product, first axis outermost. A point
// whose evaluation throws gets "error: <message>" in its analytic cell and
// empty value cells; the sweep continues. Simulation rows use the seed
// block_seed(trial.seed, row index), so each row is reproducible on its own.
inline Table run_sweep(const SweepSpec& spec) {
  spec.validate();
  Table table;
  for (const auto& a : spec.axes) table.columns.push_back(a.column);
  for (auto& c : value_columns(spec.metric)) table.columns.push_back(c);

  std::size_t total = 1;
  for (const auto& a : spec.axes) total *= a.size();
  table.rows.resize(total);
  std::vector<char> failed(total, 0);

  const unsigned threads = resolve_threads(spec.threads);
  auto eval_row = [&](std::size_t row) {
    const auto idx = detail::grid_indices(spec.axes, row);
    Deployment setup = spec.base;
    std::vector<Cell> cells;
    for (std::size_t k = 0; k < spec.axes.size(); ++k) {
      spec.axes[k].apply(setup, idx[k]);
      cells.push_back(spec.axes[k].labels[idx[k]]);
    }
    try {
      const Scenario sc = setup.instantiate();
      const double theta = sc.theta();
      auto metric = [&](double op) {
        return spec.metric == Metric::Throughput ? throughput(theta, 1.0 - op) : op;
      };
      Cell analytic = std::string();
      Cell mc = std::string();
      Cell se = std::string();
      if (spec.evaluators.analytic) analytic = metric(outage(sc, setup.cfg).total);
      if (spec.evaluators.monte_carlo) {
        TrialConfig trial = spec.evaluators.trial;
        trial.seed = block_seed(trial.seed, row);
        if (threads > 1) trial.threads = 1;
        const auto est = estimate_outage(sc, setup.cfg, trial);
        mc = metric(est.p_hat);
        se = spec.metric == Metric::Throughput ? est.std_error * std::log2(1.0 + theta) : est.std_error;
      }
      cells.push_back(analytic);
      cells.push_back(mc);
      cells.push_back(se);
    } catch (const std::exception& e) {
      cells.resize(spec.axes.size());
      cells.emplace_back(std::string("error: ") + e.what());
      cells.emplace_back(std::string());
      cells.emplace_back(std::string());
      failed[row] = 1;
    }
    table.rows[row] = std::move(cells);
  };
  detail::parallel_for(total, threads, eval_row);
  table.error_rows = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return table;
}

struct RelayChoice {
  NodePose pose;
  double outage = 0.0;
  std::size_t index = 0;
};

// Relative gap under which two outage values count as a tie (plus 1e-15
// absolute, for outages that are zero up to rounding).
inline constexpr double kRelayTieTolerance = 1e-12;

// Analytic argmin over candidate relay positions. Ties go to the candidate
// nearest the S-D midpoint, then to the earlier candidate.
inline RelayChoice optimal_relay_position(const Deployment& base, const std::vector<NodePose>& grid) {
  if (grid.empty()) throw ConfigError("relay grid is empty");
  if (base.scenario.scheme == Scheme::Direct) throw ConfigError("relay placement needs a cooperative scheme");
  const auto src = cartesian(base.scenario.source);
  const auto dst = cartesian(base.scenario.destination);
  const auto mid = NodePose::cartesian(0.5 * (src.x + dst.x), 0.5 * (src.y + dst.y));

  std::optional<RelayChoice> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Deployment s = base;
    s.relay = grid[i];
    const double op = outage(s.instantiate(), s.cfg).total;
    if (!best) {
      best = RelayChoice{grid[i], op, i};
      continue;
    }
    const double tol = kRelayTieTolerance * std::max(std::abs(op), std::abs(best->outage)) + 1e-15;
    if (op < best->outage - tol) {
      best = RelayChoice{grid[i], op, i};
    } else if (std::abs(op - best->outage) <= tol &&
               distance(grid[i], mid) < distance(best->pose, mid)) {
      best = RelayChoice{grid[i], op, i};
    }
  }
  return *best;
}

// Source at (s, 0) on the X road, destination at (0, d) on the Y road, relay
// at (c, c) on the first bisector. Columns: s_dist, d_dist, relay_c,
// op_analytic, in that nesting order.
inline Table bisector_relay_study(const Deployment& base, const std::vector<double>& s_grid,
                                  const std::vector<double>& d_grid, const std::vector<double>& relay_c) {
  if (s_grid.empty() || d_grid.empty() || relay_c.empty()) throw ConfigError("bisector grids must be non-empty");
  if (base.scenario.scheme == Scheme::Direct) throw ConfigError("bisector study needs a cooperative scheme");
  SweepSpec spec;
  spec.base = base;
  spec.axes.push_back({"s_dist", numeric_labels(s_grid), [s_grid](Deployment& s, std::size_t i) {
                         s.scenario.source = NodePose::cartesian(s_grid[i], 0.0);
                       }});
  spec.axes.push_back({"d_dist", numeric_labels(d_grid), [d_grid](Deployment& s, std::size_t i) {
                         s.scenario.destination = NodePose::cartesian(0.0, d_grid[i]);
                       }});
  spec.axes.push_back({"relay_c", numeric_labels(relay_c), [relay_c](Deployment& s, std::size_t i) {
                         s.relay = NodePose::cartesian(relay_c[i], relay_c[i]);
                       }});
  Table full = run_sweep(spec);
  Table out;
  out.columns = {"s_dist", "d_dist", "relay_c", "op_analytic"};
  out.error_rows = full.error_rows;
  for (auto& r : full.rows) out.rows.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

// Greedy relay-set growth on a bisector study: step k adds the relay that
// most lowers the mean (over all (s, d) cells) of the best outage achievable
// with the relays chosen so far. Columns: relays, relay_c, mean_best_op,
// max_best_op.
inline Table relay_saturation_curve(const Table& study) {
  const auto cs = study.column_index("s_dist");
  const auto cd = study.column_index("d_dist");
  const auto cr = study.column_index("relay_c");
  const auto co = study.column_index("op_analytic");

  std::vector<double> relays;
  std::vector<std::pair<double, double>> cells;
  for (const auto& r : study.rows) {
    const double c = std::get<double>(r[cr]);
    if (std::find(relays.begin(), relays.end(), c) == relays.end()) relays.push_back(c);
    const std::pair<double, double> cell{std::get<double>(r[cs]), std::get<double>(r[cd])};
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
  }
  // op[cell][relay]
  std::vector<std::vector<double>> op(cells.size(), std::vector<double>(relays.size(), 1.0));
  for (const auto& r : study.rows) {
    const auto* v = std::get_if<double>(&r[co]);
    if (!v) continue;
    const std::pair<double, double> cell{std::get<double>(r[cs]), std::get<double>(r[cd])};
    const auto ci = std::find(cells.begin(), cells.end(), cell) - cells.begin();
    const auto ri = std::find(relays.begin(), relays.end(), std::get<double>(r[cr])) - relays.begin();
    op[static_cast<std::size_t>(ci)][static_cast<std::size_t>(ri)] = *v;
  }

  Table out;
  out.columns = {"relays", "relay_c", "mean_best_op", "max_best_op"};
  std::vector<double> best(cells.size(), std::numeric_limits<double>::infinity());
  std::vector<char> used(relays.size(), 0);
  for (std::size_t k = 1; k <= relays.size(); ++k) {
    std::size_t pick = 0;
    double pick_mean = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < relays.size(); ++j) {
      if (used[j]) continue;
      double sum = 0.0;
      for (std::size_t c = 0; c < cells.size(); ++c) sum += std::min(best[c], op[c][j]);
      const double mean = sum / static_cast<double>(cells.size());
      if (mean < pick_mean) {
        pick_mean = mean;
        pick = j;
      }
    }
    used[pick] = 1;
    double worst = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      best[c] = std::min(best[c], op[c][pick]);
      worst = std::max(worst, best[c]);
    }
    out.rows.push_back({static_cast<double>(k), relays[pick], pick_mean, worst});
  }
  return out;
}

struct CurveArgmax {
  double lambda = 0.0;
  Mobility mobility = Mobility::HSV;
  double theta = 0.0;
  double throughput = 0.0;
  bool interior = false;  // argmax strictly inside the theta grid
};

struct ThroughputStudy {
  Table table;  // theta, lambda, model, throughput_analytic, throughput_mc, stderr
  std::vector<CurveArgmax> argmax;
};

inline ThroughputStudy throughput_sweep(const Deployment& base, const std::vector<double>& theta_grid,
                                        const std::vector<double>& lambdas,
                                        const std::vector<Mobility>& models, Evaluators evaluators = {}) {
  SweepSpec spec;
  spec.base = base;
  spec.metric = Metric::Throughput;
  spec.evaluators = evaluators;
  spec.axes = {theta_axis(theta_grid), lambda_axis(lambdas), mobility_axis(models)};
  ThroughputStudy study;
  study.table = run_sweep(spec);

  const auto col = study.table.column_index(evaluators.analytic ? "throughput_analytic" : "throughput_mc");
  const std::size_t per_theta = lambdas.size() * models.size();
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      CurveArgmax best{lambdas[li], models[mi], 0.0, -1.0, false};
      std::size_t best_t = 0;
      for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
        const auto& cell = study.table.rows[ti * per_theta + li * models.size() + mi][col];
        const auto* v = std::get_if<double>(&cell);
        if (v && *v > best.throughput) {
          best.throughput = *v;
          best.theta = theta_grid[ti];
          best_t = ti;
        }
      }
      best.interior = best_t > 0 && best_t + 1 < theta_grid.size();
      study.argmax.push_back(best);
    }
  }
  return study;
}

// Analytic-vs-simulation check points: every evaluator path on a compact
// off-axis geometry with roads of half-length 2000 m, so that simulation and
// analysis describe exactly the same network.
struct ValidationPoint {
  std::string path;  // direct, sc-hsv, sc-lsv, mrc-hsv, mrc-lsv
  double lambda = 0.0;
  double p = 0.0;
  double theta = 0.0;
  Deployment setup;
};

inline std::vector<ValidationPoint> validation_grid() {
  struct Path {
    const char* name;
    Scheme scheme;
    Mobility mobility;
  };
  const Path paths[] = {{"direct", Scheme::Direct, Mobility::HSV},
                        {"sc-hsv", Scheme::SC, Mobility::HSV},
                        {"sc-lsv", Scheme::SC, Mobility::LSV},
                        {"mrc-hsv", Scheme::MRC, Mobility::HSV},
                        {"mrc-lsv", Scheme::MRC, Mobility::LSV}};
  std::vector<ValidationPoint> grid;
  for (const auto& path : paths) {
    for (double lambda : {0.01, 0.05, 0.1}) {
      for (double p : {0.05, 0.5}) {
        for (double theta : {1.0, 7.0}) {
          ValidationPoint v;
          v.path = path.name;
          v.lambda = lambda;
          v.p = p;
          v.theta = theta;
          Deployment& s = v.setup;
          s.scenario.source = NodePose::cartesian(-40.0, 0.0);
          s.scenario.destination = NodePose::cartesian(0.0, 60.0);
          s.relay = NodePose::cartesian(10.0, 10.0);
          s.scenario.scheme = path.scheme;
          s.scenario.mobility = path.mobility;
          s.scenario.target = DecodingThreshold{theta};
          s.cfg.traffic = {lambda, lambda, p};
          s.cfg.road = RoadGeometry::finite(2000.0);
          grid.push_back(std::move(v));
        }
      }
    }
  }
  return grid;
}

struct ValidationReport {
  Table table;  // path, lambda, p, theta, op_analytic, op_mc, stderr, abs_diff, tolerance, pass
  bool all_pass = true;
};

// Tolerance per point: max(3 stderr, 0.01).
inline ValidationReport run_validation(const std::vector<ValidationPoint>& grid, const TrialConfig& trial) {
  ValidationReport rep;
  rep.table.columns = {"path", "lambda", "p", "theta", "op_analytic", "op_mc",
                       "stderr", "abs_diff", "tolerance", "pass"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& v = grid[i];
    const Scenario sc = v.setup.instantiate();
    const double analytic = outage(sc, v.setup.cfg).total;
    TrialConfig t = trial;
    t.seed = block_seed(trial.seed, i);
    const auto est = estimate_outage(sc, v.setup.cfg, t);
    const double diff = std::abs(est.p_hat - analytic);
    const double tol = std::max(3.0 * est.std_error, 0.01);
    const bool pass = diff <= tol;
    rep.all_pass = rep.all_pass && pass;
    rep.table.rows.push_back({v.path, v.lambda, v.p, v.theta, analytic, est.p_hat, est.std_error, diff, tol,
                              std::string(pass ? "yes" : "no")});
  }
  return rep;
}

}  // namespace crossroad
