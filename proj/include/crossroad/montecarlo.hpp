#pragma once

// Monte Carlo simulation of the two-road network: Poisson vehicles on each
// road, ALOHA access, Rayleigh fading, and the outage events of direct and
// two-slot decode-and-forward transmissions.
//
// Trials are grouped into fixed-size blocks. Block b draws from an engine
// seeded by mix(seed, b), and block results are merged in block order, so an
// estimate never depends on how many threads produced it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "crossroad/geometry.hpp"

namespace crossroad {

struct TrialConfig {
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  double sim_window = 1e4;  // half-width of each simulated road when roads are infinite
  unsigned threads = 0;     // 0: CROSSROAD_THREADS, else hardware concurrency

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(sim_window > 0.0) || !std::isfinite(sim_window)) throw ConfigError("sim_window must be > 0");
  }
};

struct OutageEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

inline constexpr std::int64_t kTrialsPerBlock = 512;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ splitmix64(block + 0x632be59bd9b4e019ULL));
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CROSSROAD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Vehicle positions on [-half_width, half_width].
template <class URBG>
std::vector<double> sample_road_ppp(double lambda, double half_width, URBG& rng) {
  if (!(lambda >= 0.0)) throw ConfigError("intensity must be >= 0");
  if (!(half_width > 0.0)) throw ConfigError("road half-width must be > 0");
  std::vector<double> pts;
  if (lambda == 0.0) return pts;
  std::poisson_distribution<std::int64_t> count(2.0 * lambda * half_width);
  std::uniform_real_distribution<double> pos(-half_width, half_width);
  const auto n = count(rng);
  pts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pts.push_back(pos(rng));
  return pts;
}

template <class URBG>
std::vector<double> aloha_thin(std::span<const double> points, double p, URBG& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("access probability must lie in [0, 1]");
  std::vector<double> kept;
  if (p == 0.0) return kept;
  if (p == 1.0) return {points.begin(), points.end()};
  std::bernoulli_distribution access(p);
  for (double x : points)
    if (access(rng)) kept.push_back(x);
  return kept;
}

// Transmitting vehicles of one road. Equivalent in law to thinning a full
// sample, but draws the retained count Binomial(N, p) first and only places
// the survivors.
template <class URBG>
void sample_active_interferers(double lambda, double p, double half_width, URBG& rng,
                               std::vector<double>& out) {
  out.clear();
  if (lambda == 0.0 || p == 0.0) return;
  std::poisson_distribution<std::int64_t> count(2.0 * lambda * half_width);
  std::int64_t n = count(rng);
  if (p < 1.0) n = std::binomial_distribution<std::int64_t>(n, p)(rng);
  std::uniform_real_distribution<double> pos(-half_width, half_width);
  for (std::int64_t i = 0; i < n; ++i) out.push_back(pos(rng));
}

struct RayleighPowerFading {
  template <class URBG>
  double operator()(URBG& rng) const {
    return std::exponential_distribution<double>(1.0)(rng);
  }
};

struct UnitFading {
  template <class URBG>
  double operator()(URBG&) const {
    return 1.0;
  }
};

namespace detail {

inline double received_gain(double dist_sq, const ChannelParams& ch) {
  const double a2 = ch.antenna * ch.antenna;
  if (ch.alpha == 2.0) return 1.0 / (a2 * dist_sq);
  return std::pow(a2 * dist_sq, -0.5 * ch.alpha);
}

// Moves interferers that coincide with the receiver to a fresh uniform spot.
template <class URBG>
double nonzero_dist_sq(double& pos, double along, double across_sq, double half_width, URBG& rng) {
  for (;;) {
    const double d = pos - along;
    const double r2 = across_sq + d * d;
    if (r2 > 0.0) return r2;
    pos = std::uniform_real_distribution<double>(-half_width, half_width)(rng);
  }
}

}  // namespace detail

// Sum over both roads of P E_i l(r_i). Positions are along-road coordinates;
// `half_width` is only used to re-sample a point that lands on the receiver.
template <class URBG, class Fading = RayleighPowerFading>
double aggregate_interference(const NodePose& receiver, std::span<double> x_points,
                              std::span<double> y_points, URBG& rng, const ChannelParams& ch,
                              double half_width, Fading fading = {}) {
  const double rx = receiver.x();
  const double ry = receiver.y();
  double total = 0.0;
  for (double& x : x_points) {
    const double r2 = detail::nonzero_dist_sq(x, rx, ry * ry, half_width, rng);
    total += fading(rng) * detail::received_gain(r2, ch);
  }
  for (double& y : y_points) {
    const double r2 = detail::nonzero_dist_sq(y, ry, rx * rx, half_width, rng);
    total += fading(rng) * detail::received_gain(r2, ch);
  }
  return ch.power * total;
}

namespace detail {

inline double simulation_window(const NetworkConfig& cfg, const TrialConfig& trial) {
  return cfg.road.is_finite() ? cfg.road.half_length() : trial.sim_window;
}

// Runs `block_fn(engine, count)` for every block and returns the per-block
// results in block order.
template <class Result, class BlockFn>
std::vector<Result> run_blocks(const TrialConfig& trial, BlockFn&& block_fn) {
  const std::int64_t blocks = (trial.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<Result> results(static_cast<std::size_t>(blocks));
  auto work = [&](std::int64_t b) {
    std::mt19937_64 rng(block_seed(trial.seed, static_cast<std::uint64_t>(b)));
    const std::int64_t count = std::min(kTrialsPerBlock, trial.trials - b * kTrialsPerBlock);
    results[static_cast<std::size_t>(b)] = block_fn(rng, count);
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::int64_t>(resolve_threads(trial.threads), blocks));
  if (threads <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) work(b);
    return results;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::int64_t b = t; b < blocks; b += threads) work(b);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

struct Interferers {
  std::vector<double> x;
  std::vector<double> y;

  template <class URBG>
  void draw(const TrafficParams& t, double half_width, URBG& rng) {
    sample_active_interferers(t.lambda_x, t.access_prob, half_width, rng, x);
    sample_active_interferers(t.lambda_y, t.access_prob, half_width, rng, y);
  }
};

}  // namespace detail

// Frequency of the outage event. HSV draws an independent interferer
// configuration for every (receiver, slot) observation; LSV draws one per
// trial and reuses it for all of them. Fading is always fresh per
// observation, and the S->D term inside the MRC combination is drawn
// independently of the first-slot S->D fading.
inline OutageEstimate estimate_outage(const Scenario& scenario, const NetworkConfig& cfg,
                                      const TrialConfig& trial) {
  scenario.validate();
  cfg.validate();
  trial.validate();
  const double theta = scenario.theta();
  const double window = detail::simulation_window(cfg, trial);
  const ChannelParams ch = cfg.channel;
  const double noise = ch.noise;
  const double p_sd = ch.power * path_loss(distance(scenario.source, scenario.destination), ch);
  const bool coop = scenario.scheme != Scheme::Direct;
  const double p_sr = coop ? ch.power * path_loss(distance(scenario.source, *scenario.relay), ch) : 0.0;
  const double p_rd =
      coop ? ch.power * path_loss(distance(*scenario.relay, scenario.destination), ch) : 0.0;
  const bool shared = scenario.mobility == Mobility::LSV;

  auto block = [&](std::mt19937_64& rng, std::int64_t count) -> std::int64_t {
    RayleighPowerFading fade;
    detail::Interferers pts;
    std::int64_t outages = 0;
    auto interference = [&](const NodePose& rx) {
      if (!shared) pts.draw(cfg.traffic, window, rng);
      return aggregate_interference(rx, pts.x, pts.y, rng, ch, window, fade);
    };
    for (std::int64_t i = 0; i < count; ++i) {
      if (shared) pts.draw(cfg.traffic, window, rng);
      const double i_d1 = interference(scenario.destination);
      const bool o_sd = p_sd * fade(rng) < theta * (noise + i_d1);
      bool out = o_sd;
      if (coop) {
        const double i_r1 = interference(*scenario.relay);
        const bool o_sr = p_sr * fade(rng) < theta * (noise + i_r1);
        const double i_d2 = interference(scenario.destination);
        double signal = p_rd * fade(rng);
        if (scenario.scheme == Scheme::MRC) signal += p_sd * fade(rng);
        const bool o_second = signal < theta * (noise + i_d2);
        out = o_sr ? o_sd : o_second;
      }
      outages += out ? 1 : 0;
    }
    return outages;
  };

  const auto counts = detail::run_blocks<std::int64_t>(trial, block);
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  OutageEstimate est;
  est.trials = trial.trials;
  est.p_hat = static_cast<double>(total) / static_cast<double>(trial.trials);
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trial.trials));
  return est;
}

// Sample mean of exp(-s I_R - b I_D) when the relay and the destination see
// the same transmitters (fading independent per receiver). Both roads of
// `cfg` contribute; set one intensity to zero to isolate a road.
inline MeanEstimate estimate_joint_laplace(double s, double b, const NodePose& relay, const NodePose& dest,
                                           const NetworkConfig& cfg, const TrialConfig& trial) {
  cfg.validate();
  trial.validate();
  if (!(s >= 0.0) || !(b >= 0.0)) throw ConfigError("Laplace arguments must be >= 0");
  const double window = detail::simulation_window(cfg, trial);

  struct Sums {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  auto block = [&](std::mt19937_64& rng, std::int64_t count) -> Sums {
    detail::Interferers pts;
    Sums acc;
    for (std::int64_t i = 0; i < count; ++i) {
      pts.draw(cfg.traffic, window, rng);
      const double i_r = aggregate_interference(relay, pts.x, pts.y, rng, cfg.channel, window);
      const double i_d = aggregate_interference(dest, pts.x, pts.y, rng, cfg.channel, window);
      // Written so that s = 0 or b = 0 never forms 0 * inf.
      const double e = (s == 0.0 ? 0.0 : s * i_r) + (b == 0.0 ? 0.0 : b * i_d);
      const double v = std::exp(-e);
      acc.sum += v;
      acc.sum_sq += v * v;
    }
    return acc;
  };

  const auto parts = detail::run_blocks<Sums>(trial, block);
  Sums tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(trial.trials);
  MeanEstimate est;
  est.trials = trial.trials;
  est.mean = tot.sum / n;
  const double var = std::max(0.0, tot.sum_sq / n - est.mean * est.mean);
  est.std_error = trial.trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return est;
}

}  // namespace crossroad
