#pragma once

// Analytical outage probabilities of direct and decode-and-forward
// transmissions (selection combining and maximum ratio combining) under
// independent (HSV) or correlated (LSV) interference.

#include <cmath>
#include <numbers>
#include <vector>

#include "crossroad/geometry.hpp"
#include "crossroad/laplace.hpp"

namespace crossroad {

struct OutageBreakdown {
  double p_first_phase = 0.0;   // P[O_SR and O_SD]
  double p_second_phase = 0.0;  // P[not O_SR and O_RD] (SC) or P[not O_SR and O_SRD] (MRC)
  double total = 0.0;
};

struct EvalOptions {
  // Replace the LSV cross terms rho_X, rho_Y by 1.
  bool unit_cross_terms = false;
};

// Relative gap |l_RD - l_SD| / max below which MRC uses the equal-gain limit.
inline constexpr double kMrcEqualGainTolerance = 1e-9;

// CCDF of l_RD E1 + l_SD E2 with E1, E2 unit-mean exponentials.
//
// Evaluated as exp(-u/l1) (1 + (u/l1) phi(x)) with phi(x) = expm1(x)/x and
// x = -(l1 - l2) u / (l1 l2), which is continuous through l1 == l2 where it
// becomes the Erlang-2 form (1 + u/l) exp(-u/l).
inline double ccdf_sum_two_exp(double u, double l_rd, double l_sd) {
  if (!(l_rd > 0.0) || !(l_sd > 0.0)) throw ConfigError("path gains must be > 0");
  if (!(u >= 0.0)) throw ConfigError("CCDF argument must be >= 0");
  const double x = -(l_rd - l_sd) * u / (l_rd * l_sd);
  const double phi = x == 0.0 ? 1.0 : std::expm1(x) / x;
  return std::exp(-u / l_rd) * (1.0 + (u / l_rd) * phi);
}

// Shannon-bound throughput, bits per channel use.
inline double throughput(double theta, double success_probability) {
  if (!(theta >= 0.0)) throw ConfigError("decoding threshold must be >= 0");
  if (!(success_probability >= 0.0 && success_probability <= 1.0))
    throw ConfigError("success probability must lie in [0, 1]");
  return success_probability * std::log2(1.0 + theta);
}

// Evaluates every term of one scenario, caching the Laplace transforms that
// the first- and second-phase expressions share.
class OutageEvaluator {
 public:
  OutageEvaluator(Scenario scenario, NetworkConfig cfg, EvalOptions opts = {})
      : scenario_(std::move(scenario)), cfg_(std::move(cfg)), opts_(opts) {
    scenario_.validate();
    cfg_.validate();
    theta_ = scenario_.theta();
    sd_ = link_budget(scenario_.source, scenario_.destination, theta_, cfg_.channel);
    if (scenario_.relay) {
      sr_ = link_budget(scenario_.source, *scenario_.relay, theta_, cfg_.channel);
      rd_ = link_budget(*scenario_.relay, scenario_.destination, theta_, cfg_.channel);
    }
  }

  const LinkBudget& budget_sd() const { return sd_; }
  const LinkBudget& budget_sr() const { require_relay(); return sr_; }
  const LinkBudget& budget_rd() const { require_relay(); return rd_; }

  double success_sd() { return sd_.noise_factor * std::exp(log_marginal(Node::Destination, sd_.k)); }

  double success_sr() {
    require_relay();
    return sr_.noise_factor * std::exp(log_marginal(Node::Relay, sr_.k));
  }

  double outage_direct() { return 1.0 - success_sd(); }

  // P[O_SR and O_SD] = 1 - P[O_SR^c] - P[O_SD^c] + P[O_SR^c and O_SD^c].
  double p_first_phase() {
    require_relay();
    const double joint = sr_.noise_factor * sd_.noise_factor * std::exp(log_joint(sr_.k, sd_.k));
    return 1.0 - success_sd() - success_sr() + joint;
  }

  double p_second_phase_sc() {
    require_relay();
    const double relay_decodes = success_sr();
    const double both = sr_.noise_factor * rd_.noise_factor * std::exp(log_joint(sr_.k, rd_.k));
    return relay_decodes - both;
  }

  double p_second_phase_mrc() {
    require_relay();
    const double relay_decodes = success_sr();
    const double l_rd = rd_.path_gain;
    const double l_sd = sd_.path_gain;
    const double gap = l_rd - l_sd;
    if (std::abs(gap) <= kMrcEqualGainTolerance * std::max(l_rd, l_sd)) {
      // Erlang-2 limit: E[e^{-K_SR I_R} (1 + K X) e^{-K X}], X = sigma^2 + I_D.
      const double k = rd_.k;
      const double log_j = log_joint(sr_.k, k);
      const double slope = joint_slope_b(sr_.k, k);
      const double weight = 1.0 + k * cfg_.channel.noise - slope;
      return relay_decodes - sr_.noise_factor * rd_.noise_factor * std::exp(log_j) * weight;
    }
    const double via_relay = sr_.noise_factor * rd_.noise_factor * std::exp(log_joint(sr_.k, rd_.k)) * l_rd;
    const double via_source = sr_.noise_factor * sd_.noise_factor * std::exp(log_joint(sr_.k, sd_.k)) * l_sd;
    return relay_decodes - (via_relay - via_source) / gap;
  }

  OutageBreakdown outage() {
    OutageBreakdown out;
    switch (scenario_.scheme) {
      case Scheme::Direct:
        out.total = out.p_first_phase = outage_direct();
        return out;
      case Scheme::SC:
        out.p_first_phase = p_first_phase();
        out.p_second_phase = p_second_phase_sc();
        break;
      case Scheme::MRC:
        out.p_first_phase = p_first_phase();
        out.p_second_phase = p_second_phase_mrc();
        break;
    }
    out.total = out.p_first_phase + out.p_second_phase;
    return out;
  }

 private:
  enum class Node { Relay, Destination };

  struct CacheEntry {
    int key = 0;
    double s = 0.0;
    double value = 0.0;
  };

  void require_relay() const {
    if (!scenario_.relay) throw ConfigError("cooperative terms need a relay");
  }

  const NodePose& pose(Node n) const {
    return n == Node::Relay ? *scenario_.relay : scenario_.destination;
  }

  template <class Compute>
  double memo(int key, double s, Compute&& compute) {
    for (const auto& e : cache_)
      if (e.key == key && e.s == s) return e.value;
    const double v = compute();
    cache_.push_back({key, s, v});
    return v;
  }

  // log(L_X(s) L_Y(s)) at the node.
  double log_marginal(Node n, double s) {
    return memo(static_cast<int>(n), s, [&] {
      return log_laplace(Road::X, pose(n), s, cfg_) + log_laplace(Road::Y, pose(n), s, cfg_);
    });
  }

  bool correlated() const { return scenario_.mobility == Mobility::LSV && !opts_.unit_cross_terms; }

  // log E[exp(-s I_R - b I_D)] over both roads.
  double log_joint(double s, double b) {
    double v = log_marginal(Node::Relay, s) + log_marginal(Node::Destination, b);
    if (correlated()) {
      const auto& relay = *scenario_.relay;
      const auto& dest = scenario_.destination;
      v += log_rho(Road::X, s, b, relay, dest, cfg_) + log_rho(Road::Y, s, b, relay, dest, cfg_);
    }
    return v;
  }

  // b * d/db log E[exp(-s I_R - b I_D)].
  double joint_slope_b(double s, double b) {
    const auto& dest = scenario_.destination;
    double v = log_laplace_slope(Road::X, dest, b, cfg_) + log_laplace_slope(Road::Y, dest, b, cfg_);
    if (correlated()) {
      const auto& relay = *scenario_.relay;
      v += log_rho_slope_b(Road::X, s, b, relay, dest, cfg_) +
           log_rho_slope_b(Road::Y, s, b, relay, dest, cfg_);
    }
    return v;
  }

  Scenario scenario_;
  NetworkConfig cfg_;
  EvalOptions opts_;
  double theta_ = 0.0;
  LinkBudget sd_;
  LinkBudget sr_;
  LinkBudget rd_;
  std::vector<CacheEntry> cache_;
};

inline OutageBreakdown outage(const Scenario& scenario, const NetworkConfig& cfg, EvalOptions opts = {}) {
  return OutageEvaluator(scenario, cfg, opts).outage();
}

// The destination may sit anywhere on the plane.
inline double outage_direct(const NodePose& dest, const NodePose& source, double theta,
                            const NetworkConfig& cfg) {
  Scenario sc;
  sc.source = source;
  sc.destination = dest;
  sc.scheme = Scheme::Direct;
  sc.target = DecodingThreshold{theta};
  return OutageEvaluator(sc, cfg).outage_direct();
}

inline double success_sd(const Scenario& scenario, const NetworkConfig& cfg) {
  return OutageEvaluator(scenario, cfg).success_sd();
}

inline double success_sr(const Scenario& scenario, const NetworkConfig& cfg) {
  return OutageEvaluator(scenario, cfg).success_sr();
}

inline double p_first_phase(const Scenario& scenario, const NetworkConfig& cfg, EvalOptions opts = {}) {
  return OutageEvaluator(scenario, cfg, opts).p_first_phase();
}

inline double p_second_phase_sc(const Scenario& scenario, const NetworkConfig& cfg,
                                EvalOptions opts = {}) {
  return OutageEvaluator(scenario, cfg, opts).p_second_phase_sc();
}

inline double p_second_phase_mrc(const Scenario& scenario, const NetworkConfig& cfg,
                                 EvalOptions opts = {}) {
  return OutageEvaluator(scenario, cfg, opts).p_second_phase_mrc();
}

}  // namespace crossroad
