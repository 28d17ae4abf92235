#pragma once

// Laplace transforms of the aggregate interference that one road's ALOHA
// transmitters produce at an arbitrary point of the plane, together with the
// cross-correlation terms that couple two receivers observing the same
// interferer set.
//
// Everything is computed on the exponent first and exponentiated last: for
// realistic link budgets s is of order 1e10 and the exponents can be large.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "crossroad/geometry.hpp"
#include "crossroad/quadrature.hpp"

namespace crossroad {

enum class Road { X, Y };

namespace detail {

// Coordinates of a node in the frame of one road: `along` is the projection
// onto the road, `across` the perpendicular offset.
struct RoadFrame {
  double along = 0.0;
  double across = 0.0;
};

inline RoadFrame road_frame(const NodePose& node, Road road) {
  return road == Road::X ? RoadFrame{node.x(), node.y()} : RoadFrame{node.y(), node.x()};
}

inline double road_intensity(const TrafficParams& t, Road road) {
  return road == Road::X ? t.lambda_x : t.lambda_y;
}

// Distance at which s P l(r) = 1, i.e. (s P)^(1/alpha) / A.
inline double characteristic_radius(double s, const ChannelParams& ch) {
  return std::pow(s * ch.power, 1.0 / ch.alpha) / ch.antenna;
}

// s P l / (1 + s P l) written through the characteristic radius; the
// complement is returned through `complement` when requested.
inline double captured_fraction(double dist_sq, double r0, double alpha, double* complement = nullptr) {
  const double t = std::pow(dist_sq / (r0 * r0), 0.5 * alpha);
  if (complement) *complement = t / (1.0 + t);
  return 1.0 / (1.0 + t);
}

// Integrates f(dx) over the road, where dx is the signed offset from
// `center` along the road. Uses x = center + scale * tan(u) so that the
// infinite line maps onto (-pi/2, pi/2).
template <class F>
double road_integral(F&& f, double center, double scale, const RoadGeometry& road,
                     std::span<const double> interior_offsets, const QuadratureSettings& quad) {
  double u_lo = -0.5 * std::numbers::pi;
  double u_hi = 0.5 * std::numbers::pi;
  if (road.is_finite()) {
    u_lo = std::atan((-road.half_length() - center) / scale);
    u_hi = std::atan((road.half_length() - center) / scale);
  }
  std::array<double, 3> cuts{};
  std::size_t ncuts = 0;
  for (double off : interior_offsets) {
    if (ncuts < cuts.size()) cuts[ncuts++] = std::atan(off / scale);
  }
  auto integrand = [&](double u) {
    const double c = std::cos(u);
    const double dx = scale * std::tan(u);
    return f(dx) * scale / (c * c);
  };
  return integrate(integrand, u_lo, u_hi, quad, std::span<const double>(cuts.data(), ncuts)).value;
}

}  // namespace detail

// log of the Laplace transform of one road's interference at `node`,
// always by quadrature (any alpha > 1).
inline double log_laplace_numeric(Road road, const NodePose& node, double s, const NetworkConfig& cfg) {
  cfg.validate();
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  const double density = cfg.traffic.access_prob * detail::road_intensity(cfg.traffic, road);
  if (s == 0.0 || density == 0.0) return 0.0;

  const auto frame = detail::road_frame(node, road);
  const double r0 = detail::characteristic_radius(s, cfg.channel);
  const double scale = std::hypot(frame.across, r0);
  const double across_sq = frame.across * frame.across;
  const double alpha = cfg.channel.alpha;
  const std::array<double, 1> centre_cut{0.0};
  const double integral = detail::road_integral(
      [&](double dx) { return detail::captured_fraction(across_sq + dx * dx, r0, alpha); },
      frame.along, scale, cfg.road, centre_cut, cfg.quadrature);
  return -density * integral;
}

inline double laplace_x_numeric(const NodePose& node, double s, const NetworkConfig& cfg) {
  return std::exp(log_laplace_numeric(Road::X, node, s, cfg));
}

inline double laplace_y_numeric(const NodePose& node, double s, const NetworkConfig& cfg) {
  return std::exp(log_laplace_numeric(Road::Y, node, s, cfg));
}

namespace detail {

inline void require_free_space(const ChannelParams& ch) {
  if (ch.alpha != 2.0) throw ConfigError("closed-form Laplace transforms require alpha == 2");
}

// Infinite road, alpha = 2: -p lambda k pi / sqrt(across^2 + k), k = sP/A^2.
inline double log_laplace_closed_infinite(Road road, const NodePose& node, double s,
                                          const TrafficParams& traffic, const ChannelParams& ch) {
  require_free_space(ch);
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  const double density = traffic.access_prob * road_intensity(traffic, road);
  if (s == 0.0 || density == 0.0) return 0.0;
  const double k = s * ch.power / (ch.antenna * ch.antenna);
  const double across = road_frame(node, road).across;
  return -density * k * std::numbers::pi / std::sqrt(across * across + k);
}

// Road [-Z, Z], alpha = 2: the arctan pair depends on both coordinates.
inline double log_laplace_closed_finite(Road road, const NodePose& node, double s,
                                        const TrafficParams& traffic, const ChannelParams& ch,
                                        double half_length) {
  require_free_space(ch);
  if (!(half_length > 0.0)) throw ConfigError("finite road half-length Z must be > 0");
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  const double density = traffic.access_prob * road_intensity(traffic, road);
  if (s == 0.0 || density == 0.0) return 0.0;
  const double k = s * ch.power / (ch.antenna * ch.antenna);
  const auto frame = road_frame(node, road);
  const double root = std::sqrt(frame.across * frame.across + k);
  const double gamma = k *
                       (std::atan((half_length + frame.along) / root) +
                        std::atan((half_length - frame.along) / root)) /
                       root;
  return -density * gamma;
}

}  // namespace detail

inline double laplace_x_closed_infinite(const NodePose& node, double s, const TrafficParams& traffic,
                                        const ChannelParams& ch) {
  return std::exp(detail::log_laplace_closed_infinite(Road::X, node, s, traffic, ch));
}

inline double laplace_y_closed_infinite(const NodePose& node, double s, const TrafficParams& traffic,
                                        const ChannelParams& ch) {
  return std::exp(detail::log_laplace_closed_infinite(Road::Y, node, s, traffic, ch));
}

inline double laplace_x_closed_finite(const NodePose& node, double s, const TrafficParams& traffic,
                                      const ChannelParams& ch, double half_length) {
  return std::exp(detail::log_laplace_closed_finite(Road::X, node, s, traffic, ch, half_length));
}

inline double laplace_y_closed_finite(const NodePose& node, double s, const TrafficParams& traffic,
                                      const ChannelParams& ch, double half_length) {
  return std::exp(detail::log_laplace_closed_finite(Road::Y, node, s, traffic, ch, half_length));
}

// Uses the closed forms whenever alpha == 2, quadrature otherwise.
inline double log_laplace(Road road, const NodePose& node, double s, const NetworkConfig& cfg) {
  if (cfg.channel.alpha == 2.0) {
    cfg.validate();
    return cfg.road.is_finite()
               ? detail::log_laplace_closed_finite(road, node, s, cfg.traffic, cfg.channel,
                                                   cfg.road.half_length())
               : detail::log_laplace_closed_infinite(road, node, s, cfg.traffic, cfg.channel);
  }
  return log_laplace_numeric(road, node, s, cfg);
}

inline double laplace_x(const NodePose& node, double s, const NetworkConfig& cfg) {
  return std::exp(log_laplace(Road::X, node, s, cfg));
}

inline double laplace_y(const NodePose& node, double s, const NetworkConfig& cfg) {
  return std::exp(log_laplace(Road::Y, node, s, cfg));
}

namespace detail {

// Shared setup for integrals that involve two receivers on one road.
template <class F>
double pair_integral(Road road, const NodePose& relay, const NodePose& dest, double s, double b,
                     const NetworkConfig& cfg, F&& integrand) {
  const auto fr = road_frame(relay, road);
  const auto fd = road_frame(dest, road);
  const double r0_relay = characteristic_radius(s, cfg.channel);
  const double r0_dest = characteristic_radius(b, cfg.channel);
  const double center = 0.5 * (fr.along + fd.along);
  const double scale = std::max({std::hypot(fr.across, r0_relay), std::hypot(fd.across, r0_dest),
                                 0.5 * std::abs(fr.along - fd.along)});
  const std::array<double, 2> cuts{fr.along - center, fd.along - center};
  const double relay_offset = center - fr.along;
  const double dest_offset = center - fd.along;
  const double relay_across_sq = fr.across * fr.across;
  const double dest_across_sq = fd.across * fd.across;
  return road_integral(
      [&](double dx) {
        const double xr = relay_offset + dx;
        const double xd = dest_offset + dx;
        return integrand(relay_across_sq + xr * xr, r0_relay, dest_across_sq + xd * xd, r0_dest);
      },
      center, scale, cfg.road, cuts, cfg.quadrature);
}

}  // namespace detail

// log rho(s, b): correction for the relay (at argument s) and the destination
// (at argument b) seeing the same transmitters on `road`. Always >= 0.
inline double log_rho(Road road, double s, double b, const NodePose& relay, const NodePose& dest,
                      const NetworkConfig& cfg) {
  cfg.validate();
  if (!(s >= 0.0) || !(b >= 0.0)) throw ConfigError("Laplace arguments must be >= 0");
  const double density = cfg.traffic.access_prob * detail::road_intensity(cfg.traffic, road);
  if (s == 0.0 || b == 0.0 || density == 0.0) return 0.0;
  const double alpha = cfg.channel.alpha;
  const double integral = detail::pair_integral(
      road, relay, dest, s, b, cfg, [alpha](double dr2, double r0r, double dd2, double r0d) {
        return detail::captured_fraction(dr2, r0r, alpha) * detail::captured_fraction(dd2, r0d, alpha);
      });
  return density * integral;
}

inline double rho_x(double s, double b, const NodePose& relay, const NodePose& dest,
                    const NetworkConfig& cfg) {
  return std::exp(log_rho(Road::X, s, b, relay, dest, cfg));
}

inline double rho_y(double s, double b, const NodePose& relay, const NodePose& dest,
                    const NetworkConfig& cfg) {
  return std::exp(log_rho(Road::Y, s, b, relay, dest, cfg));
}

// E[exp(-s I_R - b I_D)] for one road when both receivers share the
// interferer set.
inline double joint_laplace(Road road, double s, double b, const NodePose& relay, const NodePose& dest,
                            const NetworkConfig& cfg) {
  return std::exp(log_laplace(road, relay, s, cfg) + log_laplace(road, dest, b, cfg) +
                  log_rho(road, s, b, relay, dest, cfg));
}

inline double joint_laplace_x(double s, double b, const NodePose& relay, const NodePose& dest,
                              const NetworkConfig& cfg) {
  return joint_laplace(Road::X, s, b, relay, dest, cfg);
}

inline double joint_laplace_y(double s, double b, const NodePose& relay, const NodePose& dest,
                              const NetworkConfig& cfg) {
  return joint_laplace(Road::Y, s, b, relay, dest, cfg);
}

// s * d/ds log L(s) = -p lambda * integral of g (1 - g), g = sPl / (1 + sPl).
inline double log_laplace_slope(Road road, const NodePose& node, double s, const NetworkConfig& cfg) {
  cfg.validate();
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  const double density = cfg.traffic.access_prob * detail::road_intensity(cfg.traffic, road);
  if (s == 0.0 || density == 0.0) return 0.0;
  const auto frame = detail::road_frame(node, road);
  const double r0 = detail::characteristic_radius(s, cfg.channel);
  const double scale = std::hypot(frame.across, r0);
  const double across_sq = frame.across * frame.across;
  const double alpha = cfg.channel.alpha;
  const std::array<double, 1> centre_cut{0.0};
  const double integral = detail::road_integral(
      [&](double dx) {
        double complement = 0.0;
        const double g = detail::captured_fraction(across_sq + dx * dx, r0, alpha, &complement);
        return g * complement;
      },
      frame.along, scale, cfg.road, centre_cut, cfg.quadrature);
  return -density * integral;
}

// b * d/db log rho(s, b).
inline double log_rho_slope_b(Road road, double s, double b, const NodePose& relay,
                              const NodePose& dest, const NetworkConfig& cfg) {
  cfg.validate();
  if (!(s >= 0.0) || !(b >= 0.0)) throw ConfigError("Laplace arguments must be >= 0");
  const double density = cfg.traffic.access_prob * detail::road_intensity(cfg.traffic, road);
  if (s == 0.0 || b == 0.0 || density == 0.0) return 0.0;
  const double alpha = cfg.channel.alpha;
  const double integral = detail::pair_integral(
      road, relay, dest, s, b, cfg, [alpha](double dr2, double r0r, double dd2, double r0d) {
        double complement = 0.0;
        const double gd = detail::captured_fraction(dd2, r0d, alpha, &complement);
        return detail::captured_fraction(dr2, r0r, alpha) * gd * complement;
      });
  return density * integral;
}

}  // namespace crossroad
