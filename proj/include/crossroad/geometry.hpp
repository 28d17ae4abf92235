#pragma once

// Node placement around a two-road intersection, path loss and per-link
// budget constants.
//
// The X road is the horizontal axis and the Y road the vertical axis; they
// cross at the origin. Nodes are stored in polar form relative to the
// intersection.

#include <cmath>
#include <numbers>
#include <optional>
#include <variant>

#include "crossroad/errors.hpp"
#include "crossroad/quadrature.hpp"

namespace crossroad {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

class NodePose {
 public:
  NodePose() = default;

  // n >= 0 metres from the intersection, theta radians from the X road.
  static NodePose polar(double n, double theta) {
    if (!(n >= 0.0) || !std::isfinite(n)) throw ConfigError("node distance must be finite and >= 0");
    return NodePose(n, normalize_angle(theta));
  }

  static NodePose cartesian(double x, double y) {
    const double n = std::hypot(x, y);
    return NodePose(n, n == 0.0 ? 0.0 : normalize_angle(std::atan2(y, x)));
  }

  double distance() const { return n_; }
  double angle() const { return theta_; }
  double x() const { return n_ * std::cos(theta_); }
  double y() const { return n_ * std::sin(theta_); }

 private:
  NodePose(double n, double theta) : n_(n), theta_(theta) {}

  static double normalize_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return t;
  }

  double n_ = 0.0;
  double theta_ = 0.0;
};

inline Point2 cartesian(const NodePose& pose) { return {pose.x(), pose.y()}; }

inline double distance(const NodePose& a, const NodePose& b) {
  const Point2 pa = cartesian(a);
  const Point2 pb = cartesian(b);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

// Distance from the node to the point (x, 0) on the X road.
inline double dist_to_x_road_point(const NodePose& pose, double x) {
  return std::hypot(pose.y(), x - pose.x());
}

// Distance from the node to the point (0, y) on the Y road.
inline double dist_to_y_road_point(const NodePose& pose, double y) {
  return std::hypot(pose.x(), y - pose.y());
}

// Interferers live either on the whole line or on [-Z, Z] along each road.
class RoadGeometry {
 public:
  static RoadGeometry infinite() { return RoadGeometry(); }
  static RoadGeometry finite(double half_length) {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
      throw ConfigError("finite road half-length Z must be finite and > 0");
    RoadGeometry g;
    g.half_length_ = half_length;
    return g;
  }

  bool is_finite() const { return half_length_.has_value(); }
  // Only meaningful when is_finite().
  double half_length() const { return half_length_.value(); }

 private:
  std::optional<double> half_length_;
};

struct ChannelParams {
  double alpha = 2.0;         // path-loss exponent
  double antenna = 650.0;     // A in (A r)^-alpha
  double power = 0.12;        // transmit power P, watts
  double noise = 0.0;         // sigma^2, watts

  void validate() const {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ConfigError("path-loss exponent must be > 1");
    if (!(antenna > 0.0)) throw ConfigError("antenna constant A must be > 0");
    if (!(power > 0.0)) throw ConfigError("transmit power P must be > 0");
    if (!(noise >= 0.0)) throw ConfigError("noise power must be >= 0");
  }
};

struct TrafficParams {
  double lambda_x = 0.0;  // vehicles per metre on the X road
  double lambda_y = 0.0;  // vehicles per metre on the Y road
  double access_prob = 0.0;  // ALOHA access probability p

  void validate() const {
    if (!(lambda_x >= 0.0) || !(lambda_y >= 0.0)) throw ConfigError("intensities must be >= 0");
    if (!(access_prob >= 0.0 && access_prob <= 1.0))
      throw ConfigError("access probability must lie in [0, 1]");
  }
};

struct NetworkConfig {
  ChannelParams channel;
  TrafficParams traffic;
  RoadGeometry road = RoadGeometry::infinite();
  QuadratureSettings quadrature;

  void validate() const {
    channel.validate();
    traffic.validate();
    quadrature.validate();
  }
};

// sigma^2 in watts from a level in dBm.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double path_loss(double r, const ChannelParams& ch) {
  if (!(r > 0.0)) throw SingularDistanceError("path loss is singular at zero distance");
  return std::pow(ch.antenna * r, -ch.alpha);
}

// Theta = 2^(2R) - 1; the factor 2 is the half-duplex rate penalty.
inline double threshold_from_rate(double rate) {
  if (!(rate >= 0.0)) throw ConfigError("target rate must be >= 0");
  return std::expm1(2.0 * rate * std::numbers::ln2);
}

inline double rate_from_threshold(double theta) {
  if (!(theta >= 0.0)) throw ConfigError("decoding threshold must be >= 0");
  return 0.5 * std::log1p(theta) / std::numbers::ln2;
}

struct LinkBudget {
  double path_gain = 0.0;     // l_ab
  double k = 0.0;             // K_ab = Theta / (P l_ab)
  double noise_factor = 1.0;  // N_ab = exp(-K_ab sigma^2)
  double threshold = 0.0;     // Theta
};

inline LinkBudget link_budget(const NodePose& a, const NodePose& b, double theta,
                              const ChannelParams& ch) {
  if (!(theta >= 0.0)) throw ConfigError("decoding threshold must be >= 0");
  LinkBudget lb;
  lb.path_gain = path_loss(distance(a, b), ch);
  lb.k = theta / (ch.power * lb.path_gain);
  lb.noise_factor = ch.noise == 0.0 ? 1.0 : std::exp(-lb.k * ch.noise);
  lb.threshold = theta;
  return lb;
}

enum class Scheme { Direct, SC, MRC };
enum class Mobility { HSV, LSV };

struct TargetRate {
  double bits_per_use = 0.0;
};
struct DecodingThreshold {
  double value = 0.0;
};

struct Scenario {
  NodePose source;
  std::optional<NodePose> relay;
  NodePose destination;
  Scheme scheme = Scheme::Direct;
  Mobility mobility = Mobility::HSV;
  std::variant<TargetRate, DecodingThreshold> target = DecodingThreshold{1.0};

  double theta() const {
    if (const auto* r = std::get_if<TargetRate>(&target)) return threshold_from_rate(r->bits_per_use);
    return std::get<DecodingThreshold>(target).value;
  }

  void validate() const {
    if (relay.has_value() != (scheme != Scheme::Direct))
      throw ConfigError("a relay is required exactly when the scheme is cooperative");
    if (!(theta() >= 0.0)) throw ConfigError("decoding threshold must be >= 0");
  }
};

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Direct: return "direct";
    case Scheme::SC: return "sc";
    case Scheme::MRC: return "mrc";
  }
  return "?";
}

inline const char* to_string(Mobility m) { return m == Mobility::HSV ? "hsv" : "lsv"; }

}  // namespace crossroad
