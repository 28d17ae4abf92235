#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.
//
// Improper integrals are handled by the callers through a change of
// variables; this engine only ever sees a bounded interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "crossroad/errors.hpp"

namespace crossroad {

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw ConfigError("quadrature tolerances must be positive");
    if (max_subdivisions < 1)
      throw ConfigError("quadrature needs at least one subdivision");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// QUADPACK qk15 abscissae and weights.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;

  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_kronrod = std::abs(kronrod);

  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_left[j] = f(center - dx);
    f_right[j] = f(center + dx);
    const double pair = f_left[j] + f_right[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_kronrod += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));

  const double scale = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  const double resasc = asc * scale;
  const double resabs = abs_kronrod * scale;
  if (resasc != 0.0 && error != 0.0)
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    error = std::max(50.0 * eps * resabs, error);

  return {a, b, kronrod * half, error};
}

}  // namespace detail

// Integrates f over [a, b]. Optional interior breakpoints seed the initial
// partition (points outside (a, b) are ignored). Throws NumericError when the
// tolerance is not met within settings.max_subdivisions segments.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSettings& settings,
                           std::span<const double> breakpoints = {}) {
  settings.validate();
  if (a == b) return {};
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> cuts{lo};
  for (double c : breakpoints)
    if (c > lo && c < hi) cuts.push_back(c);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Segment> heap;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto seg = detail::gauss_kronrod_15(f, cuts[i], cuts[i + 1]);
    total += seg.value;
    total_error += seg.error;
    heap.push(seg);
  }

  int segments = static_cast<int>(heap.size());
  auto converged = [&] {
    return total_error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
  };

  while (!converged()) {
    if (segments >= settings.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge within " << settings.max_subdivisions
          << " subdivisions (estimated error " << total_error << ")";
      throw NumericError(msg.str(), total_error);
    }
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::ostringstream msg;
      msg << "quadrature segment cannot be split further (estimated error " << total_error << ")";
      throw NumericError(msg.str(), total_error);
    }
    heap.pop();
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }

  // Re-sum to shed the drift accumulated by the incremental updates.
  double value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {sign * value, error, segments};
}

}  // namespace crossroad
