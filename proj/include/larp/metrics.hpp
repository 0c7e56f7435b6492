#pragma once

// Safety metrics of a route through a potential field.
//
//   route_area      R_A   = ∫_R σ(x) dx   (line integral, composite trapezoid)
//   route_distance  R_d   = ∫_R 1 dx
//   route_average   R_avg = R_A / R_d, 0 for zero-length routes

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "larp/errors.hpp"
#include "larp/field.hpp"
#include "larp/geometry.hpp"

namespace larp {

/// Squared terminal distance under which a route counts as having found its goal.
inline constexpr double kGoalFoundSquaredDistance = 2.5;

/// Default quadrature spacing along routes, in meters.
inline constexpr double kDefaultMaxStep = 0.05;

/// Line string of planar points.
struct Route {
  std::vector<Vec2> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }

  Route reversed() const { return Route{{points.rbegin(), points.rend()}}; }

  friend bool operator==(const Route&, const Route&) = default;
};

struct RouteMetrics {
  double route_area = 0.0;
  double route_distance = 0.0;
  double average_potential = 0.0;
  double highest_potential = 0.0;
  bool goal_found = false;
};

inline double route_distance(const Route& route) {
  double total = 0.0;
  for (std::size_t i = 1; i < route.points.size(); ++i) {
    total += distance(route.points[i - 1], route.points[i]);
  }
  return total;
}

namespace detail {

// Visits every quadrature sample of every segment as (point, weight). Weights
// are the trapezoid weights in meters; segment endpoints appear once per segment.
template <typename Visitor>
void for_each_sample(const Route& route, double max_step, Visitor&& visit) {
  if (!(max_step > 0.0)) throw ValidationError("max_step must be positive");
  if (route.points.size() == 1) {
    visit(route.points.front(), 0.0);
    return;
  }
  for (std::size_t s = 1; s < route.points.size(); ++s) {
    const Vec2 a = route.points[s - 1];
    const Vec2 b = route.points[s];
    const double len = distance(a, b);
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / max_step)));
    const double h = len / static_cast<double>(m);
    for (std::size_t i = 0; i <= m; ++i) {
      const Vec2 p = i == m ? b : a + (b - a) * (static_cast<double>(i) / static_cast<double>(m));
      const double w = (i == 0 || i == m) ? 0.5 * h : h;
      visit(p, w);
    }
  }
}

}  // namespace detail

inline double route_area(const Route& route, const Field& field, double max_step = kDefaultMaxStep) {
  double area = 0.0;
  detail::for_each_sample(route, max_step, [&](const Vec2& p, double w) {
    if (w > 0.0) area += w * field.potential(p);
  });
  return area;
}

inline double route_average(const Route& route, const Field& field, double max_step = kDefaultMaxStep) {
  const double d = route_distance(route);
  if (d == 0.0) return 0.0;
  return route_area(route, field, max_step) / d;
}

/// Maximum of σ over the quadrature samples used by route_area.
inline double highest_potential(const Route& route, const Field& field,
                                double max_step = kDefaultMaxStep) {
  double best = 0.0;
  detail::for_each_sample(route, max_step,
                          [&](const Vec2& p, double) { best = std::max(best, field.potential(p)); });
  return best;
}

inline bool goal_found(const Route& route, const Vec2& goal) {
  if (route.empty()) return false;
  return squared_norm(route.points.back() - goal) <= kGoalFoundSquaredDistance;
}

/// All metrics in one pass over the quadrature samples.
inline RouteMetrics measure_route(const Route& route, const Field& field, const Vec2& goal,
                                  double max_step = kDefaultMaxStep) {
  RouteMetrics m;
  if (route.empty()) return m;
  detail::for_each_sample(route, max_step, [&](const Vec2& p, double w) {
    const double sigma = field.potential(p);
    m.route_area += w * sigma;
    m.highest_potential = std::max(m.highest_potential, sigma);
  });
  m.route_distance = route_distance(route);
  m.average_potential = m.route_distance == 0.0 ? 0.0 : m.route_area / m.route_distance;
  m.goal_found = goal_found(route, goal);
  return m;
}

}  // namespace larp
