#pragma once

// Force-following baseline planners over a potential field.
//
//   PM      penalty method: ζ(x_g − x) − η·p'(σ)·∇σ with p(σ) = σ²/2
//   APF     classical repulsion from the nearest unit, active within d_o,
//           plus attraction that is linear within d_g and constant beyond
//   APF*    APF with the scaled distance d̃ in place of d
//   M-APF   APF attraction with goal-distance-modulated repulsion
//
// All four advance by fixed steps of length γ along the normalized force.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "larp/errors.hpp"
#include "larp/field.hpp"
#include "larp/geometry.hpp"
#include "larp/metrics.hpp"

namespace larp {

enum class Planner { PM, APF, APFScaled, MAPF };

inline const char* to_string(Planner p) {
  switch (p) {
    case Planner::PM: return "PM";
    case Planner::APF: return "APF";
    case Planner::APFScaled: return "APF*";
    case Planner::MAPF: return "M-APF";
  }
  return "unknown";
}

inline std::optional<Planner> parse_planner(std::string_view name) {
  if (name == "PM") return Planner::PM;
  if (name == "APF") return Planner::APF;
  if (name == "APF*" || name == "APF(*)") return Planner::APFScaled;
  if (name == "M-APF") return Planner::MAPF;
  return std::nullopt;
}

struct PlannerParams {
  double zeta = 1.0;              // attraction gain
  double eta = 1.0;               // repulsion gain
  double step = 0.1;              // γ, meters
  double repulsion_range = 5.0;   // d_o, meters
  double attraction_range = 5.0;  // d_g, meters
  double mapf_exponent = 2.0;     // m
  int max_iters = 5000;
  /// PM appends the goal once the squared distance to it drops to this value.
  double goal_snap_squared = kGoalFoundSquaredDistance;
  /// Steps over which a net displacement below step/10 counts as a stall.
  int stall_window = 50;

  void validate() const {
    if (!(step > 0.0)) throw ValidationError("planner step must be positive");
    if (!(repulsion_range > 0.0)) throw ValidationError("repulsion range must be positive");
    if (!(attraction_range > 0.0)) throw ValidationError("attraction range must be positive");
    if (!(mapf_exponent > 0.0)) throw ValidationError("M-APF exponent must be positive");
    if (max_iters < 1) throw ValidationError("max_iters must be at least 1");
    if (stall_window < 1) throw ValidationError("stall window must be at least 1");
    if (!std::isfinite(zeta) || !std::isfinite(eta)) throw ValidationError("gains must be finite");
  }

  friend bool operator==(const PlannerParams&, const PlannerParams&) = default;
};

enum class Termination { GoalReached, MaxIters, Stalled };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::GoalReached: return "goal_reached";
    case Termination::MaxIters: return "max_iters";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

struct TraceResult {
  Route route;
  Termination terminated_by = Termination::MaxIters;
  int iterations = 0;
};

inline Vec2 linear_attraction(const Vec2& x, const Vec2& goal, const PlannerParams& p) {
  return p.zeta * (goal - x);
}

/// Linear within d_g, constant magnitude ζ·d_g beyond.
inline Vec2 bounded_attraction(const Vec2& x, const Vec2& goal, const PlannerParams& p) {
  const double r = distance(x, goal);
  if (r <= p.attraction_range) return p.zeta * (goal - x);
  return (p.zeta * p.attraction_range / r) * (goal - x);
}

inline Vec2 pm_step_force(const Vec2& x, const Vec2& goal, const Field& field, const PlannerParams& p) {
  const double sigma = field.potential(x);
  const Vec2 repulsion = (-p.eta * sigma) * field.potential_gradient(x);
  return linear_attraction(x, goal, p) + repulsion;
}

namespace detail {

struct Obstacle {
  Vec2 direction;  // repulsion vector x̄ of the nearest unit
  double d;        // distance (plain or scaled) to it
};

inline std::optional<Obstacle> nearest_obstacle(const Vec2& x, const Field& field, bool scaled) {
  const auto n = field.nearest(x, scaled ? DistanceMetric::Scaled : DistanceMetric::Plain);
  if (!n) return std::nullopt;
  const double d2 = scaled ? n->scaled_squared_distance : n->squared_distance;
  const double d = std::sqrt(d2);
  if (d == 0.0) throw InvalidStateError("force evaluated on a restriction (zero distance)");
  return Obstacle{n->repulsion, d};
}

}  // namespace detail

/// Classical APF repulsion; `scaled` selects APF* (d̃ instead of d).
inline Vec2 apf_repulsion(const Vec2& x, const Field& field, const PlannerParams& p, bool scaled) {
  const auto ob = detail::nearest_obstacle(x, field, scaled);
  if (!ob || ob->d > p.repulsion_range) return {};
  const double gain = p.eta * (1.0 / ob->d - 1.0 / p.repulsion_range) / (ob->d * ob->d);
  return gain * ob->direction;
}

inline Vec2 apf_forces(const Vec2& x, const Vec2& goal, const Field& field, const PlannerParams& p,
                       bool scaled) {
  return bounded_attraction(x, goal, p) + apf_repulsion(x, field, p, scaled);
}

/// Both M-APF terms act along the unit repulsion direction x̄/‖x̄‖.
inline Vec2 mapf_repulsion(const Vec2& x, const Vec2& goal, const Field& field, const PlannerParams& p) {
  const auto ob = detail::nearest_obstacle(x, field, false);
  if (!ob || ob->d > p.repulsion_range) return {};
  const double r = distance(x, goal);
  const double m = p.mapf_exponent;
  if (r == 0.0 && m < 3.0) return {};
  const double slack = 1.0 / ob->d - 1.0 / p.repulsion_range;
  const double near_term = p.eta * slack * std::pow(r, m - 3.0);
  const double goal_term = p.eta * m * slack * slack * std::pow(r, m);
  return ((near_term + goal_term) / norm(ob->direction)) * ob->direction;
}

inline Vec2 mapf_forces(const Vec2& x, const Vec2& goal, const Field& field, const PlannerParams& p) {
  return bounded_attraction(x, goal, p) + mapf_repulsion(x, goal, field, p);
}

inline Vec2 planner_force(Planner planner, const Vec2& x, const Vec2& goal, const Field& field,
                          const PlannerParams& p) {
  switch (planner) {
    case Planner::PM: return pm_step_force(x, goal, field, p);
    case Planner::APF: return apf_forces(x, goal, field, p, false);
    case Planner::APFScaled: return apf_forces(x, goal, field, p, true);
    case Planner::MAPF: return mapf_forces(x, goal, field, p);
  }
  return {};
}

/// Iterates x ← x + γ·F(x)/‖F(x)‖ until the goal test passes, the iteration
/// budget runs out, or the trace stalls.
inline TraceResult follow(Planner planner, const Vec2& start, const Vec2& goal, const Field& field,
                          const PlannerParams& p) {
  p.validate();
  TraceResult result;
  std::vector<Vec2>& pts = result.route.points;
  pts.push_back(start);
  Vec2 x = start;
  const auto window = static_cast<std::size_t>(p.stall_window);

  while (true) {
    if (squared_norm(x - goal) <= kGoalFoundSquaredDistance) {
      result.terminated_by = Termination::GoalReached;
      break;
    }
    if (pts.size() > window && distance(x, pts[pts.size() - 1 - window]) < p.step / 10.0) {
      result.terminated_by = Termination::Stalled;
      break;
    }
    if (result.iterations >= p.max_iters) {
      result.terminated_by = Termination::MaxIters;
      break;
    }
    const Vec2 force = planner_force(planner, x, goal, field, p);
    const double magnitude = norm(force);
    if (magnitude < 1e-9) {
      result.terminated_by = Termination::Stalled;
      break;
    }
    x = x + (p.step / magnitude) * force;
    pts.push_back(x);
    ++result.iterations;
  }

  if (planner == Planner::PM && squared_norm(x - goal) <= p.goal_snap_squared && !(x == goal)) {
    pts.push_back(goal);
  }
  return result;
}

}  // namespace larp
