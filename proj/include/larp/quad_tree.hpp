#pragma once

// Multi-scale quad-tree decomposition of a square field.
//
// Each cell is classified into a distance zone: zone 0 means a restriction lies
// within the cell's circumscribed circle, zones 1..k bin the scaled squared
// distance at the cell center by the configured boundaries, and the last zone
// (k = boundaries.size() + 1) is "far". Cells are refined until they are small,
// far, or uniformly inside their zone.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "larp/errors.hpp"
#include "larp/field.hpp"
#include "larp/geometry.hpp"

namespace larp {

/// Ascending scaled-squared-distance thresholds separating the zones.
struct ZoneConfig {
  // -ln of potentials 0.9, 0.7, 0.5, 0.25, 0.05.
  std::vector<double> boundaries{0.105, 0.357, 0.693, 1.386, 2.996};

  void validate() const {
    if (boundaries.empty()) throw ValidationError("zone boundaries must be non-empty");
    double previous = 0.0;
    for (double b : boundaries) {
      if (!std::isfinite(b) || !(b > previous)) {
        throw ValidationError("zone boundaries must be positive and strictly ascending");
      }
      previous = b;
    }
  }

  int farthest_zone() const { return static_cast<int>(boundaries.size()) + 1; }
  int zone_count() const { return static_cast<int>(boundaries.size()) + 2; }

  /// Zone of a unit that is not within the cell's circumscribed circle.
  int bin(double scaled_squared_distance) const {
    int zone = 1;
    for (double b : boundaries) {
      if (b <= scaled_squared_distance) ++zone;
    }
    return zone;
  }

  /// Smallest scaled squared distance a point of `zone` can have.
  double lower_edge(int zone) const {
    if (zone <= 1) return 0.0;
    return boundaries[static_cast<std::size_t>(zone) - 2];
  }

  double upper_potential(int zone) const { return std::exp(-lower_edge(zone)); }

  friend bool operator==(const ZoneConfig&, const ZoneConfig&) = default;
};

struct DecompositionParams {
  double n_min = 1.0;
  double n_max = 8.0;
  Vec2 field_center{32.0, 32.0};
  double field_size = 64.0;
  int max_depth = 32;

  /// n_min = size/64 and n_max = size/8.
  static DecompositionParams for_field(Vec2 center, double size) {
    return {size / 64.0, size / 8.0, center, size, 32};
  }

  void validate() const {
    if (!(field_size > 0.0) || !std::isfinite(field_size)) {
      throw ValidationError("field size must be positive");
    }
    if (!(n_min > 0.0 && n_min <= n_max && n_max <= field_size)) {
      throw ValidationError("cell sizes must satisfy 0 < n_min <= n_max <= field_size");
    }
  }

  friend bool operator==(const DecompositionParams&, const DecompositionParams&) = default;
};

/// Square cell. Children, when present, are ordered NW, NE, SW, SE.
struct QuadNode {
  Vec2 center;
  double size = 0.0;
  int zone = 0;
  double zone_upper_potential = 1.0;
  std::vector<QuadNode> children;

  bool is_leaf() const { return children.empty(); }

  Vec2 min_corner() const { return center - Vec2{0.5 * size, 0.5 * size}; }
  Vec2 max_corner() const { return center + Vec2{0.5 * size, 0.5 * size}; }

  /// Closed-square membership.
  bool contains(const Vec2& p, double tol = 0.0) const {
    const double h = 0.5 * size + tol;
    return std::abs(p.x - center.x) <= h && std::abs(p.y - center.y) <= h;
  }

  friend bool operator==(const QuadNode&, const QuadNode&) = default;
};

enum class Quadrant { NW = 0, NE = 1, SW = 2, SE = 3 };

inline Vec2 child_center(const Vec2& center, double size, Quadrant q) {
  const double o = 0.25 * size;
  switch (q) {
    case Quadrant::NW: return {center.x - o, center.y + o};
    case Quadrant::NE: return {center.x + o, center.y + o};
    case Quadrant::SW: return {center.x - o, center.y - o};
    case Quadrant::SE: return {center.x + o, center.y - o};
  }
  return center;
}

/// Zone of every unit with respect to the cell centered at x with side n.
inline std::vector<int> approx_distance_zones(const Vec2& x, double n,
                                              std::span<const FieldUnit* const> units,
                                              const ZoneConfig& cfg) {
  std::vector<int> zones(units.size(), cfg.farthest_zone());
  const double containment = 0.5 * n * n;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i]->squared_distance(x) <= containment) {
      zones[i] = 0;
    } else {
      zones[i] = cfg.bin(units[i]->scaled_squared_distance(x));
    }
  }
  return zones;
}

/// True when the zone assignment of `quad` holds over the whole cell: for every
/// unit sharing the cell's zone, the circumscribed-circle point nearest the unit
/// still lies at or beyond the zone's lower edge.
inline bool uniformity_probe(const QuadNode& quad, std::span<const FieldUnit* const> same_zone_units,
                             const ZoneConfig& cfg) {
  const double lower = cfg.lower_edge(quad.zone);
  const double reach = quad.size / std::sqrt(2.0);
  for (const FieldUnit* u : same_zone_units) {
    const Vec2 away = u->repulsion_vector(quad.center);
    const double len = norm(away);
    if (len == 0.0) return false;
    const Vec2 probe = quad.center - (reach / len) * away;
    if (u->scaled_squared_distance(probe) < lower) return false;
  }
  return true;
}

namespace detail {

inline QuadNode build_cell(const Vec2& x, double n, std::vector<const FieldUnit*> units,
                           const DecompositionParams& params, const ZoneConfig& cfg, int depth) {
  if (depth > params.max_depth) {
    throw ValidationError("quad tree exceeded " + std::to_string(params.max_depth) +
                          " levels; n_min is inconsistent with the field size");
  }
  QuadNode quad;
  quad.center = x;
  quad.size = n;

  const int farthest = cfg.farthest_zone();
  std::vector<int> zones;
  if (!units.empty()) zones = approx_distance_zones(x, n, units, cfg);

  quad.zone = farthest;
  for (int z : zones) quad.zone = std::min(quad.zone, z);
  quad.zone_upper_potential = cfg.upper_potential(quad.zone);

  if (n <= params.n_max) {
    if (n <= params.n_min || quad.zone == farthest) return quad;
    if (quad.zone > 0) {
      std::vector<const FieldUnit*> same_zone;
      for (std::size_t i = 0; i < units.size(); ++i) {
        if (zones[i] == quad.zone) same_zone.push_back(units[i]);
      }
      if (uniformity_probe(quad, same_zone, cfg)) return quad;
    }
  }

  std::vector<const FieldUnit*> remaining;
  remaining.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (zones[i] < farthest) remaining.push_back(units[i]);
  }

  quad.children.reserve(4);
  for (Quadrant q : {Quadrant::NW, Quadrant::NE, Quadrant::SW, Quadrant::SE}) {
    quad.children.push_back(
        build_cell(child_center(x, n, q), 0.5 * n, remaining, params, cfg, depth + 1));
  }
  return quad;
}

}  // namespace detail

/// Decomposes the field described by `params` around `units`.
inline QuadNode build_quad_tree(std::span<const FieldUnit> units, const DecompositionParams& params,
                                const ZoneConfig& cfg = {}) {
  params.validate();
  cfg.validate();
  std::vector<const FieldUnit*> all;
  all.reserve(units.size());
  for (const FieldUnit& u : units) all.push_back(&u);
  return detail::build_cell(params.field_center, params.field_size, std::move(all), params, cfg, 0);
}

/// Leaves in depth-first NW, NE, SW, SE order.
inline std::vector<const QuadNode*> leaves(const QuadNode& root) {
  std::vector<const QuadNode*> out;
  std::vector<const QuadNode*> stack{&root};
  while (!stack.empty()) {
    const QuadNode* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      out.push_back(node);
      continue;
    }
    for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

/// Deepest leaf containing p (closed squares; boundary points resolve to the
/// first child in NW, NE, SW, SE order). Null when p is outside the root.
inline const QuadNode* locate_leaf(const QuadNode& root, const Vec2& p) {
  if (!root.contains(p)) return nullptr;
  const QuadNode* node = &root;
  while (!node->is_leaf()) {
    const QuadNode* next = nullptr;
    for (const QuadNode& c : node->children) {
      if (c.contains(p)) {
        next = &c;
        break;
      }
    }
    if (next == nullptr) return nullptr;
    node = next;
  }
  return node;
}

}  // namespace larp
