#pragma once

// Routing network over the leaves of a quad-tree decomposition, and the
// safety-weighted A* search over it.
//
// Traversing from cell a to cell b costs s(b)·‖a.center − b.center‖ with
// s(q) = exp(β·σ_ub(q)), σ_ub the upper-bound potential of q's zone. s ≥ 1 for
// β ≥ 0, so the Euclidean distance to the goal stays an admissible heuristic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "larp/errors.hpp"
#include "larp/geometry.hpp"
#include "larp/metrics.hpp"
#include "larp/quad_tree.hpp"

namespace larp {

struct SearchConfig {
  double beta = 5.0;
  bool corner_adjacency = false;
  /// Cells whose zone is below this index are untraversable.
  std::optional<int> zone_block_threshold;

  void validate() const {
    if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  }

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

struct NetNode {
  const QuadNode* cell = nullptr;
  Vec2 center;
  double sigma_ub = 0.0;
  int zone = 0;
};

/// Undirected; a < b.
struct NetEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

/// Nodes follow the depth-first leaf order of the tree. The graph refers to the
/// tree's cells and must not outlive it.
class RoutingGraph {
 public:
  RoutingGraph() = default;
  RoutingGraph(const QuadNode* root, std::vector<NetNode> nodes, std::vector<NetEdge> edges)
      : root_(root), nodes_(std::move(nodes)), edges_(std::move(edges)), adjacency_(nodes_.size()) {
    for (const NetEdge& e : edges_) {
      adjacency_[static_cast<std::size_t>(e.a)].push_back(e.b);
      adjacency_[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
    by_cell_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) by_cell_.emplace_back(nodes_[i].cell, static_cast<int>(i));
    std::sort(by_cell_.begin(), by_cell_.end());
  }

  const QuadNode& root() const { return *root_; }
  const std::vector<NetNode>& nodes() const { return nodes_; }
  const std::vector<NetEdge>& edges() const { return edges_; }
  const NetNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<int>& neighbors(int id) const { return adjacency_[static_cast<std::size_t>(id)]; }

  /// Node whose cell contains p, or -1 outside the field.
  int locate(const Vec2& p) const {
    const QuadNode* leaf = locate_leaf(*root_, p);
    if (leaf == nullptr) return -1;
    auto it = std::lower_bound(by_cell_.begin(), by_cell_.end(), leaf,
                               [](const auto& entry, const QuadNode* c) { return entry.first < c; });
    if (it != by_cell_.end() && it->first == leaf) return it->second;
    return -1;
  }

 private:
  const QuadNode* root_ = nullptr;
  std::vector<NetNode> nodes_;
  std::vector<NetEdge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::pair<const QuadNode*, int>> by_cell_;
};

/// How two axis-aligned squares touch.
enum class Contact { None, Side, Corner, Overlap };

inline Contact classify_contact(const QuadNode& p, const QuadNode& q, double tol) {
  const Vec2 plo = p.min_corner(), phi = p.max_corner();
  const Vec2 qlo = q.min_corner(), qhi = q.max_corner();
  // Signed overlap per axis: > tol positive overlap, |.| <= tol touching, < -tol apart.
  const double ox = std::min(phi.x, qhi.x) - std::max(plo.x, qlo.x);
  const double oy = std::min(phi.y, qhi.y) - std::max(plo.y, qlo.y);
  if (ox < -tol || oy < -tol) return Contact::None;
  const bool touch_x = ox <= tol, touch_y = oy <= tol;
  if (touch_x && touch_y) return Contact::Corner;
  if (touch_x || touch_y) return Contact::Side;
  return Contact::Overlap;
}

namespace detail {

enum class Direction { North, South, East, West };

// Flat view of the tree with parent links for neighbor finding.
struct FlatTree {
  struct Entry {
    const QuadNode* node;
    int parent;
    int quadrant;  // position among the parent's children, -1 for the root
    std::array<int, 4> children;
    int leaf_id;
  };
  std::vector<Entry> entries;

  explicit FlatTree(const QuadNode& root) {
    add(root, -1, -1);
    int next_leaf = 0;
    assign_leaf_ids(0, next_leaf);
  }

  int add(const QuadNode& n, int parent, int quadrant) {
    const int id = static_cast<int>(entries.size());
    entries.push_back({&n, parent, quadrant, {-1, -1, -1, -1}, -1});
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const int c = add(n.children[i], id, static_cast<int>(i));
      entries[static_cast<std::size_t>(id)].children[i] = c;
    }
    return id;
  }

  // Same order as leaves(): depth-first NW, NE, SW, SE.
  void assign_leaf_ids(int id, int& next) {
    Entry& e = entries[static_cast<std::size_t>(id)];
    if (e.node->is_leaf()) {
      e.leaf_id = next++;
      return;
    }
    for (int c : e.children) assign_leaf_ids(c, next);
  }

  const Entry& at(int id) const { return entries[static_cast<std::size_t>(id)]; }
  bool is_leaf(int id) const { return at(id).node->is_leaf(); }

  // Quadrant indices: NW=0, NE=1, SW=2, SE=3.
  static bool on_far_side(int quadrant, Direction d) {
    switch (d) {
      case Direction::North: return quadrant == 0 || quadrant == 1;
      case Direction::South: return quadrant == 2 || quadrant == 3;
      case Direction::East: return quadrant == 1 || quadrant == 3;
      case Direction::West: return quadrant == 0 || quadrant == 2;
    }
    return false;
  }

  static int mirror(int quadrant, Direction d) {
    if (d == Direction::North || d == Direction::South) return quadrant ^ 2;
    return quadrant ^ 1;
  }

  // Neighbor in direction d of size >= the node's, or -1 at the field border.
  int neighbor_of_greater_or_equal_size(int id, Direction d) const {
    const Entry& e = at(id);
    if (e.parent < 0) return -1;
    if (!on_far_side(e.quadrant, d)) {
      return at(e.parent).children[static_cast<std::size_t>(mirror(e.quadrant, d))];
    }
    const int m = neighbor_of_greater_or_equal_size(e.parent, d);
    if (m < 0 || is_leaf(m)) return m;
    return at(m).children[static_cast<std::size_t>(mirror(e.quadrant, d))];
  }

  // Leaves of the subtree at id that touch its side facing direction -d.
  void collect_facing_leaves(int id, Direction d, std::vector<int>& out) const {
    if (is_leaf(id)) {
      out.push_back(at(id).leaf_id);
      return;
    }
    for (int q = 0; q < 4; ++q) {
      // Children on the near side (facing back towards the querying cell).
      if (!on_far_side(q, d)) collect_facing_leaves(at(id).children[static_cast<std::size_t>(q)], d, out);
    }
  }
};

}  // namespace detail

/// Builds the routing network: one node per leaf, edges between side-adjacent
/// leaves (and corner-adjacent ones when enabled).
inline RoutingGraph build_network(const QuadNode& root, const SearchConfig& cfg = {}) {
  cfg.validate();
  const std::vector<const QuadNode*> cells = leaves(root);
  std::vector<NetNode> nodes;
  nodes.reserve(cells.size());
  double smallest = root.size;
  for (const QuadNode* c : cells) {
    nodes.push_back({c, c->center, c->zone_upper_potential, c->zone});
    smallest = std::min(smallest, c->size);
  }

  std::set<std::pair<int, int>> pairs;
  auto add = [&](int i, int j) {
    if (i != j) pairs.emplace(std::min(i, j), std::max(i, j));
  };

  const detail::FlatTree flat(root);
  std::vector<int> found;
  for (std::size_t id = 0; id < flat.entries.size(); ++id) {
    const auto& e = flat.entries[id];
    if (e.leaf_id < 0) continue;
    for (auto d : {detail::Direction::North, detail::Direction::South, detail::Direction::East,
                   detail::Direction::West}) {
      const int m = flat.neighbor_of_greater_or_equal_size(static_cast<int>(id), d);
      if (m < 0) continue;
      found.clear();
      flat.collect_facing_leaves(m, d, found);
      for (int j : found) add(e.leaf_id, j);
    }
  }

  const RoutingGraph located(&root, nodes, {});

  if (cfg.corner_adjacency) {
    const double eps = 1e-3 * smallest;
    const double tol = 1e-9 * root.size;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const QuadNode& c = *cells[i];
      const double h = 0.5 * c.size;
      for (const Vec2 dir : {Vec2{1, 1}, Vec2{1, -1}, Vec2{-1, 1}, Vec2{-1, -1}}) {
        const Vec2 probe = c.center + dir * (h + eps);
        const int j = located.locate(probe);
        if (j < 0) continue;
        if (classify_contact(c, *cells[static_cast<std::size_t>(j)], tol) == Contact::Corner) {
          add(static_cast<int>(i), j);
        }
      }
    }
  }

  std::vector<NetEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    edges.push_back({i, j, distance(nodes[static_cast<std::size_t>(i)].center,
                                    nodes[static_cast<std::size_t>(j)].center)});
  }
  return RoutingGraph(&root, std::move(nodes), std::move(edges));
}

/// Directed traversal cost; depends on the destination's potential.
inline double edge_cost(const NetNode& from, const NetNode& to, const SearchConfig& cfg) {
  return std::exp(cfg.beta * to.sigma_ub) * distance(from.center, to.center);
}

struct NetworkRoute {
  Route route;
  /// Node ids visited, start cell first.
  std::vector<int> node_path;
  /// Sum of edge costs along node_path; excludes the start and goal stubs.
  double network_cost = 0.0;
  /// Nodes in the order A* expanded them.
  std::vector<int> expanded;
};

inline bool is_blocked(const NetNode& n, const SearchConfig& cfg) {
  return cfg.zone_block_threshold && n.zone < *cfg.zone_block_threshold;
}

/// A* from the cell containing start to the cell containing goal. The route is
/// [start, centers..., goal]; start == goal yields the two-point route.
inline NetworkRoute find_route(const RoutingGraph& graph, const Vec2& start, const Vec2& goal,
                               const SearchConfig& cfg = {}) {
  cfg.validate();
  const int source = graph.locate(start);
  const int target = graph.locate(goal);
  if (source < 0) throw OutOfFieldError("start lies outside the field");
  if (target < 0) throw OutOfFieldError("goal lies outside the field");
  if (is_blocked(graph.node(source), cfg)) throw OutOfFieldError("start lies in a blocked cell");
  if (is_blocked(graph.node(target), cfg)) throw OutOfFieldError("goal lies in a blocked cell");

  NetworkRoute result;
  if (start == goal) {
    result.route.points = {start, goal};
    result.node_path = {source};
    return result;
  }

  const std::size_t n = graph.nodes().size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(n, inf);
  std::vector<int> came_from(n, -1);
  std::vector<char> closed(n, 0);
  auto h = [&](int id) { return distance(graph.node(id).center, goal); };

  using Entry = std::pair<double, int>;  // (f, id): ties go to the smaller id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[static_cast<std::size_t>(source)] = 0.0;
  open.emplace(h(source), source);

  while (!open.empty()) {
    const auto [f, id] = open.top();
    open.pop();
    const auto uid = static_cast<std::size_t>(id);
    if (closed[uid]) continue;
    closed[uid] = 1;
    result.expanded.push_back(id);
    if (id == target) break;
    for (int next : graph.neighbors(id)) {
      const auto unext = static_cast<std::size_t>(next);
      if (closed[unext] || is_blocked(graph.node(next), cfg)) continue;
      const double candidate = g[uid] + edge_cost(graph.node(id), graph.node(next), cfg);
      if (candidate < g[unext]) {
        g[unext] = candidate;
        came_from[unext] = id;
        open.emplace(candidate + h(next), next);
      }
    }
  }

  if (!closed[static_cast<std::size_t>(target)]) {
    throw NoPathError("goal is unreachable from start through the routing network");
  }

  for (int id = target; id >= 0; id = came_from[static_cast<std::size_t>(id)]) result.node_path.push_back(id);
  std::reverse(result.node_path.begin(), result.node_path.end());
  result.network_cost = g[static_cast<std::size_t>(target)];

  result.route.points.reserve(result.node_path.size() + 2);
  result.route.points.push_back(start);
  for (int id : result.node_path) result.route.points.push_back(graph.node(id).center);
  result.route.points.push_back(goal);
  return result;
}

}  // namespace larp
