#pragma once

// End-to-end planning over a scenario: the Larp pipeline (decompose, build the
// network, search), the baseline traces, and the comparison report.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "larp/errors.hpp"
#include "larp/metrics.hpp"
#include "larp/network.hpp"
#include "larp/planners.hpp"
#include "larp/quad_tree.hpp"
#include "larp/scenario.hpp"

namespace larp {

/// Decomposition, network and route of one Larp run. The tree is heap-held so
/// the graph's cell references survive moves.
struct LarpPlan {
  std::shared_ptr<const QuadNode> tree;
  RoutingGraph graph;
  NetworkRoute result;
};

struct LarpStages {
  std::shared_ptr<const QuadNode> tree;
  RoutingGraph graph;
};

inline LarpStages build_stages(const Scenario& s) {
  LarpStages out;
  out.tree = std::make_shared<const QuadNode>(build_quad_tree(s.units, s.decomposition, s.zones));
  out.graph = build_network(*out.tree, s.search);
  return out;
}

inline LarpPlan plan_larp(const Scenario& s) {
  LarpStages stages = build_stages(s);
  LarpPlan plan{stages.tree, std::move(stages.graph), {}};
  plan.result = find_route(plan.graph, s.start, s.goal, s.search);
  return plan;
}

/// Report name of a planner; Larp is represented by std::nullopt.
using PlannerChoice = std::optional<Planner>;

inline std::string planner_name(const PlannerChoice& p) { return p ? to_string(*p) : "Larp"; }

inline PlannerChoice parse_planner_choice(std::string_view name) {
  if (name == "Larp" || name == "larp") return std::nullopt;
  if (auto p = parse_planner(name)) return p;
  throw ValidationError("unknown planner \"" + std::string(name) + "\"");
}

inline std::vector<PlannerChoice> all_planners() {
  return {Planner::PM, Planner::APF, Planner::APFScaled, Planner::MAPF, std::nullopt};
}

struct PlannerRun {
  std::string planner;
  Route route;
  RouteMetrics metrics;
  double runtime_ms = 0.0;
  /// Termination or failure reason.
  std::string status;
};

/// Runs one planner. Planner failures are recorded in the run, not thrown.
inline PlannerRun run_planner(const Scenario& s, const PlannerChoice& choice) {
  PlannerRun run;
  run.planner = planner_name(choice);
  const Field field = s.field();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (choice) {
      TraceResult trace = follow(*choice, s.start, s.goal, field, s.params_for(*choice));
      run.route = std::move(trace.route);
      run.status = to_string(trace.terminated_by);
    } else {
      run.route = plan_larp(s).result.route;
      run.status = "goal_reached";
    }
  } catch (const NoPathError& e) {
    run.route.points = {s.start};
    run.status = std::string("no_path: ") + e.what();
  } catch (const Error& e) {
    run.route.points = {s.start};
    run.status = std::string("failed: ") + e.what();
  }
  const auto t1 = std::chrono::steady_clock::now();
  run.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  run.metrics = measure_route(run.route, field, s.goal);
  return run;
}

struct ComparisonReport {
  std::string scenario;
  std::vector<PlannerRun> rows;

  const PlannerRun* find(std::string_view planner) const {
    for (const PlannerRun& r : rows) {
      if (r.planner == planner) return &r;
    }
    return nullptr;
  }
};

inline ComparisonReport run_comparison(const Scenario& s, const std::vector<PlannerChoice>& planners) {
  if (planners.empty()) throw ValidationError("at least one planner is required");
  ComparisonReport report;
  report.scenario = s.name;
  for (const PlannerChoice& p : planners) report.rows.push_back(run_planner(s, p));
  return report;
}

inline std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline constexpr std::string_view kReportHeader =
    "planner,goal_found,route_distance,route_area,average_potential,highest_potential,runtime_ms";

/// CSV with four decimals; runtime is written as "NA" without timing.
inline std::string report_csv(const ComparisonReport& report, bool timing = true) {
  std::string out(kReportHeader);
  out += '\n';
  for (const PlannerRun& r : report.rows) {
    out += r.planner;
    out += r.metrics.goal_found ? ",true," : ",false,";
    out += format_fixed4(r.metrics.route_distance) + ',';
    out += format_fixed4(r.metrics.route_area) + ',';
    out += format_fixed4(r.metrics.average_potential) + ',';
    out += format_fixed4(r.metrics.highest_potential) + ',';
    out += timing ? format_fixed4(r.runtime_ms) : std::string("NA");
    out += '\n';
  }
  return out;
}

inline void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

inline void emit_report(const ComparisonReport& report, const std::string& path, bool timing = true) {
  write_text(report_csv(report, timing), path);
}

inline json metrics_to_json(const RouteMetrics& m) {
  return {{"goal_found", m.goal_found},
          {"route_distance", m.route_distance},
          {"route_area", m.route_area},
          {"average_potential", m.average_potential},
          {"highest_potential", m.highest_potential}};
}

/// {"points": [[x, y], ...], "metrics": {...}}
inline json route_to_json(const Route& route, const RouteMetrics& metrics) {
  json pts = json::array();
  for (const Vec2& p : route.points) pts.push_back(json::array({p.x, p.y}));
  return {{"points", std::move(pts)}, {"metrics", metrics_to_json(metrics)}};
}

/// Nested {center, size, zone, children}; leaves omit "children".
inline json tree_to_json(const QuadNode& node) {
  json j = {{"center", json::array({node.center.x, node.center.y})},
            {"size", node.size},
            {"zone", node.zone}};
  if (!node.is_leaf()) {
    json children = json::array();
    for (const QuadNode& c : node.children) children.push_back(tree_to_json(c));
    j["children"] = std::move(children);
  }
  return j;
}

/// {"nodes": [{id, center, sigma_ub}], "edges": [[i, j], ...]}
inline json graph_to_json(const RoutingGraph& graph) {
  json nodes = json::array();
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    const NetNode& n = graph.nodes()[i];
    nodes.push_back({{"id", i}, {"center", json::array({n.center.x, n.center.y})}, {"sigma_ub", n.sigma_ub}});
  }
  json edges = json::array();
  for (const NetEdge& e : graph.edges()) edges.push_back(json::array({e.a, e.b}));
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace larp
