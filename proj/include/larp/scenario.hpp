#pragma once

// Scenario files: a square field, its restriction units, start and goal, and
// optional overrides for the decomposition, the search and each baseline planner.
//
// {
//   "name": "walled_room",
//   "field": {"center": [32, 32], "size": 64},
//   "start": [26, 32], "goal": [48, 32],
//   "units": [
//     {"kind": "point", "location": [x, y], "repulsion": [[1, 0], [0, 1]]},
//     {"kind": "line", "start": [x, y], "end": [x, y]},
//     {"kind": "rectangle", "corner1": [x, y], "corner2": [x, y]},
//     {"kind": "ellipse", "location": [x, y], "shape": [[2, 0], [0, 1]]},
//     {"kind": "collection", "units": [ ... ]}
//   ],
//   "decomposition": {"n_min": 1, "n_max": 8, "boundaries": [...]},
//   "search": {"beta": 5, "corner_adjacency": false, "zone_block_threshold": null},
//   "planners": {"PM": {"eta": 40}, "APF": {}, "APF*": {}, "M-APF": {}}
// }
//
// Matrices are row-major. "repulsion" defaults to the identity.

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "larp/errors.hpp"
#include "larp/field.hpp"
#include "larp/geometry.hpp"
#include "larp/network.hpp"
#include "larp/planners.hpp"
#include "larp/quad_tree.hpp"

namespace larp {

using json = nlohmann::json;

inline constexpr std::array<Planner, 4> kBaselinePlanners{Planner::PM, Planner::APF, Planner::APFScaled,
                                                          Planner::MAPF};

struct Scenario {
  std::string name;
  Vec2 field_center{32.0, 32.0};
  double field_size = 64.0;
  std::vector<FieldUnit> units;
  Vec2 start;
  Vec2 goal;
  DecompositionParams decomposition;
  ZoneConfig zones;
  SearchConfig search;
  std::map<Planner, PlannerParams> planner_params;

  Field field() const { return Field(units); }

  const PlannerParams& params_for(Planner p) const {
    static const PlannerParams defaults;
    auto it = planner_params.find(p);
    return it == planner_params.end() ? defaults : it->second;
  }

  bool inside(const Vec2& p) const {
    const double h = 0.5 * field_size;
    return std::abs(p.x - field_center.x) <= h && std::abs(p.y - field_center.y) <= h;
  }

  void validate() const {
    if (!(field_size > 0.0) || !std::isfinite(field_size)) throw ValidationError("field size must be positive");
    decomposition.validate();
    zones.validate();
    search.validate();
    for (const auto& [planner, params] : planner_params) params.validate();
    if (!inside(start)) throw ValidationError("start lies outside the field");
    if (!inside(goal)) throw ValidationError("goal lies outside the field");
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing required field \"") + key + "\"");
  return *it;
}

inline double read_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

inline Vec2 read_vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [x, y]");
  return {read_number(j[0], where + "[0]"), read_number(j[1], where + "[1]")};
}

inline Mat2 read_mat2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a 2x2 row-major matrix");
  const Vec2 r0 = read_vec2(j[0], where + "[0]");
  const Vec2 r1 = read_vec2(j[1], where + "[1]");
  return {r0.x, r0.y, r1.x, r1.y};
}

inline json write_vec2(const Vec2& v) { return json::array({v.x, v.y}); }
inline json write_mat2(const Mat2& m) {
  return json::array({json::array({m.a00, m.a01}), json::array({m.a10, m.a11})});
}

// Prefixes construction errors (which carry no location) with `where`.
template <typename Make>
FieldUnit construct(const std::string& where, Make&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
}

inline FieldUnit read_unit(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a unit object");
  const json& kind_json = require(j, "kind", where);
  if (!kind_json.is_string()) fail(where + ".kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();

  if (kind == "collection") {
    const json& subs = require(j, "units", where);
    if (!subs.is_array()) fail(where + ".units", "expected an array");
    std::vector<FieldUnit> units;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      units.push_back(read_unit(subs[i], where + ".units[" + std::to_string(i) + "]"));
    }
    return construct(where, [&] { return FieldUnit::collection(std::move(units)); });
  }

  RepulsionMatrix a;
  if (j.contains("repulsion")) {
    const Mat2 m = read_mat2(j.at("repulsion"), where + ".repulsion");
    try {
      a = RepulsionMatrix(m);
    } catch (const ValidationError& e) {
      fail(where + ".repulsion", e.what());
    }
  }
  if (kind == "point") {
    const Vec2 at = read_vec2(require(j, "location", where), where + ".location");
    return construct(where, [&] { return FieldUnit::point(at, a); });
  }
  if (kind == "line") {
    const Vec2 from = read_vec2(require(j, "start", where), where + ".start");
    const Vec2 to = read_vec2(require(j, "end", where), where + ".end");
    return construct(where, [&] { return FieldUnit::line(from, to, a); });
  }
  if (kind == "rectangle") {
    const Vec2 c1 = read_vec2(require(j, "corner1", where), where + ".corner1");
    const Vec2 c2 = read_vec2(require(j, "corner2", where), where + ".corner2");
    bool allow_degenerate = false;
    if (j.contains("allow_degenerate")) {
      if (!j.at("allow_degenerate").is_boolean()) fail(where + ".allow_degenerate", "expected a boolean");
      allow_degenerate = j.at("allow_degenerate").get<bool>();
    }
    return construct(where, [&] { return FieldUnit::rectangle(c1, c2, a, allow_degenerate); });
  }
  if (kind == "ellipse") {
    const Vec2 at = read_vec2(require(j, "location", where), where + ".location");
    const Mat2 shape = read_mat2(require(j, "shape", where), where + ".shape");
    return construct(where, [&] { return FieldUnit::ellipse(at, shape, a); });
  }
  fail(where + ".kind", "unknown unit kind \"" + kind + "\"");
}

inline json write_unit(const FieldUnit& u) {
  json j;
  j["kind"] = to_string(u.kind());
  switch (u.kind()) {
    case UnitKind::Point:
      j["location"] = write_vec2(u.as_point().location);
      break;
    case UnitKind::Line:
      j["start"] = write_vec2(u.as_line().start);
      j["end"] = write_vec2(u.as_line().end);
      break;
    case UnitKind::Rectangle: {
      const RectangleShape& r = u.as_rectangle();
      j["corner1"] = write_vec2(r.corner1);
      j["corner2"] = write_vec2(r.corner2);
      if (r.corner1.x == r.corner2.x || r.corner1.y == r.corner2.y) j["allow_degenerate"] = true;
      break;
    }
    case UnitKind::Ellipse:
      j["location"] = write_vec2(u.as_ellipse().location);
      j["shape"] = write_mat2(u.as_ellipse().shape);
      break;
    case UnitKind::Collection: {
      json subs = json::array();
      for (const FieldUnit& s : u.sub_units()) subs.push_back(write_unit(s));
      j["units"] = std::move(subs);
      return j;
    }
  }
  j["repulsion"] = write_mat2(u.repulsion_matrix().matrix());
  return j;
}

inline PlannerParams read_planner_params(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  PlannerParams p;
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = read_number(j.at(key), where + "." + key);
  };
  auto integer = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) fail(where + "." + key, "expected an integer");
    out = j.at(key).get<int>();
  };
  num("zeta", p.zeta);
  num("eta", p.eta);
  num("step", p.step);
  num("repulsion_range", p.repulsion_range);
  num("attraction_range", p.attraction_range);
  num("mapf_exponent", p.mapf_exponent);
  num("goal_snap_squared", p.goal_snap_squared);
  integer("max_iters", p.max_iters);
  integer("stall_window", p.stall_window);
  try {
    p.validate();
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
  return p;
}

inline json write_planner_params(const PlannerParams& p) {
  return {{"zeta", p.zeta},
          {"eta", p.eta},
          {"step", p.step},
          {"repulsion_range", p.repulsion_range},
          {"attraction_range", p.attraction_range},
          {"mapf_exponent", p.mapf_exponent},
          {"goal_snap_squared", p.goal_snap_squared},
          {"max_iters", p.max_iters},
          {"stall_window", p.stall_window}};
}

}  // namespace detail

/// Validates and default-fills a parsed scenario document.
inline Scenario scenario_from_json(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) fail("scenario", "expected a JSON object");
  Scenario s;
  s.name = doc.value("name", std::string("unnamed"));

  const json& field = require(doc, "field", "scenario");
  s.field_center = read_vec2(require(field, "center", "field"), "field.center");
  s.field_size = read_number(require(field, "size", "field"), "field.size");
  if (!(s.field_size > 0.0)) fail("field.size", "must be positive");

  s.start = read_vec2(require(doc, "start", "scenario"), "start");
  s.goal = read_vec2(require(doc, "goal", "scenario"), "goal");

  if (doc.contains("units")) {
    const json& units = doc.at("units");
    if (!units.is_array()) fail("units", "expected an array");
    for (std::size_t i = 0; i < units.size(); ++i) {
      s.units.push_back(read_unit(units[i], "units[" + std::to_string(i) + "]"));
    }
  }

  s.decomposition = DecompositionParams::for_field(s.field_center, s.field_size);
  if (doc.contains("decomposition")) {
    const json& d = doc.at("decomposition");
    if (!d.is_object()) fail("decomposition", "expected an object");
    if (d.contains("n_min")) s.decomposition.n_min = read_number(d.at("n_min"), "decomposition.n_min");
    if (d.contains("n_max")) s.decomposition.n_max = read_number(d.at("n_max"), "decomposition.n_max");
    if (d.contains("boundaries")) {
      const json& b = d.at("boundaries");
      if (!b.is_array()) fail("decomposition.boundaries", "expected an array");
      s.zones.boundaries.clear();
      for (std::size_t i = 0; i < b.size(); ++i) {
        s.zones.boundaries.push_back(read_number(b[i], "decomposition.boundaries[" + std::to_string(i) + "]"));
      }
    }
  }

  if (doc.contains("search")) {
    const json& q = doc.at("search");
    if (!q.is_object()) fail("search", "expected an object");
    if (q.contains("beta")) s.search.beta = read_number(q.at("beta"), "search.beta");
    if (q.contains("corner_adjacency")) {
      if (!q.at("corner_adjacency").is_boolean()) fail("search.corner_adjacency", "expected a boolean");
      s.search.corner_adjacency = q.at("corner_adjacency").get<bool>();
    }
    if (q.contains("zone_block_threshold") && !q.at("zone_block_threshold").is_null()) {
      if (!q.at("zone_block_threshold").is_number_integer()) {
        fail("search.zone_block_threshold", "expected an integer or null");
      }
      s.search.zone_block_threshold = q.at("zone_block_threshold").get<int>();
    }
  }

  for (Planner p : kBaselinePlanners) s.planner_params[p] = PlannerParams{};
  if (doc.contains("planners")) {
    const json& ps = doc.at("planners");
    if (!ps.is_object()) fail("planners", "expected an object keyed by planner name");
    for (const auto& [key, value] : ps.items()) {
      const auto planner = parse_planner(key);
      if (!planner) fail("planners." + key, "unknown planner");
      s.planner_params[*planner] = read_planner_params(value, "planners." + key);
    }
  }

  auto context = [](const char* where, auto&& check) {
    try {
      check();
    } catch (const ValidationError& e) {
      fail(where, e.what());
    }
  };
  context("decomposition", [&] { s.decomposition.validate(); });
  context("decomposition.boundaries", [&] { s.zones.validate(); });
  context("search", [&] { s.search.validate(); });
  if (!s.inside(s.start)) fail("start", "lies outside the field");
  if (!s.inside(s.goal)) fail("goal", "lies outside the field");
  return s;
}

/// Fully explicit document; scenario_from_json(scenario_to_json(s)) == s.
inline json scenario_to_json(const Scenario& s) {
  using namespace detail;
  json doc;
  doc["name"] = s.name;
  doc["field"] = {{"center", write_vec2(s.field_center)}, {"size", s.field_size}};
  doc["start"] = write_vec2(s.start);
  doc["goal"] = write_vec2(s.goal);
  json units = json::array();
  for (const FieldUnit& u : s.units) units.push_back(write_unit(u));
  doc["units"] = std::move(units);
  doc["decomposition"] = {{"n_min", s.decomposition.n_min},
                          {"n_max", s.decomposition.n_max},
                          {"boundaries", s.zones.boundaries}};
  doc["search"] = {{"beta", s.search.beta}, {"corner_adjacency", s.search.corner_adjacency}};
  doc["search"]["zone_block_threshold"] =
      s.search.zone_block_threshold ? json(*s.search.zone_block_threshold) : json(nullptr);
  json planners = json::object();
  for (const auto& [planner, params] : s.planner_params) planners[to_string(planner)] = write_planner_params(params);
  doc["planners"] = std::move(planners);
  return doc;
}

inline Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario parse error: ") + e.what());
  }
  return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario file " + path);
  out << scenario_to_json(s).dump(2) << '\n';
  if (!out) throw IoError("failed writing scenario file " + path);
}

}  // namespace larp
