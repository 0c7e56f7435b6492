#pragma once

// SVG plots of a scenario: potential heat raster, optional quad-tree cells and
// network edges, route polylines, start (red) and goal markers.
//
// Elements carry a class so plots can be inspected mechanically:
//   heat, cell, edge, route, start, goal.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "larp/field.hpp"
#include "larp/metrics.hpp"
#include "larp/network.hpp"
#include "larp/quad_tree.hpp"
#include "larp/scenario.hpp"

namespace larp {

struct PlotLayers {
  bool field_raster = true;
  int raster_resolution = 256;
  const QuadNode* tree = nullptr;
  const RoutingGraph* graph = nullptr;
  /// (label, route) pairs drawn in order.
  std::vector<std::pair<std::string, Route>> routes;
};

namespace detail {

inline std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Light yellow at σ = 0 through orange to dark red at σ = 1.
inline std::string heat_color(double sigma) {
  static constexpr std::array<std::array<double, 3>, 4> stops{{
      {255, 255, 229}, {254, 196, 79}, {236, 112, 20}, {140, 45, 4}}};
  const double t = std::clamp(sigma, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

inline const char* route_color(std::size_t i) {
  static constexpr std::array<const char*, 6> palette{"#1f77b4", "#2ca02c", "#9467bd", "#17becf", "#e377c2", "#000000"};
  return palette[i % palette.size()];
}

}  // namespace detail

inline std::string render_svg(const Scenario& s, const PlotLayers& layers) {
  using detail::num;
  constexpr double canvas = 512.0;
  const double scale = canvas / s.field_size;
  const Vec2 origin = s.field_center - Vec2{0.5 * s.field_size, 0.5 * s.field_size};
  auto px = [&](double x) { return (x - origin.x) * scale; };
  auto py = [&](double y) { return canvas - (y - origin.y) * scale; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  out += "<title>" + detail::xml_escape(s.name) + "</title>\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"#ffffe5\"/>\n";

  if (layers.field_raster && !s.units.empty()) {
    const Field field = s.field();
    const int res = std::max(1, layers.raster_resolution);
    const double cell = s.field_size / res;
    const double cell_px = canvas / res;
    out += "<g id=\"raster\" shape-rendering=\"crispEdges\">\n";
    for (int row = 0; row < res; ++row) {
      const double y = origin.y + (row + 0.5) * cell;
      // Runs of equal colour along a row collapse into one rect.
      int run_start = 0;
      std::string run_color;
      for (int col = 0; col <= res; ++col) {
        std::string color;
        if (col < res) {
          const double sigma = field.potential({origin.x + (col + 0.5) * cell, y});
          color = detail::heat_color(std::round(sigma * 32.0) / 32.0);
        }
        if (col == res || color != run_color) {
          if (col > 0 && run_color != "#ffffe5") {
            out += "<rect class=\"heat\" x=\"" + num(run_start * cell_px) + "\" y=\"" +
                   num(canvas - (row + 1) * cell_px) + "\" width=\"" + num((col - run_start) * cell_px) +
                   "\" height=\"" + num(cell_px) + "\" fill=\"" + run_color + "\"/>\n";
          }
          run_start = col;
          run_color = color;
        }
      }
    }
    out += "</g>\n";
  }

  if (layers.tree != nullptr) {
    out += "<g id=\"cells\" fill=\"none\" stroke=\"#555555\" stroke-width=\"0.5\">\n";
    for (const QuadNode* leaf : leaves(*layers.tree)) {
      const Vec2 lo = leaf->min_corner(), hi = leaf->max_corner();
      out += "<rect class=\"cell\" x=\"" + num(px(lo.x)) + "\" y=\"" + num(py(hi.y)) + "\" width=\"" +
             num(leaf->size * scale) + "\" height=\"" + num(leaf->size * scale) + "\" data-zone=\"" +
             std::to_string(leaf->zone) + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (layers.graph != nullptr) {
    out += "<g id=\"network\" stroke=\"#3366cc\" stroke-width=\"0.6\">\n";
    for (const NetEdge& e : layers.graph->edges()) {
      const Vec2 a = layers.graph->node(e.a).center, b = layers.graph->node(e.b).center;
      out += "<line class=\"edge\" x1=\"" + num(px(a.x)) + "\" y1=\"" + num(py(a.y)) + "\" x2=\"" +
             num(px(b.x)) + "\" y2=\"" + num(py(b.y)) + "\"/>\n";
    }
    out += "</g>\n";
  }

  for (std::size_t i = 0; i < layers.routes.size(); ++i) {
    const auto& [label, route] = layers.routes[i];
    out += "<polyline class=\"route\" data-planner=\"" + detail::xml_escape(label) + "\" fill=\"none\" stroke=\"" +
           detail::route_color(i) + "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < route.points.size(); ++k) {
      if (k > 0) out += ' ';
      out += num(px(route.points[k].x)) + "," + num(py(route.points[k].y));
    }
    out += "\"/>\n";
  }

  out += "<circle class=\"start\" cx=\"" + num(px(s.start.x)) + "\" cy=\"" + num(py(s.start.y)) +
         "\" r=\"5\" fill=\"#d62728\"/>\n";
  out += "<circle class=\"goal\" cx=\"" + num(px(s.goal.x)) + "\" cy=\"" + num(py(s.goal.y)) +
         "\" r=\"5\" fill=\"#2ca02c\" stroke=\"#000000\"/>\n";
  out += "</svg>\n";
  return out;
}

inline void render_plot(const Scenario& s, const PlotLayers& layers, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << render_svg(s, layers);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace larp
