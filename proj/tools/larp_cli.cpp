// Command-line front end: plan, compare, plot and tree over scenario files.
//
// Exit codes: 0 success, 2 validation or usage error, 3 no path, 4 I/O error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "larp/errors.hpp"
#include "larp/pipeline.hpp"
#include "larp/scenario.hpp"
#include "larp/svg.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNoPath = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string scenario;
  std::string out;
  std::vector<std::string> planners;
  std::optional<double> beta;
  bool seed_free = false;
  bool no_timing = false;
  bool with_tree = false;
  bool with_network = false;
  std::string graph_out;
};

larp::Scenario load(const Options& opt) {
  larp::Scenario s = larp::load_scenario(opt.scenario);
  if (opt.beta) {
    s.search.beta = *opt.beta;
    s.search.validate();
  }
  return s;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    larp::write_text(text, path);
  }
}

int cmd_plan(const Options& opt) {
  const larp::Scenario s = load(opt);
  const std::string name = opt.planners.empty() ? "Larp" : opt.planners.front();
  const larp::PlannerChoice choice = larp::parse_planner_choice(name);
  larp::Route route;
  std::string status;
  if (choice) {
    larp::TraceResult trace = larp::follow(*choice, s.start, s.goal, s.field(), s.params_for(*choice));
    route = std::move(trace.route);
    status = larp::to_string(trace.terminated_by);
  } else {
    route = larp::plan_larp(s).result.route;
    status = "goal_reached";
  }
  const larp::RouteMetrics metrics = larp::measure_route(route, s.field(), s.goal);
  larp::json doc = larp::route_to_json(route, metrics);
  doc["planner"] = larp::planner_name(choice);
  doc["status"] = status;
  emit(doc.dump(2) + "\n", opt.out);
  if (!opt.out.empty() && opt.out != "-") {
    std::cerr << larp::planner_name(choice) << ": " << status << ", distance "
              << larp::format_fixed4(metrics.route_distance) << ", area " << larp::format_fixed4(metrics.route_area)
              << '\n';
  }
  return 0;
}

std::vector<larp::PlannerChoice> requested(const Options& opt) {
  if (opt.planners.empty()) return larp::all_planners();
  std::vector<larp::PlannerChoice> out;
  for (const std::string& name : opt.planners) out.push_back(larp::parse_planner_choice(name));
  return out;
}

int cmd_compare(const Options& opt) {
  const larp::Scenario s = load(opt);
  const larp::ComparisonReport report = larp::run_comparison(s, requested(opt));
  emit(larp::report_csv(report, !opt.no_timing), opt.out);
  return 0;
}

int cmd_plot(const Options& opt) {
  const larp::Scenario s = load(opt);
  larp::PlotLayers layers;
  std::optional<larp::LarpStages> stages;
  if (opt.with_tree || opt.with_network) {
    stages = larp::build_stages(s);
    if (opt.with_tree) layers.tree = stages->tree.get();
    if (opt.with_network) layers.graph = &stages->graph;
  }
  for (const std::string& name : opt.planners) {
    larp::PlannerRun run = larp::run_planner(s, larp::parse_planner_choice(name));
    layers.routes.emplace_back(run.planner, std::move(run.route));
  }
  if (opt.out.empty()) throw larp::ValidationError("plot requires --out");
  larp::render_plot(s, layers, opt.out);
  return 0;
}

int cmd_tree(const Options& opt) {
  const larp::Scenario s = load(opt);
  const larp::LarpStages stages = larp::build_stages(s);
  emit(larp::tree_to_json(*stages.tree).dump(1) + "\n", opt.out);
  if (!opt.graph_out.empty()) larp::write_text(larp::graph_to_json(stages.graph).dump(1) + "\n", opt.graph_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restrictive potential-field path planning"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", opt.scenario, "Scenario JSON file")->required();
    cmd->add_option("--out", opt.out, "Output file (stdout when omitted)");
    cmd->add_option("--beta", opt.beta, "Safety weight of the network search");
    cmd->add_flag("--seed-free", opt.seed_free, "Reserved; rejected");
  };

  CLI::App* plan = app.add_subcommand("plan", "Run one planner and write its route as JSON");
  common(plan);
  plan->add_option("--planner", opt.planners, "PM, APF, APF*, M-APF or Larp (default Larp)")->expected(1);

  CLI::App* compare = app.add_subcommand("compare", "Run planners and write the metrics table as CSV");
  common(compare);
  compare->add_option("--planner", opt.planners, "Planner to include (repeatable; default all)");
  compare->add_flag("--no-timing", opt.no_timing, "Write NA instead of runtimes");

  CLI::App* plot = app.add_subcommand("plot", "Render the field, cells, network and routes as SVG");
  common(plot);
  plot->add_option("--planner", opt.planners, "Route to overlay (repeatable)");
  plot->add_flag("--tree", opt.with_tree, "Draw quad-tree cells");
  plot->add_flag("--network", opt.with_network, "Draw routing network edges");

  CLI::App* tree = app.add_subcommand("tree", "Dump the quad-tree decomposition as JSON");
  common(tree);
  tree->add_option("--graph", opt.graph_out, "Also write the routing network JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (opt.seed_free) {
      throw larp::ValidationError("--seed-free is reserved: planning involves no randomness");
    }
    if (*plan) return cmd_plan(opt);
    if (*compare) return cmd_compare(opt);
    if (*plot) return cmd_plot(opt);
    if (*tree) return cmd_tree(opt);
  } catch (const larp::NoPathError& e) {
    std::cerr << "no path: " << e.what() << '\n';
    return kExitNoPath;
  } catch (const larp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const larp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
