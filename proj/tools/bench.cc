#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "introspect/domain_io.h"
#include "introspect/experiment.h"
#include "introspect/introspector.h"
#include "introspect/oracle.h"

using namespace introspect;
using nlohmann::json;

namespace {

constexpr int kExitGolden = 1;
constexpr int kExitSpec = 2;

struct RunArgs {
  std::string spec_file;
  std::string domain;
  std::string sizes;
  std::string planners;
  int episodes = 100;
  std::uint64_t seed = 0;
  int containers = 0;
  std::string out;
  std::string summary;
  std::uint64_t node_cap = 5'000'000;
  double time_cap = 60;
  int workers = 1;
  bool no_normalize = false;
  std::size_t oracle_cap = 20000;
};

ExperimentSpec spec_from_args(const RunArgs& a) {
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) throw SpecError("cannot open spec '" + a.spec_file + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw SpecError(std::string("spec is not valid JSON: ") + e.what());
    }
    ExperimentSpec s = spec_from_json(j);
    if (!a.out.empty()) s.out = a.out;
    return s;
  }
  if (a.domain.empty() || a.sizes.empty() || a.planners.empty()) {
    throw SpecError("run needs --spec, or --domain, --sizes and --planner");
  }
  ExperimentSpec s;
  try {
    s.domain = parse_domain_id(a.domain);
  } catch (const Error& e) {
    throw SpecError(e.what());
  }
  s.sizes = parse_sizes(a.sizes);
  s.planners = parse_planner_list(a.planners);
  s.episodes = a.episodes;
  s.seed = a.seed;
  s.containers = a.containers;
  s.out = a.out;
  s.node_cap = a.node_cap;
  s.time_cap_s = a.time_cap;
  s.workers = a.workers;
  s.normalize_relational = !a.no_normalize;
  s.oracle_state_cap = a.oracle_cap;
  // Round trip through JSON so both entry points share validation.
  return spec_from_json(spec_to_json(s));
}

int cmd_run(const RunArgs& a) {
  ExperimentSpec spec = spec_from_args(a);
  std::ofstream file;
  std::ostream* csv = &std::cout;
  if (!spec.out.empty() && spec.out != "-") {
    file.open(spec.out);
    if (!file) throw SpecError("cannot write '" + spec.out + "'");
    csv = &file;
  }
  auto progress = [](const CellSummary& c) {
    std::cerr << c.domain << " size=" << c.size << " " << c.planner << " episodes=" << c.ret.n
              << " success=" << c.successes << " nodes=" << c.nodes.mean
              << " score=" << (c.normalized.n ? std::to_string(c.normalized.mean) : "-") << "\n";
  };
  ExperimentResult result = run_experiment(spec, *csv, progress);
  std::string summary = a.summary;
  if (summary.empty() && csv == &file) summary = spec.out + ".summary.json";
  if (!summary.empty()) {
    std::ofstream out(summary);
    out << summary_json(spec, result).dump(2) << "\n";
  }
  return 0;
}

int cmd_goldens(const std::string& data_dir, const std::string& report) {
  auto checks = verify_goldens(data_dir);
  json j = goldens_json(checks);
  std::cout << j.dump(2) << "\n";
  if (!report.empty()) std::ofstream(report) << j.dump(2) << "\n";
  for (const GoldenCheck& c : checks) {
    if (!c.pass) std::cerr << "golden check failed: " << c.name << "\n";
  }
  return j["pass"].get<bool>() ? 0 : kExitGolden;
}

RelationalMdp load_fixture(const std::string& path) {
  Problem p;
  try {
    p = parse_problem(read_file(path));
    return RelationalMdp(builtin_domain(p.domain), p.state);
  } catch (const Error& e) {
    throw SpecError(path + ": " + e.what());
  }
}

int cmd_oracle(const std::string& fixture, std::size_t cap) {
  RelationalMdp mdp = load_fixture(fixture);
  auto g = bfs_oracle(mdp, cap);
  json states = json::array(), edges = json::array(), dead = json::array(), milestones = json::array();
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    json facts = json::array();
    for (const Atom& a : g.states[i].facts()) facts.push_back(a.str());
    states.push_back(json{{"id", i + 1}, {"expanded", static_cast<bool>(g.expanded[i])}, {"facts", facts}});
  }
  for (const auto& e : g.edges) {
    edges.push_back(json{{"from", e.from + 1},
                         {"to", e.to + 1},
                         {"action", e.action.str()},
                         {"reward", e.reward},
                         {"status", to_string(e.status)}});
  }
  for (std::size_t i : g.dead_ends) dead.push_back(i + 1);
  for (std::size_t e : g.milestone_edges) milestones.push_back(json{g.edges[e].from + 1, g.edges[e].to + 1});
  json plan = nullptr;
  if (g.optimal_success_plan) {
    json acts = json::array();
    for (const auto& a : g.optimal_success_plan->actions) acts.push_back(a.str());
    plan = json{{"actions", acts}, {"return", g.optimal_success_plan->ret}};
  }
  std::cout << json{{"states", states},
                    {"edges", edges},
                    {"dead_ends", dead},
                    {"milestone_edges", milestones},
                    {"optimal_success_plan", plan}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_plan(const std::string& fixture, const std::string& planner_name, int horizon,
             std::uint64_t seed, bool trace) {
  RelationalMdp mdp = load_fixture(fixture);
  PlannerSpec planner;
  try {
    planner = parse_planner(planner_name);
  } catch (const Error& e) {
    throw SpecError(e.what());
  }
  if (horizon <= 0) horizon = relational_horizon(mdp.initial());
  if (trace && planner.kind == PlannerSpec::Kind::kIntrospector) {
    IntrospectorOptions opt;
    opt.trace = &std::cout;
    introspector_plan(mdp, horizon, opt);
    return 0;
  }
  EpisodeResult r = run_relational_episode(mdp, horizon, planner, seed);
  for (const std::string& a : r.plan) std::cout << a << "\n";
  std::cout << "return=" << r.ret << " status=" << to_string(r.status)
            << " nodes=" << r.nodes_expanded << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Milestone-directed planning benchmarks"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a sweep and write per-episode CSV rows");
  run_cmd->add_option("--spec", run.spec_file, "JSON experiment spec");
  run_cmd->add_option("--domain", run.domain, "grid, blocks_world, drawers or bins");
  run_cmd->add_option("--sizes", run.sizes, "a..b or a comma list");
  run_cmd->add_option("--planner", run.planners, "comma list, e.g. greedy,beam:50,introspector");
  run_cmd->add_option("--episodes", run.episodes, "episodes per cell")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "base seed")->capture_default_str();
  run_cmd->add_option("--containers", run.containers, "drawers or bins (0: domain default)");
  run_cmd->add_option("--out", run.out, "CSV path ('-' for stdout)");
  run_cmd->add_option("--summary", run.summary, "summary JSON path (default <out>.summary.json)");
  run_cmd->add_option("--node-cap", run.node_cap, "per-episode node cap")->capture_default_str();
  run_cmd->add_option("--time-cap", run.time_cap, "per-episode time cap in seconds")->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "parallel episodes")->capture_default_str();
  run_cmd->add_flag("--no-normalize", run.no_normalize, "skip oracle scoring of relational episodes");
  run_cmd->add_option("--oracle-cap", run.oracle_cap, "state cap for oracle scoring")->capture_default_str();

  std::string data_dir = INTROSPECT_DATA_DIR, report;
  auto* goldens_cmd = app.add_subcommand("verify-goldens", "Check the pinned worked examples");
  goldens_cmd->add_option("--data-dir", data_dir, "directory holding fixtures/")->capture_default_str();
  goldens_cmd->add_option("--report", report, "also write the JSON report here");

  std::string fixture;
  std::size_t cap = 100000;
  auto* oracle_cmd = app.add_subcommand("oracle", "Dump the reachability graph of a problem file");
  oracle_cmd->add_option("--fixture", fixture, "problem file")->required();
  oracle_cmd->add_option("--cap", cap, "state cap")->capture_default_str();

  std::string planner = "introspector";
  int horizon = 0;
  std::uint64_t plan_seed = 0;
  bool trace = false;
  auto* plan_cmd = app.add_subcommand("plan", "Plan once on a problem file");
  plan_cmd->add_option("--fixture", fixture, "problem file")->required();
  plan_cmd->add_option("--planner", planner, "planner name")->capture_default_str();
  plan_cmd->add_option("--horizon", horizon, "0: 8 steps per object");
  plan_cmd->add_option("--seed", plan_seed, "planner seed");
  plan_cmd->add_flag("--trace", trace, "print the milestone search (introspector only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitSpec;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*goldens_cmd) return cmd_goldens(data_dir, report);
    if (*oracle_cmd) return cmd_oracle(fixture, cap);
    if (*plan_cmd) return cmd_plan(fixture, planner, horizon, plan_seed, trace);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const OracleOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  }
  return 0;
}
