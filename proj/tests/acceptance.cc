// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any fails. Tolerances and caps are fixed below.

#include <chrono>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "introspect/experiment.h"
#include "mutation_props.h"

using namespace introspect;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr int kScalingEpisodes = 100;
// Exhaustive greedy on the relational domains is exponential; it runs fewer
// episodes (the first 20 of the same instance stream) under a node cap.
constexpr int kGreedyRelationalEpisodes = 20;
constexpr std::uint64_t kGreedyRelationalCap = 5000;
constexpr double kIntrospectorGrowthMax = 2.5;
constexpr double kGreedyGrowthMin = 3.4;
constexpr int kMutationPairs = 500;
constexpr double kMutationSecondsMax = 30;
constexpr double kGoldenSecondsMax = 1;
constexpr int kReplayEpisodes = 10000;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << id << " " << name << ": " << detail << std::endl;
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    auto last = line.rfind(',');
    auto prev = line.rfind(',', last - 1);
    out += line.substr(0, prev) + line.substr(last) + "\n";
  }
  return out;
}

struct SuiteRun {
  std::string goldens;
  std::vector<std::string> csvs;
  std::vector<CellSummary> grid;
  // Per relational domain: introspector cells, greedy cells, rows.
  struct Relational {
    std::string domain;
    std::vector<CellSummary> introspector, greedy;
    std::vector<ResultRow> rows;
  };
  std::vector<Relational> relational;
};

ExperimentSpec base_spec(DomainId d, std::vector<int> sizes, int containers,
                         std::vector<std::string> planners, int episodes) {
  ExperimentSpec s;
  s.domain = d;
  s.sizes = std::move(sizes);
  s.containers = containers;
  s.planners = std::move(planners);
  s.episodes = episodes;
  s.seed = kSeed;
  s.normalize_relational = false;
  return s;
}

SuiteRun run_suite() {
  SuiteRun run;
  run.goldens = goldens_json(verify_goldens()).dump();

  ExperimentSpec grid = base_spec(DomainId::kGrid, {5, 10, 20, 40, 80}, 0,
                                  {"introspector", "greedy"}, kScalingEpisodes);
  std::ostringstream grid_csv;
  run.grid = run_experiment(grid, grid_csv).cells;
  run.csvs.push_back(grid_csv.str());

  struct Sweep {
    DomainId domain;
    std::vector<int> sizes;
    int containers;
  };
  for (const Sweep& sw : {Sweep{DomainId::kBlocksWorld, {4, 5, 6, 7, 8, 9, 10, 11}, 0},
                          Sweep{DomainId::kDrawers, {1, 2, 3, 4, 5, 6}, 3},
                          Sweep{DomainId::kBins, {1, 2, 3, 4, 5, 6}, 2}}) {
    SuiteRun::Relational rel;
    rel.domain = to_string(sw.domain);
    ExperimentSpec in = base_spec(sw.domain, sw.sizes, sw.containers, {"introspector"}, kScalingEpisodes);
    ExperimentSpec gr = base_spec(sw.domain, sw.sizes, sw.containers, {"greedy"}, kGreedyRelationalEpisodes);
    gr.node_cap = kGreedyRelationalCap;
    std::ostringstream a, b;
    ExperimentResult ra = run_experiment(in, a);
    ExperimentResult rb = run_experiment(gr, b);
    rel.introspector = ra.cells;
    rel.greedy = rb.cells;
    rel.rows = ra.rows;
    rel.rows.insert(rel.rows.end(), rb.rows.begin(), rb.rows.end());
    run.csvs.push_back(a.str());
    run.csvs.push_back(b.str());
    run.relational.push_back(std::move(rel));
  }
  return run;
}

void criterion_goldens(const std::vector<GoldenCheck>& checks, double secs) {
  std::string failed;
  int n = 0;
  for (const GoldenCheck& c : checks) {
    if (c.name.rfind("bins.", 0) != 0) continue;
    ++n;
    if (!c.pass) failed += " " + c.name + "=" + c.actual;
  }
  bool pass = n > 0 && failed.empty() && secs < kGoldenSecondsMax;
  std::ostringstream d;
  d << n << " bins checks in " << secs << " s" << (failed.empty() ? "" : "; failed:" + failed);
  report(1, "bins worked example", pass, d.str());
}

void criterion_towers(const std::vector<GoldenCheck>& checks) {
  std::string failed;
  int n = 0;
  for (const GoldenCheck& c : checks) {
    if (c.name.rfind("blocks.", 0) != 0) continue;
    ++n;
    if (!c.pass) failed += " " + c.name + "=" + c.actual;
  }
  report(2, "tower example", n == 4 && failed.empty(),
         std::to_string(n) + " blocks checks" + (failed.empty() ? "" : "; failed:" + failed));
}

void criterion_mutations() {
  auto t0 = std::chrono::steady_clock::now();
  auto r = testgen::check_mutation_properties(kSeed, kMutationPairs);
  double secs = seconds_since(t0);
  int violations = r.soundness_violations + r.completeness_violations;
  std::ostringstream d;
  d << r.pairs << " pairs, " << r.mutations_checked << " mutations, " << r.assignments_checked
    << " assignments, " << violations << " violations, " << secs << " s";
  if (!r.first_failure.empty()) d << "; first: " << r.first_failure;
  report(3, "mutation soundness and completeness",
         r.pairs == kMutationPairs && violations == 0 && secs < kMutationSecondsMax, d.str());
}

const CellSummary* find_cell(const std::vector<CellSummary>& cells, const std::string& planner, int size) {
  for (const CellSummary& c : cells) {
    if (c.planner == planner && c.size == size) return &c;
  }
  return nullptr;
}

void criterion_grid(const SuiteRun& run) {
  bool pass = true;
  std::ostringstream d;
  for (int size : {5, 10, 20, 40, 80}) {
    const CellSummary* c = find_cell(run.grid, "introspector", size);
    if (!c || c->normalized.n != kScalingEpisodes || c->normalized.mean != 1.0 ||
        c->normalized.stddev != 0.0) {
      pass = false;
      d << "introspector below optimal at d=" << size << "; ";
    }
  }
  for (int size : {5, 10, 20, 40}) {
    double in = find_cell(run.grid, "introspector", 2 * size)->nodes.mean /
                find_cell(run.grid, "introspector", size)->nodes.mean;
    double gr = find_cell(run.grid, "greedy", 2 * size)->nodes.mean /
                find_cell(run.grid, "greedy", size)->nodes.mean;
    d << "d=" << size << ": introspector x" << in << " greedy x" << gr << "; ";
    if (in > kIntrospectorGrowthMax) pass = false;
    if (size >= 10 && gr < kGreedyGrowthMin) pass = false;
  }
  report(4, "grid scaling", pass, d.str());
}

void criterion_beam() {
  bool all_optimal = true, some_short = false;
  std::ostringstream d;
  int short_at = 0;
  for (int size = 1; size <= 20; ++size) {
    for (int e = 0; e < 10; ++e) {
      std::uint64_t seed = mix_seed(kSeed + 5, static_cast<std::uint64_t>(size * 100 + e));
      InstanceParams p{DomainId::kGrid, size, 0};
      auto wide = run_episode(p, PlannerSpec{PlannerSpec::Kind::kBeam, 2 * size * size}, seed);
      auto narrow = run_episode(p, PlannerSpec{PlannerSpec::Kind::kBeam, size}, seed);
      if (wide.normalized != 1.0) {
        all_optimal = false;
        d << "beam:2d^2 short at d=" << size << "; ";
      }
      if (narrow.normalized < 1.0 && !some_short) {
        some_short = true;
        short_at = size;
      }
    }
  }
  d << "beam:2d^2 optimal for d<=20: " << (all_optimal ? "yes" : "no") << "; beam:d first short at d="
    << short_at;
  report(5, "beam budget threshold", all_optimal && some_short, d.str());
}

void criterion_relational(const SuiteRun& run) {
  bool pass = true;
  std::ostringstream d;
  for (const auto& rel : run.relational) {
    std::size_t solved = 0, cells = 0;
    for (const CellSummary& c : rel.introspector) {
      solved += c.successes;
      ++cells;
      if (c.successes != static_cast<std::size_t>(kScalingEpisodes)) pass = false;
    }
    for (const ResultRow& r : rel.rows) {
      if (r.planner == "greedy" && r.status != "BUDGET" && r.status != "SUCCESS") {
        pass = false;
        d << rel.domain << " greedy finished without success at size " << r.size << "; ";
      }
    }
    std::vector<double> xs, yi, yg;
    for (const CellSummary& c : rel.introspector) {
      const CellSummary* g = find_cell(rel.greedy, "greedy", c.size);
      xs.push_back(c.size);
      yi.push_back(c.nodes.mean);
      yg.push_back(g->nodes.mean);
      if (c.size >= 6 && !(c.nodes.mean < g->nodes.mean)) {
        pass = false;
        d << rel.domain << " introspector not cheaper at size " << c.size << "; ";
      }
    }
    double si = log_slope(xs, yi), sg = log_slope(xs, yg);
    if (!(si < sg)) pass = false;
    d << rel.domain << ": solved " << solved << "/" << cells * kScalingEpisodes << ", log-slope "
      << si << " vs greedy " << sg << "; ";
  }
  report(6, "relational scaling", pass, d.str());
}

void criterion_determinism(const SuiteRun& a) {
  SuiteRun b = run_suite();
  bool pass = a.goldens == b.goldens && a.csvs.size() == b.csvs.size();
  std::size_t rows = 0;
  for (std::size_t i = 0; pass && i < a.csvs.size(); ++i) {
    pass = strip_timing(a.csvs[i]) == strip_timing(b.csvs[i]);
    rows += static_cast<std::size_t>(std::count(a.csvs[i].begin(), a.csvs[i].end(), '\n')) - 1;
  }
  report(7, "determinism", pass, std::to_string(rows) + " rows compared over " +
                                     std::to_string(a.csvs.size()) + " CSVs plus goldens");
}

// Replays a grid plan with the movement and reward rules written out here.
bool grid_replay_ok(GridState s, int horizon, const EpisodeResult& r) {
  if (static_cast<int>(r.plan.size()) > horizon || r.plan.size() != r.plan_length) return false;
  double ret = 0;
  for (const std::string& a : r.plan) {
    if (a == "UP") ++s.y;
    else if (a == "DOWN") --s.y;
    else if (a == "LEFT") --s.x;
    else if (a == "RIGHT") ++s.x;
    else return false;
    ret += s.x == 0 && s.y == 0 ? 1 : -1;
  }
  return ret == r.ret;
}

// Replays a relational plan by looking each action up among the applicable
// ground actions of the current state.
bool relational_replay_ok(const RelationalMdp& mdp, int horizon, const EpisodeResult& r) {
  if (static_cast<int>(r.plan.size()) > horizon || r.plan.size() != r.plan_length) return false;
  RelState s = mdp.initial();
  double ret = 0;
  Termination status = Termination::kContinue;
  for (const std::string& a : r.plan) {
    if (status != Termination::kContinue) return false;
    bool found = false;
    for (const auto& t : mdp.successors(s)) {
      if (t.action.str() != a) continue;
      found = true;
      ret += t.reward;
      status = t.status;
      s = t.next;
      break;
    }
    if (!found) return false;
  }
  return ret == r.ret && (r.plan.empty() || status == r.status);
}

void criterion_replay() {
  std::mt19937_64 rng(kSeed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const DomainId domains[] = {DomainId::kGrid, DomainId::kBlocksWorld, DomainId::kDrawers, DomainId::kBins};
  const PlannerSpec::Kind kinds[] = {PlannerSpec::Kind::kGreedy, PlannerSpec::Kind::kRandom,
                                     PlannerSpec::Kind::kBeam,   PlannerSpec::Kind::kMcts,
                                     PlannerSpec::Kind::kMctsU,  PlannerSpec::Kind::kIntrospector};
  EpisodeConfig cfg;
  cfg.normalize_relational = false;
  cfg.limits.node_cap = 2000;
  std::map<std::string, int> bad;
  int episodes = 0;
  for (int i = 0; i < kReplayEpisodes; ++i) {
    DomainId dom = domains[pick(0, 3)];
    PlannerSpec planner{kinds[pick(0, 5)], pick(1, 20)};
    std::uint64_t seed = rng();
    bool ok = false;
    try {
      if (dom == DomainId::kGrid) {
        GridState s0 = gen_grid(pick(1, 10), seed);
        int h = grid_horizon(manhattan(s0));
        ok = grid_replay_ok(s0, h, run_grid_episode(s0, h, planner, seed, cfg));
      } else {
        RelState s0;
        if (dom == DomainId::kBlocksWorld) s0 = gen_blocks_world(pick(1, 5), seed);
        if (dom == DomainId::kDrawers) s0 = gen_drawers(pick(1, 3), pick(1, 2), seed);
        if (dom == DomainId::kBins) s0 = gen_bins(pick(1, 3), pick(0, 4), seed);
        RelationalMdp mdp(builtin_domain(to_string(dom)), s0);
        int h = relational_horizon(s0);
        ok = relational_replay_ok(mdp, h, run_relational_episode(mdp, h, planner, seed, cfg));
      }
    } catch (const Error&) {
      ok = false;
    }
    ++episodes;
    if (!ok) ++bad[to_string(dom) + "/" + to_string(planner)];
  }
  std::ostringstream d;
  int total_bad = 0;
  for (auto& [k, v] : bad) {
    total_bad += v;
    d << k << ":" << v << " ";
  }
  d << episodes << " episodes, " << total_bad << " invalid";
  report(8, "plan validity", total_bad == 0 && episodes == kReplayEpisodes, d.str());
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<GoldenCheck> checks = verify_goldens();
  double golden_secs = seconds_since(t0);
  criterion_goldens(checks, golden_secs);
  criterion_towers(checks);
  criterion_mutations();

  SuiteRun first = run_suite();
  criterion_grid(first);
  criterion_beam();
  criterion_relational(first);
  criterion_determinism(first);
  criterion_replay();

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << " in " << seconds_since(t0) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
