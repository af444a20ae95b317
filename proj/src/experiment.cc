#include "introspect/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "introspect/domain_io.h"
#include "introspect/introspector.h"
#include "introspect/oracle.h"

namespace introspect {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("field '") + key + "': " + e.what());
  }
}

void validate(const ExperimentSpec& s) {
  if (s.episodes < 0) throw SpecError("episodes must be non-negative");
  if (s.workers < 1) throw SpecError("workers must be at least 1");
  if (s.node_cap == 0) throw SpecError("node_cap must be positive");
  if (!(s.time_cap_s > 0)) throw SpecError("time_cap_s must be positive");
  if (s.containers < 0) throw SpecError("containers must be non-negative");
  for (int n : s.sizes) {
    if (n < 1) throw SpecError("sizes must be at least 1");
  }
  for (const std::string& p : s.planners) {
    try {
      parse_planner(p);
    } catch (const Error& e) {
      throw SpecError(e.what());
    }
  }
}

std::string status_name(const EpisodeResult& r) {
  if (r.budget_exhausted) return "BUDGET";
  return std::string(to_string(r.status));
}

}  // namespace

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("experiment spec must be a JSON object");
  static const std::vector<std::string> known{
      "domain", "sizes",       "containers", "planners", "episodes",
      "seed",   "out",         "node_cap",   "time_cap_s", "c_ucb",
      "c_puct", "normalize_relational", "oracle_state_cap", "workers"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw SpecError("unknown field '" + k + "'");
    }
  }
  ExperimentSpec s;
  if (!j.contains("domain")) throw SpecError("missing field 'domain'");
  try {
    s.domain = parse_domain_id(field<std::string>(j, "domain", ""));
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(e.what());
  }
  s.sizes = field<std::vector<int>>(j, "sizes", {});
  s.containers = field<int>(j, "containers", s.containers);
  s.planners = field<std::vector<std::string>>(j, "planners", {});
  s.episodes = field<int>(j, "episodes", s.episodes);
  s.seed = field<std::uint64_t>(j, "seed", s.seed);
  s.out = field<std::string>(j, "out", s.out);
  s.node_cap = field<std::uint64_t>(j, "node_cap", s.node_cap);
  s.time_cap_s = field<double>(j, "time_cap_s", s.time_cap_s);
  s.c_ucb = field<double>(j, "c_ucb", s.c_ucb);
  s.c_puct = field<double>(j, "c_puct", s.c_puct);
  s.normalize_relational = field<bool>(j, "normalize_relational", s.normalize_relational);
  s.oracle_state_cap = field<std::size_t>(j, "oracle_state_cap", s.oracle_state_cap);
  s.workers = field<int>(j, "workers", s.workers);
  validate(s);
  return s;
}

json spec_to_json(const ExperimentSpec& s) {
  return json{{"domain", to_string(s.domain)},
              {"sizes", s.sizes},
              {"containers", s.containers},
              {"planners", s.planners},
              {"episodes", s.episodes},
              {"seed", s.seed},
              {"out", s.out},
              {"node_cap", s.node_cap},
              {"time_cap_s", s.time_cap_s},
              {"c_ucb", s.c_ucb},
              {"c_puct", s.c_puct},
              {"normalize_relational", s.normalize_relational},
              {"oracle_state_cap", s.oracle_state_cap},
              {"workers", s.workers}};
}

std::vector<int> parse_sizes(const std::string& text) {
  auto num = [&](const std::string& t) {
    int v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw SpecError("bad size '" + t + "' in '" + text + "'");
    }
    return v;
  };
  std::vector<int> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    int a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
    if (a > b) throw SpecError("empty size range '" + text + "'");
    for (int v = a; v <= b; ++v) out.push_back(v);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(num(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> parse_planner_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string name = text.substr(start, comma - start);
    try {
      out.push_back(to_string(parse_planner(name)));
    } catch (const Error& e) {
      throw SpecError(e.what());
    }
    start = comma + 1;
  }
  return out;
}

std::string config_fingerprint(const ExperimentSpec& spec, const std::string& planner) {
  PlannerSpec p = parse_planner(planner);
  json j{{"schema", kCsvSchemaVersion},
         {"domain", to_string(spec.domain)},
         {"containers", spec.containers},
         {"planner", to_string(p)},
         {"node_cap", spec.node_cap},
         {"time_cap_s", spec.time_cap_s},
         {"normalize_relational", spec.normalize_relational},
         {"oracle_state_cap", spec.oracle_state_cap}};
  if (p.kind == PlannerSpec::Kind::kMcts) j["c_ucb"] = spec.c_ucb;
  if (p.kind == PlannerSpec::Kind::kMctsU) j["c_puct"] = spec.c_puct;
  // FNV-1a over the canonical dump.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_header() {
  return "schema_version,domain,size,planner,seed,episode,return,normalized_score,"
         "nodes_expanded,plan_length,status,wall_time_ms,config_fingerprint\n";
}

std::string csv_line(const ResultRow& r) {
  std::string out = std::to_string(kCsvSchemaVersion);
  auto add = [&](const std::string& v) {
    out += ',';
    out += v;
  };
  add(r.domain);
  add(std::to_string(r.size));
  add(r.planner);
  add(std::to_string(r.seed));
  add(std::to_string(r.episode));
  add(fmt(r.ret));
  add(r.normalized ? fmt(*r.normalized) : "");
  add(std::to_string(r.nodes_expanded));
  add(std::to_string(r.plan_length));
  add(r.status);
  add(fmt(std::round(r.wall_ms * 1000.0) / 1000.0));
  add(r.fingerprint);
  out += '\n';
  return out;
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double sum = 0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double sq = 0;
  for (double x : xs) sq += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
  return m;
}

double log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) return 0;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += std::log1p(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (std::log1p(ys[i]) - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx == 0 ? 0 : sxy / sxx;
}

std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows) {
  // Cells in first-appearance order.
  std::vector<CellSummary> cells;
  std::map<std::tuple<std::string, int, std::string>, std::size_t> index;
  std::vector<std::vector<const ResultRow*>> members;
  for (const ResultRow& r : rows) {
    auto key = std::make_tuple(r.domain, r.size, r.planner);
    auto [it, fresh] = index.emplace(key, cells.size());
    if (fresh) {
      CellSummary c;
      c.domain = r.domain;
      c.size = r.size;
      c.planner = r.planner;
      cells.push_back(c);
      members.emplace_back();
    }
    members[it->second].push_back(&r);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<double> ret, norm, nodes, len, wall;
    for (const ResultRow* r : members[i]) {
      ret.push_back(r->ret);
      if (r->normalized) norm.push_back(*r->normalized);
      nodes.push_back(static_cast<double>(r->nodes_expanded));
      len.push_back(static_cast<double>(r->plan_length));
      wall.push_back(r->wall_ms);
      cells[i].successes += r->status == "SUCCESS";
      cells[i].budget_hits += r->status == "BUDGET";
    }
    cells[i].ret = moments(ret);
    cells[i].normalized = moments(norm);
    cells[i].nodes = moments(nodes);
    cells[i].plan_length = moments(len);
    cells[i].wall_ms = moments(wall);
  }
  return cells;
}

std::vector<PlannerTrend> trends(const std::vector<CellSummary>& cells) {
  std::vector<PlannerTrend> out;
  std::vector<std::string> order;
  for (const CellSummary& c : cells) {
    if (std::find(order.begin(), order.end(), c.planner) == order.end()) order.push_back(c.planner);
  }
  for (const std::string& p : order) {
    std::vector<double> xs, nodes, wall;
    for (const CellSummary& c : cells) {
      if (c.planner != p) continue;
      xs.push_back(c.size);
      nodes.push_back(c.nodes.mean);
      wall.push_back(c.wall_ms.mean);
    }
    out.push_back(PlannerTrend{p, log_slope(xs, nodes), log_slope(xs, wall)});
  }
  return out;
}

json summary_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  auto mj = [](const Moments& m) { return json{{"n", m.n}, {"mean", m.mean}, {"std", m.stddev}}; };
  json cells = json::array();
  for (const CellSummary& c : result.cells) {
    cells.push_back(json{{"domain", c.domain},
                         {"size", c.size},
                         {"planner", c.planner},
                         {"episodes", c.ret.n},
                         {"successes", c.successes},
                         {"budget_hits", c.budget_hits},
                         {"return", mj(c.ret)},
                         {"normalized_score", mj(c.normalized)},
                         {"nodes_expanded", mj(c.nodes)},
                         {"plan_length", mj(c.plan_length)},
                         {"wall_time_ms", mj(c.wall_ms)}});
  }
  json tr = json::array();
  for (const PlannerTrend& t : result.trends) {
    tr.push_back(json{{"planner", t.planner},
                      {"nodes_log_slope", t.nodes_log_slope},
                      {"wall_time_ms_log_slope", t.wall_ms_log_slope}});
  }
  return json{{"schema_version", kCsvSchemaVersion},
              {"spec", spec_to_json(spec)},
              {"cells", cells},
              {"trends", tr}};
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& csv,
                                const std::function<void(const CellSummary&)>& on_cell) {
  validate(spec);
  ExperimentResult result;
  csv << csv_header() << std::flush;
  EpisodeConfig cfg;
  cfg.limits = SearchLimits{spec.node_cap, spec.time_cap_s};
  cfg.mcts.c_ucb = spec.c_ucb;
  cfg.mcts.c_puct = spec.c_puct;
  cfg.normalize_relational = spec.normalize_relational;
  cfg.oracle_state_cap = spec.oracle_state_cap;

  for (int size : spec.sizes) {
    InstanceParams params{spec.domain, size, spec.containers};
    for (const std::string& name : spec.planners) {
      const PlannerSpec planner = parse_planner(name);
      const std::string fp = config_fingerprint(spec, name);
      std::vector<ResultRow> cell(static_cast<std::size_t>(spec.episodes));
      std::atomic<int> next{0};
      std::exception_ptr failure;
      std::mutex failure_mu;
      auto work = [&] {
        for (int e = next++; e < spec.episodes; e = next++) {
          try {
            const std::uint64_t seed = mix_seed(spec.seed, static_cast<std::uint64_t>(e));
            EpisodeResult r = run_episode(params, planner, seed, cfg);
            ResultRow& row = cell[static_cast<std::size_t>(e)];
            row.domain = to_string(spec.domain);
            row.size = size;
            row.planner = to_string(planner);
            row.seed = seed;
            row.episode = e;
            row.ret = r.ret;
            row.normalized = r.normalized;
            row.nodes_expanded = r.nodes_expanded;
            row.plan_length = r.plan_length;
            row.status = status_name(r);
            row.wall_ms = r.wall_ms;
            row.fingerprint = fp;
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      };
      const int n_workers = std::min(spec.workers, std::max(1, spec.episodes));
      if (n_workers == 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
      }
      if (failure) std::rethrow_exception(failure);
      for (const ResultRow& row : cell) csv << csv_line(row);
      csv << std::flush;
      if (on_cell) {
        auto s = summarize(cell);
        if (!s.empty()) on_cell(s.front());
      }
      result.rows.insert(result.rows.end(), cell.begin(), cell.end());
    }
  }
  result.cells = summarize(result.rows);
  result.trends = trends(result.cells);
  return result;
}

namespace {

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

}  // namespace

std::vector<GoldenCheck> verify_goldens(const std::string& data_dir) {
  std::vector<GoldenCheck> out;
  auto check = [&](std::string name, std::string expected, std::string actual) {
    bool pass = expected == actual;
    out.push_back(GoldenCheck{std::move(name), std::move(expected), std::move(actual), pass});
  };
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out.push_back(GoldenCheck{name, "no error", std::string("error: ") + e.what(), false});
    }
  };

  guarded("bins_2x2", [&] {
    Problem p = parse_problem(read_file(data_dir + "/fixtures/bins_2x2.prob"));
    auto domain = builtin_domain(p.domain);
    RelationalMdp mdp(domain, p.state);
    auto g = bfs_oracle(mdp, 100000);
    check("bins.reachable_states", "36", std::to_string(g.states.size()));
    check("bins.dead_end_count", "18", std::to_string(g.dead_ends.size()));
    std::vector<std::size_t> ids;
    for (std::size_t i : g.dead_ends) ids.push_back(i + 1);
    check("bins.dead_end_ids", "2,3,6,7,8,14,15,21,23,26,28,30,31,32,33,34,35,36", join(ids));
    check("bins.optimal_plan_length", "4",
          g.optimal_success_plan ? std::to_string(g.optimal_success_plan->actions.size()) : "none");

    MutabilityIndex idx(*domain);
    MutationSet ms = mutate_true(p.state, extract_maximal_reward_condition(domain->reward()), idx);
    std::vector<std::string> listed;
    for (const Mutation& m : ms) listed.push_back(m.str());
    check("bins.initial_mutations",
          "-InBin(i1,d1) -InBin(i2,d1) @CloseBin(d1) | -InBin(i1,d2) -InBin(i2,d2) @CloseBin(d2)",
          join(listed, " | "));

    // Milestone transitions, grouped by the mutation they satisfy.
    for (const Mutation& m : ms) {
      std::vector<std::string> edges;
      for (std::size_t e : g.milestone_edges) {
        const auto& edge = g.edges[e];
        if (is_satisfied(m, g.states[edge.from], edge.action)) {
          edges.push_back("(" + std::to_string(edge.from + 1) + "," + std::to_string(edge.to + 1) + ")");
        }
      }
      const std::string which = m.required_action ? m.required_action->str() : "?";
      check("bins.milestones[" + which + "]", "8", std::to_string(edges.size()));
      check("bins.milestone_edges[" + which + "]",
            which == "CloseBin(d1)" ? "(4,9) (8,15) (10,16) (11,17) (18,24) (19,25) (21,26) (28,32)"
                                    : "(5,12) (7,14) (10,18) (13,22) (16,24) (20,27) (23,31) (30,33)",
            join(edges, " "));
    }

    auto r = introspector_plan(mdp, relational_horizon(p.state));
    std::vector<std::string> plan;
    for (const auto& a : r.search.plan.actions) plan.push_back(a.str());
    check("bins.introspector_plan", "Pick(i2,d2) CloseBin(d2) Pick(i1,d1) CloseBin(d1)", join(plan, " "));
    check("bins.introspector_status", "SUCCESS", std::string(to_string(r.search.plan.status)));
  });

  guarded("blocks_towers", [&] {
    Problem a = parse_problem(read_file(data_dir + "/fixtures/blocks_towers.prob"));
    Problem b = parse_problem(read_file(data_dir + "/fixtures/blocks_towers_flat.prob"));
    auto domain = builtin_domain(a.domain);
    MutabilityIndex idx(*domain);
    MutationSet ms = mutate_true(a.state, extract_maximal_reward_condition(domain->reward()), idx);
    std::vector<std::string> listed;
    for (const Mutation& m : ms) listed.push_back(m.str());
    check("blocks.mutations", "+OnTable(a) +OnTable(b) +OnTable(c) +OnTable(d)", join(listed, " | "));
    check("blocks.heuristic_at_start", "1",
          ms.size() == 1 ? std::to_string(literal_count_heuristic(a.state, ms[0])) : "n/a");
    RelationalMdp mdp(domain, a.state);
    auto r = introspector_plan(mdp, relational_horizon(a.state));
    check("blocks.introspector_plan_length", "2", std::to_string(r.search.plan.actions.size()));
    RelState end = a.state;
    for (const auto& act : r.search.plan.actions) end = apply(end, act, *domain);
    check("blocks.reaches_milestone", "true", end == b.state ? "true" : "false");
  });
  return out;
}

json goldens_json(const std::vector<GoldenCheck>& checks) {
  json arr = json::array();
  bool all = true;
  for (const GoldenCheck& c : checks) {
    arr.push_back(json{{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
    all &= c.pass;
  }
  return json{{"pass", all}, {"checks", arr}};
}

}  // namespace introspect
