#include "introspect/environments.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "introspect/domain_io.h"
#include "introspect/introspector.h"
#include "introspect/oracle.h"

namespace introspect {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string to_string(DomainId d) {
  switch (d) {
    case DomainId::kGrid: return "grid";
    case DomainId::kBlocksWorld: return "blocks_world";
    case DomainId::kDrawers: return "drawers";
    case DomainId::kBins: return "bins";
  }
  return "?";
}

DomainId parse_domain_id(const std::string& s) {
  for (DomainId d : {DomainId::kGrid, DomainId::kBlocksWorld, DomainId::kDrawers, DomainId::kBins}) {
    if (to_string(d) == s) return d;
  }
  throw Error("unknown domain '" + s + "'");
}

int default_containers(DomainId d) {
  switch (d) {
    case DomainId::kDrawers: return 3;
    case DomainId::kBins: return 2;
    default: return 0;
  }
}

namespace {

Symbol sym(const std::string& s) { return Symbol::intern(s); }

Atom fact(const char* pred, std::initializer_list<Symbol> args) { return Atom(sym(pred), args); }

std::vector<Symbol> named(const char* prefix, int n) {
  std::vector<Symbol> out;
  for (int i = 1; i <= n; ++i) out.push_back(sym(prefix + std::to_string(i)));
  return out;
}

std::vector<Symbol> concat(std::vector<Symbol> a, const std::vector<Symbol>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

template <class T>
T pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

}  // namespace

GridState gen_grid(std::int64_t d, std::uint64_t seed) {
  if (d <= 0) return GridState{0, 0};
  std::mt19937_64 rng(seed);
  // Walk the diamond: quadrant q, offset i in [0, d).
  std::int64_t k = std::uniform_int_distribution<std::int64_t>(0, 4 * d - 1)(rng);
  std::int64_t q = k / d, i = k % d;
  switch (q) {
    case 0: return GridState{d - i, i};
    case 1: return GridState{-i, d - i};
    case 2: return GridState{-(d - i), -i};
    default: return GridState{i, -(d - i)};
  }
}

RelState gen_blocks_world(int n, std::uint64_t seed) {
  if (n < 1) throw Error("blocks_world needs at least one block");
  std::mt19937_64 rng(seed);
  std::vector<Symbol> blocks = named("b", n);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (;;) {
    long k = std::lround(std::sqrt(static_cast<double>(n)) * u(rng));
    k = std::clamp<long>(k, 1, n);
    std::vector<Symbol> order = blocks;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<Symbol>> stacks(static_cast<std::size_t>(k));
    for (Symbol b : order) {
      stacks[std::uniform_int_distribution<std::size_t>(0, stacks.size() - 1)(rng)].push_back(b);
    }
    bool flat = true;
    std::vector<Atom> facts{fact("HandEmpty", {})};
    for (const auto& st : stacks) {
      if (st.empty()) continue;
      flat &= st.size() == 1;
      facts.push_back(fact("OnTable", {st.front()}));
      for (std::size_t i = 1; i < st.size(); ++i) facts.push_back(fact("On", {st[i], st[i - 1]}));
      facts.push_back(fact("Clear", {st.back()}));
    }
    if (flat && n >= 2) continue;
    return RelState(blocks, std::move(facts));
  }
}

RelState gen_drawers(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw Error("drawers needs at least one drawer and one item");
  std::mt19937_64 rng(seed);
  std::vector<Symbol> drawers = named("d", n), items = named("i", m);
  for (;;) {
    std::vector<Atom> facts{fact("HandEmpty", {})};
    bool solved = true;
    for (Symbol d : drawers) facts.push_back(fact("IsDrawer", {d}));
    for (Symbol i : items) {
      facts.push_back(fact("IsItem", {i}));
      Symbol label = pick(rng, drawers);
      facts.push_back(fact("Belongs", {i, label}));
      // n drawers plus the shelf.
      std::size_t where = std::uniform_int_distribution<std::size_t>(0, drawers.size())(rng);
      if (where == drawers.size()) {
        facts.push_back(fact("OnShelf", {i}));
        solved = false;
      } else {
        facts.push_back(fact("In", {i, drawers[where]}));
        solved &= drawers[where] == label;
      }
    }
    if (solved) continue;
    return RelState(concat(drawers, items), std::move(facts));
  }
}

RelState gen_bins(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 0) throw Error("bins needs at least one bin");
  std::mt19937_64 rng(seed);
  std::vector<Symbol> bins = named("d", n), items = named("i", m);
  std::vector<Atom> facts;
  for (Symbol b : bins) {
    facts.push_back(fact("IsBin", {b}));
    facts.push_back(fact("Open", {b}));
  }
  for (Symbol i : items) {
    facts.push_back(fact("IsItem", {i}));
    facts.push_back(fact("InBin", {i, pick(rng, bins)}));
  }
  return RelState(concat(bins, items), std::move(facts));
}

PlannerSpec parse_planner(const std::string& s) {
  using K = PlannerSpec::Kind;
  if (s == "greedy") return {K::kGreedy, 0};
  if (s == "introspector") return {K::kIntrospector, 0};
  auto colon = s.find(':');
  if (colon == std::string::npos) throw Error("unknown planner '" + s + "'");
  std::string name = s.substr(0, colon), num = s.substr(colon + 1);
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(num, &used);
    if (used != num.size()) throw Error("");
  } catch (const std::exception&) {
    throw Error("bad budget in planner '" + s + "'");
  }
  if (k < 1) throw Error("planner budget must be positive in '" + s + "'");
  if (name == "random") return {K::kRandom, k};
  if (name == "beam") return {K::kBeam, k};
  if (name == "mcts") return {K::kMcts, k};
  if (name == "mcts-u") return {K::kMctsU, k};
  throw Error("unknown planner '" + s + "'");
}

std::string to_string(const PlannerSpec& p) {
  using K = PlannerSpec::Kind;
  switch (p.kind) {
    case K::kGreedy: return "greedy";
    case K::kIntrospector: return "introspector";
    case K::kRandom: return "random:" + std::to_string(p.k);
    case K::kBeam: return "beam:" + std::to_string(p.k);
    case K::kMcts: return "mcts:" + std::to_string(p.k);
    case K::kMctsU: return "mcts-u:" + std::to_string(p.k);
  }
  return "?";
}

double normalized_score(double ret, double worst, double optimal) {
  if (optimal <= worst) return 1.0;
  return std::clamp((ret - worst) / (optimal - worst), 0.0, 1.0);
}

int relational_horizon(const RelState& s) { return 8 * static_cast<int>(s.constants().size()); }

namespace {

// Shared by both MDP kinds; the introspector is dispatched by the caller.
template <Mdp M>
SearchStats<typename M::Action> run_baseline(const M& mdp, int horizon, const PlannerSpec& p,
                                             std::uint64_t seed, const EpisodeConfig& cfg) {
  using K = PlannerSpec::Kind;
  switch (p.kind) {
    case K::kGreedy: return greedy_exhaustive(mdp, horizon, cfg.limits);
    case K::kRandom: return random_k(mdp, horizon, p.k, seed, cfg.limits);
    case K::kBeam: return beam_k(mdp, horizon, p.k, cfg.limits);
    case K::kMcts: {
      MctsConfig c = cfg.mcts;
      c.rule = MctsConfig::Rule::kUcb1;
      return mcts(mdp, horizon, p.k, seed, c, cfg.limits);
    }
    case K::kMctsU: {
      MctsConfig c = cfg.mcts;
      c.rule = MctsConfig::Rule::kPuct;
      return mcts(mdp, horizon, p.k, seed, c, cfg.limits);
    }
    case K::kIntrospector: break;
  }
  throw Error("planner not handled: " + to_string(p));
}

template <Mdp M>
EpisodeResult finish_episode(const M& mdp, const SearchStats<typename M::Action>& stats) {
  EpisodeResult out;
  // The plan goes through the environment again; a mismatch is a planner bug.
  Plan<typename M::Action> replayed = replay(mdp, stats.plan.actions);
  if (replayed.ret != stats.plan.ret || replayed.status != stats.plan.status) {
    throw Error("planner reported a return that its plan does not reproduce");
  }
  out.ret = replayed.ret;
  out.status = replayed.status;
  out.plan_length = replayed.actions.size();
  out.budget_exhausted = stats.budget_exhausted;
  out.nodes_expanded = stats.nodes_expanded;
  out.wall_ms = stats.wall_ms;
  for (const auto& a : replayed.actions) {
    if constexpr (std::is_same_v<typename M::Action, Dir>) {
      out.plan.push_back(to_string(a));
    } else {
      out.plan.push_back(a.str());
    }
  }
  return out;
}

}  // namespace

EpisodeResult run_grid_episode(const GridState& s0, int horizon, const PlannerSpec& planner,
                               std::uint64_t seed, const EpisodeConfig& cfg) {
  GridMdp mdp(s0);
  SearchStats<Dir> stats = planner.kind == PlannerSpec::Kind::kIntrospector
                               ? grid_introspector_plan(mdp, horizon, cfg.limits)
                               : run_baseline(mdp, horizon, planner, seed, cfg);
  EpisodeResult out = finish_episode(mdp, stats);
  out.normalized = normalized_score(out.ret, grid_worst_return(horizon),
                                    grid_optimal_return(manhattan(s0), horizon));
  return out;
}

EpisodeResult run_relational_episode(const RelationalMdp& mdp, int horizon,
                                     const PlannerSpec& planner, std::uint64_t seed,
                                     const EpisodeConfig& cfg) {
  const RelState& s0 = mdp.initial();
  GroundAction noop(Symbol::intern(""), std::span<const Symbol>());
  Termination at_start = evaluate_termination(mdp.domain().termination(), s0, noop, s0);
  if (at_start != Termination::kContinue) {
    EpisodeResult out;
    out.status = at_start;
    out.normalized = at_start == Termination::kSuccess ? 1.0 : 0.0;
    return out;
  }

  SearchStats<GroundAction> stats;
  if (planner.kind == PlannerSpec::Kind::kIntrospector) {
    IntrospectorOptions opt;
    opt.limits = cfg.limits;
    stats = introspector_plan(mdp, horizon, opt).search;
  } else {
    stats = run_baseline(mdp, horizon, planner, seed, cfg);
  }
  EpisodeResult out = finish_episode(mdp, stats);

  if (cfg.normalize_relational) {
    double min_value = 0;
    for (const Clause& c : mdp.domain().reward().clauses()) min_value = std::min(min_value, c.value);
    try {
      auto g = bfs_oracle(mdp, cfg.oracle_state_cap);
      if (g.optimal_success_plan) {
        out.normalized = normalized_score(out.ret, horizon * min_value, g.optimal_success_plan->ret);
      }
    } catch (const OracleOverflow&) {
      // Too large to score; the raw status is still reported.
    }
  }
  return out;
}

EpisodeResult run_episode(const InstanceParams& params, const PlannerSpec& planner,
                          std::uint64_t seed, const EpisodeConfig& cfg) {
  const std::uint64_t instance_seed = mix_seed(seed, 0);
  const std::uint64_t planner_seed = mix_seed(seed, 1);
  if (params.domain == DomainId::kGrid) {
    GridState s0 = gen_grid(params.size, instance_seed);
    return run_grid_episode(s0, std::max(0, grid_horizon(params.size)), planner, planner_seed, cfg);
  }
  RelState s0;
  int containers = params.containers > 0 ? params.containers : default_containers(params.domain);
  switch (params.domain) {
    case DomainId::kBlocksWorld: s0 = gen_blocks_world(params.size, instance_seed); break;
    case DomainId::kDrawers: s0 = gen_drawers(containers, params.size, instance_seed); break;
    case DomainId::kBins: s0 = gen_bins(containers, params.size, instance_seed); break;
    case DomainId::kGrid: break;
  }
  RelationalMdp mdp(builtin_domain(to_string(params.domain)), s0);
  return run_relational_episode(mdp, relational_horizon(s0), planner, planner_seed, cfg);
}

}  // namespace introspect
