#include "introspect/introspector.h"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "introspect/formula_io.h"

namespace introspect {

std::size_t literal_count_heuristic(const RelState& s, const Mutation& m) {
  if (m.immutably_valid) return 0;
  std::size_t h = m.required_action ? 1 : 0;
  for (const Atom& a : m.make_true) h += s.holds(a) ? 0 : 1;
  for (const Atom& a : m.make_false) h += s.holds(a) ? 1 : 0;
  return h;
}

InnerResult inner_goal_search(const RelationalMdp& mdp, const RelState& s, int max_depth,
                              const Mutation& m, const Formula* condition, Budget& budget) {
  InnerResult out;
  out.state = s;
  if (m.immutably_valid) {
    out.found = true;
    return out;
  }
  const bool prior = mdp.domain().reward().eval_over() == EvalOver::kPriorState;

  struct Node {
    std::int64_t parent;
    GroundAction action;
    const RelState* state;
    double reward;
    int depth;
  };
  struct Entry {
    std::size_t h;
    int depth;
    std::uint64_t order;
    std::int64_t node;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.h != b.h) return a.h > b.h;
      if (a.depth != b.depth) return a.depth > b.depth;
      return a.order > b.order;
    }
  };
  std::unordered_set<RelState> seen;
  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, Worse> frontier;
  std::uint64_t order = 0;

  auto root = seen.insert(s).first;
  nodes.push_back(Node{-1, GroundAction(), &*root, 0.0, 0});
  frontier.push(Entry{literal_count_heuristic(s, m), 0, order++, 0});

  while (!frontier.empty()) {
    if (budget.exhausted()) return out;
    Entry e = frontier.top();
    frontier.pop();
    const Node n = nodes[e.node];
    if (n.depth >= max_depth) continue;
    auto succ = mdp.successors(*n.state);
    budget.count();
    for (auto& t : succ) {
      const RelState& checked = prior ? *n.state : t.next;
      if (is_satisfied(m, checked, t.action) &&
          (condition == nullptr || evaluate(*condition, checked, t.action))) {
        out.found = true;
        out.reward = n.reward + t.reward;
        out.status = t.status;
        out.actions.push_back(t.action);
        for (std::int64_t i = e.node; i > 0; i = nodes[i].parent) out.actions.push_back(nodes[i].action);
        std::reverse(out.actions.begin(), out.actions.end());
        out.state = std::move(t.next);
        return out;
      }
      if (t.status != Termination::kContinue) continue;
      auto [it, fresh] = seen.insert(std::move(t.next));
      if (!fresh) continue;
      nodes.push_back(Node{e.node, t.action, &*it, n.reward + t.reward, n.depth + 1});
      frontier.push(Entry{literal_count_heuristic(*it, m), n.depth + 1, order++,
                          static_cast<std::int64_t>(nodes.size() - 1)});
    }
  }
  return out;
}

namespace {

struct Candidate {
  double score;
  int moves;
  std::vector<GroundAction> actions;
  RelState state;
};

// Lexicographic on (score, moves remaining, actions, state).
bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.moves != b.moves) return a.moves < b.moves;
  if (a.actions != b.actions) return a.actions < b.actions;
  return a.state < b.state;
}

std::string actions_str(const std::vector<GroundAction>& as) {
  std::string out = "[";
  for (std::size_t i = 0; i < as.size(); ++i) out += (i ? " " : "") + as[i].str();
  return out + "]";
}

}  // namespace

IntrospectorStats introspector_plan(const RelationalMdp& mdp, int horizon,
                                    const IntrospectorOptions& options) {
  IntrospectorStats stats;
  Budget budget(options.limits);
  const DomainDef& domain = mdp.domain();
  std::ostream* trace = options.trace;
  auto finish = [&](std::vector<GroundAction> actions, bool exhausted) {
    stats.search = budget.finish(replay(mdp, actions), exhausted);
    if (trace) {
      *trace << "plan " << actions_str(actions) << " return=" << stats.search.plan.ret
             << " status=" << to_string(stats.search.plan.status) << "\n";
    }
    return stats;
  };

  const RelState& s0 = mdp.initial();
  // A state can already be terminal; check it on a no-op transition.
  GroundAction noop(Symbol::intern(""), std::span<const Symbol>());
  Termination at_start = evaluate_termination(domain.termination(), s0, noop, s0);
  if (at_start != Termination::kContinue) {
    if (trace) *trace << "initial state is terminal: " << to_string(at_start) << "\n";
    stats.search = budget.finish(Plan<GroundAction>{{}, 0.0, at_start}, false);
    return stats;
  }

  const Formula condition = extract_maximal_reward_condition(domain.reward());
  const MutabilityIndex idx(domain);
  if (trace) *trace << "condition " << to_string(condition) << "\n";

  std::vector<Candidate> pool;
  auto worse = [&](std::size_t a, std::size_t b) { return candidate_less(pool[a], pool[b]); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> plans(worse);
  std::unordered_map<RelState, double> visited;

  pool.push_back(Candidate{0.0, horizon, {}, s0});
  plans.push(0);
  visited[s0] = 0.0;
  std::optional<std::size_t> best_popped;
  bool stopped = false;

  while (!plans.empty() && !stopped) {
    if (budget.exhausted()) {
      stopped = true;
      break;
    }
    std::size_t ci = plans.top();
    plans.pop();
    ++stats.outer_pops;
    if (!best_popped || candidate_less(pool[*best_popped], pool[ci])) best_popped = ci;
    const double score = pool[ci].score;
    const int moves = pool[ci].moves;
    const RelState state = pool[ci].state;
    if (trace) {
      *trace << "pop score=" << score << " moves=" << moves << " actions="
             << actions_str(pool[ci].actions) << " state=" << state.str() << "\n";
    }
    if (moves == 0) return finish(pool[ci].actions, false);

    MutationSet ms = mutate_true(state, condition, idx, options.mutation_cap);
    budget.count();
    for (const Mutation& m : ms) {
      ++stats.mutations_tried;
      InnerResult r = inner_goal_search(mdp, state, moves, m, &condition, budget);
      if (trace) {
        *trace << "  mutation {" << m.str() << "} -> ";
        if (r.found) {
          *trace << actions_str(r.actions) << " reward=" << r.reward
                 << " status=" << to_string(r.status) << "\n";
        } else {
          *trace << "not found\n";
        }
      }
      if (!r.found) {
        ++stats.inner_failures;
        if (budget.exhausted()) {
          stopped = true;
          break;
        }
        continue;
      }
      double new_score = score + r.reward;
      std::vector<GroundAction> new_actions = pool[ci].actions;
      new_actions.insert(new_actions.end(), r.actions.begin(), r.actions.end());
      if (r.status == Termination::kSuccess) return finish(std::move(new_actions), false);
      if (r.status == Termination::kFailure) {
        ++stats.failure_dropped;
        continue;
      }
      auto it = visited.find(r.state);
      if (it == visited.end() || it->second < new_score) {
        visited[r.state] = new_score;
        int left = moves - static_cast<int>(r.actions.size());
        pool.push_back(Candidate{new_score, left, std::move(new_actions), std::move(r.state)});
        plans.push(pool.size() - 1);
      }
    }
  }
  if (trace) *trace << (stopped ? "budget exhausted\n" : "queue exhausted\n");
  return finish(best_popped ? pool[*best_popped].actions : std::vector<GroundAction>{}, stopped);
}

SearchStats<Dir> grid_introspector_plan(const GridMdp& mdp, int horizon, const SearchLimits& limits) {
  Budget budget(limits);
  const GridState goal{0, 0};
  struct Node {
    std::int64_t parent;
    Dir action;
    GridState state;
    int g;
  };
  struct Entry {
    std::int64_t f;
    int g;
    std::uint64_t order;
    std::int64_t node;
  };
  // Lower f first; among equal f prefer deeper nodes, then insertion order.
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return a.order > b.order;
    }
  };
  std::vector<Node> nodes{Node{-1, Dir::kUp, mdp.initial(), 0}};
  std::priority_queue<Entry, std::vector<Entry>, Worse> open;
  std::unordered_map<GridState, int> best_g{{mdp.initial(), 0}};
  std::uint64_t order = 0;
  open.push(Entry{manhattan(mdp.initial()), 0, order++, 0});

  std::int64_t reached = mdp.initial() == goal ? 0 : -1;
  bool exhausted = false;
  // Out of reach within the horizon: every plan scores -H, skip the search.
  const bool reachable = manhattan(mdp.initial()) <= horizon;
  while (reachable && reached < 0 && !open.empty()) {
    if (budget.exhausted()) {
      exhausted = true;
      break;
    }
    Entry e = open.top();
    open.pop();
    const Node n = nodes[e.node];
    if (n.g >= horizon) continue;
    auto succ = mdp.successors(n.state);
    budget.count();
    for (auto& t : succ) {
      int g = n.g + 1;
      auto it = best_g.find(t.next);
      if (it != best_g.end() && it->second <= g) continue;
      best_g[t.next] = g;
      nodes.push_back(Node{e.node, t.action, t.next, g});
      auto id = static_cast<std::int64_t>(nodes.size() - 1);
      if (t.next == goal) {
        reached = id;
        break;
      }
      open.push(Entry{g + manhattan(t.next), g, order++, id});
    }
  }

  std::vector<Dir> actions;
  std::int64_t tail = reached >= 0 ? reached : 0;
  for (std::int64_t i = tail; i > 0; i = nodes[i].parent) actions.push_back(nodes[i].action);
  std::reverse(actions.begin(), actions.end());
  // Fill the horizon with leave/return pairs around the end point; when
  // the goal was not reached this still yields a valid plan.
  while (static_cast<int>(actions.size()) < horizon) {
    actions.push_back(Dir::kUp);
    if (static_cast<int>(actions.size()) < horizon) actions.push_back(Dir::kDown);
  }
  return budget.finish(replay(mdp, actions), exhausted);
}

}  // namespace introspect
