#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "introspect/mdp.h"

namespace introspect {

template <class S, class A>
struct ReachabilityGraph {
  struct Edge {
    std::size_t from;  // state index (0-based; state ids are index + 1)
    std::size_t to;
    A action;
    double reward;
    Termination status;
  };
  std::vector<S> states;  // breadth-first discovery order, root first
  std::vector<Edge> edges;
  std::vector<bool> expanded;
  // Indices into edges whose reward equals the maximal reward.
  std::vector<std::size_t> milestone_edges;
  // States from which no SUCCESS transition can be reached.
  std::vector<std::size_t> dead_ends;
  std::optional<Plan<A>> optimal_success_plan;
};

// Breadth-first enumeration of every state reachable from the initial state.
// States entered through a terminal transition are recorded but not expanded.
// `max_depth` bounds the search for infinite spaces. Throws OracleOverflow when
// more than `state_cap` states are discovered.
template <Mdp M>
ReachabilityGraph<typename M::State, typename M::Action> bfs_oracle(
    const M& mdp, std::size_t state_cap,
    int max_depth = std::numeric_limits<int>::max()) {
  using S = typename M::State;
  using A = typename M::Action;
  ReachabilityGraph<S, A> g;
  std::unordered_map<S, std::size_t> index;
  std::vector<int> depth;
  std::vector<bool> queued;
  std::vector<std::int64_t> via_edge;  // CONTINUE edge that queued each state
  std::deque<std::size_t> queue;

  auto discover = [&](const S& s, int d) {
    auto [it, fresh] = index.emplace(s, g.states.size());
    if (fresh) {
      if (g.states.size() >= state_cap) {
        throw OracleOverflow("reachable set exceeds " + std::to_string(state_cap) + " states");
      }
      g.states.push_back(s);
      depth.push_back(d);
      queued.push_back(false);
      via_edge.push_back(-1);
      g.expanded.push_back(false);
    }
    return it->second;
  };

  discover(mdp.initial(), 0);
  queued[0] = true;
  queue.push_back(0);
  std::optional<std::size_t> success_edge;
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    if (depth[i] >= max_depth) continue;
    g.expanded[i] = true;
    S s = g.states[i];
    for (auto& t : mdp.successors(s)) {
      std::size_t e = g.edges.size();
      std::size_t j = discover(t.next, depth[i] + 1);
      g.edges.push_back({i, j, t.action, t.reward, t.status});
      if (t.reward == mdp.max_reward()) g.milestone_edges.push_back(e);
      if (t.status == Termination::kSuccess && !success_edge) success_edge = e;
      if (t.status == Termination::kContinue && !queued[j]) {
        queued[j] = true;
        via_edge[j] = static_cast<std::int64_t>(e);
        queue.push_back(j);
      }
    }
  }

  // Backward propagation: a state is live if it has a SUCCESS edge or a
  // CONTINUE edge to a live state.
  std::vector<bool> live(g.states.size(), false);
  std::vector<std::vector<std::size_t>> incoming(g.states.size());
  std::deque<std::size_t> work;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (edge.status == Termination::kContinue) incoming[edge.to].push_back(edge.from);
    if (edge.status == Termination::kSuccess) {
      // The target of a SUCCESS edge is where the episode ends well.
      for (std::size_t x : {edge.from, edge.to}) {
        if (!live[x]) {
          live[x] = true;
          work.push_back(x);
        }
      }
    }
  }
  while (!work.empty()) {
    std::size_t x = work.front();
    work.pop_front();
    for (std::size_t p : incoming[x]) {
      if (!live[p]) {
        live[p] = true;
        work.push_back(p);
      }
    }
  }
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (!live[i]) g.dead_ends.push_back(i);
  }

  // The first SUCCESS edge found by BFS ends a shortest SUCCESS path: its
  // source was dequeued at minimal depth.
  if (success_edge) {
    std::vector<std::size_t> chain{*success_edge};
    std::size_t at = g.edges[*success_edge].from;
    while (at != 0) {
      std::size_t e = static_cast<std::size_t>(via_edge[at]);
      chain.push_back(e);
      at = g.edges[e].from;
    }
    std::reverse(chain.begin(), chain.end());
    std::vector<A> actions;
    for (std::size_t e : chain) actions.push_back(g.edges[e].action);
    g.optimal_success_plan = replay(mdp, actions);
  }
  return g;
}

// Best (or worst) return over action sequences of at most `horizon` steps
// that stop only at terminal transitions or dead ends, by memoized recursion
// over (state, steps left). Intended for small instances.
template <Mdp M>
double extreme_return(const M& mdp, int horizon, bool maximize) {
  using S = typename M::State;
  struct Key {
    S s;
    int left;
    bool operator==(const Key& o) const { return left == o.left && s == o.s; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<S>{}(k.s) * 31 + static_cast<std::size_t>(k.left);
    }
  };
  std::unordered_map<Key, double, KeyHash> memo;
  auto rec = [&](auto& self, const S& s, int left) -> double {
    if (left == 0) return 0;
    Key key{s, left};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto succ = mdp.successors(s);
    double out = 0;
    bool first = true;
    for (auto& t : succ) {
      double v = t.reward;
      if (t.status == Termination::kContinue) v += self(self, t.next, left - 1);
      if (first || (maximize ? v > out : v < out)) out = v;
      first = false;
    }
    memo.emplace(std::move(key), out);
    return out;
  };
  return rec(rec, mdp.initial(), horizon);
}

}  // namespace introspect
