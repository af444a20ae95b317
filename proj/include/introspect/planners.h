#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "introspect/mdp.h"

namespace introspect {

// Best-first search over paths ordered by (return desc, remaining steps desc,
// insertion order), keeping the best return seen per (state, depth). Paths
// that cannot beat the best complete return even collecting the maximal
// reward on every remaining step are skipped. Returns on the first SUCCESS
// transition, otherwise the best complete path (horizon reached, terminal,
// or stuck).
template <Mdp M>
SearchStats<typename M::Action> greedy_exhaustive(const M& mdp, int horizon,
                                                  const SearchLimits& limits = {}) {
  using S = typename M::State;
  using A = typename M::Action;
  struct Key {
    S s;
    int depth;
    bool operator==(const Key& o) const { return depth == o.depth && s == o.s; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<S>{}(k.s) * 0x9E3779B97F4A7C15ull + static_cast<std::size_t>(k.depth);
    }
  };
  struct Node {
    std::int64_t parent;
    A action;
    const Key* key;
    double ret;
    int depth;
  };
  struct Entry {
    double ret;
    int remaining;
    std::uint64_t order;
    std::int64_t node;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.ret != b.ret) return a.ret < b.ret;
      if (a.remaining != b.remaining) return a.remaining < b.remaining;
      return a.order > b.order;
    }
  };
  struct Candidate {
    std::int64_t parent = -1;
    std::optional<A> last;
    double ret = 0;
    Termination status = Termination::kContinue;
  };

  Budget budget(limits);
  std::unordered_map<Key, double, KeyHash> best;
  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, Worse> frontier;
  std::uint64_t order = 0;

  auto path = [&](std::int64_t node, const std::optional<A>& last) {
    std::vector<A> out;
    if (last) out.push_back(*last);
    for (; node > 0; node = nodes[node].parent) out.push_back(nodes[node].action);
    std::reverse(out.begin(), out.end());
    return out;
  };
  auto finish = [&](const Candidate& c, bool exhausted) {
    Plan<A> p{path(c.parent, c.last), c.ret, c.status};
    return budget.finish(std::move(p), exhausted);
  };

  const double max_step = mdp.max_reward();
  auto root = best.emplace(Key{mdp.initial(), 0}, 0.0).first;
  nodes.push_back(Node{-1, A{}, &root->first, 0.0, 0});
  if (horizon <= 0) return finish(Candidate{0, std::nullopt, 0.0, Termination::kContinue}, false);
  frontier.push(Entry{0.0, horizon, order++, 0});

  std::optional<Candidate> complete;
  Candidate partial{0, std::nullopt, 0.0, Termination::kContinue};
  auto offer = [&](const Candidate& c) {
    if (!complete || better_plan(Plan<A>{{}, c.ret, c.status}, Plan<A>{{}, complete->ret, complete->status})) {
      complete = c;
    }
  };
  auto hopeless = [&](double ret, int depth) {
    return complete && ret + (horizon - depth) * max_step <= complete->ret;
  };

  bool exhausted = false;
  while (!frontier.empty()) {
    if (budget.exhausted()) {
      exhausted = true;
      break;
    }
    Entry e = frontier.top();
    frontier.pop();
    const Node n = nodes[e.node];
    if (best[*n.key] > n.ret) continue;  // superseded by a better path
    if (hopeless(n.ret, n.depth)) continue;
    if (n.ret > partial.ret || (n.ret == partial.ret && n.depth > nodes[partial.parent].depth)) {
      partial = Candidate{e.node, std::nullopt, n.ret, Termination::kContinue};
    }
    auto succ = mdp.successors(n.key->s);
    budget.count();
    if (succ.empty()) {
      offer(Candidate{e.node, std::nullopt, n.ret, Termination::kContinue});
      continue;
    }
    for (auto& t : succ) {
      double ret = n.ret + t.reward;
      int depth = n.depth + 1;
      if (t.status == Termination::kSuccess) {
        return finish(Candidate{e.node, t.action, ret, t.status}, false);
      }
      if (t.status == Termination::kFailure || depth == horizon) {
        offer(Candidate{e.node, t.action, ret, t.status});
        continue;
      }
      if (hopeless(ret, depth)) continue;
      Key key{std::move(t.next), depth};
      auto it = best.find(key);
      if (it != best.end()) {
        if (it->second >= ret) continue;
        it->second = ret;
      } else {
        it = best.emplace(std::move(key), ret).first;
      }
      nodes.push_back(Node{e.node, t.action, &it->first, ret, depth});
      frontier.push(Entry{ret, horizon - depth, order++, static_cast<std::int64_t>(nodes.size() - 1)});
    }
  }
  if (complete && (!exhausted || complete->ret >= partial.ret)) return finish(*complete, exhausted);
  return finish(partial, exhausted);
}

// Best of K uniformly random rollouts (SUCCESS first, then return).
template <Mdp M>
SearchStats<typename M::Action> random_k(const M& mdp, int horizon, int k, std::uint64_t seed,
                                         const SearchLimits& limits = {}) {
  using A = typename M::Action;
  Budget budget(limits);
  std::mt19937_64 rng(seed);
  std::optional<Plan<A>> best;
  bool exhausted = false;
  for (int i = 0; i < k && !exhausted; ++i) {
    Plan<A> p;
    auto s = mdp.initial();
    for (int step = 0; step < horizon; ++step) {
      if (budget.exhausted()) {
        exhausted = true;
        break;
      }
      auto succ = mdp.successors(s);
      budget.count();
      if (succ.empty()) break;
      auto& t = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)];
      p.actions.push_back(t.action);
      p.ret += t.reward;
      p.status = t.status;
      s = std::move(t.next);
      if (t.status != Termination::kContinue) break;
    }
    if (!best || better_plan(p, *best)) best = std::move(p);
  }
  return budget.finish(best.value_or(Plan<A>{}), exhausted);
}

// Level-synchronous beam search of width K. Children are ranked by return
// (ties keep generation order), duplicate states within a level are merged,
// and the first SUCCESS child returns immediately.
template <Mdp M>
SearchStats<typename M::Action> beam_k(const M& mdp, int horizon, int k,
                                       const SearchLimits& limits = {}) {
  using S = typename M::State;
  using A = typename M::Action;
  struct Node {
    std::int64_t parent;
    A action;
    double ret;
  };
  struct Child {
    double ret;
    std::int64_t parent;
    Transition<S, A> t;
  };
  Budget budget(limits);
  std::vector<Node> nodes{Node{-1, A{}, 0.0}};
  auto path = [&](std::int64_t node) {
    std::vector<A> out;
    for (; node > 0; node = nodes[node].parent) out.push_back(nodes[node].action);
    std::reverse(out.begin(), out.end());
    return out;
  };
  auto add = [&](std::int64_t parent, const A& a, double ret) {
    nodes.push_back(Node{parent, a, ret});
    return static_cast<std::int64_t>(nodes.size() - 1);
  };

  std::optional<Plan<A>> best;
  auto offer = [&](Plan<A> p) {
    if (!best || better_plan(p, *best)) best = std::move(p);
  };

  std::vector<std::pair<std::int64_t, S>> beam{{0, mdp.initial()}};
  if (horizon <= 0) return budget.finish(Plan<A>{}, false);
  bool exhausted = false;
  for (int depth = 0; depth < horizon && !beam.empty(); ++depth) {
    std::vector<Child> children;
    for (auto& [node, s] : beam) {
      if (budget.exhausted()) {
        exhausted = true;
        break;
      }
      auto succ = mdp.successors(s);
      budget.count();
      if (succ.empty()) offer(Plan<A>{path(node), nodes[node].ret, Termination::kContinue});
      for (auto& t : succ) children.push_back(Child{nodes[node].ret + t.reward, node, std::move(t)});
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.ret > b.ret; });
    for (const Child& c : children) {
      if (c.t.status == Termination::kSuccess) {
        auto p = path(c.parent);
        p.push_back(c.t.action);
        return budget.finish(Plan<A>{std::move(p), c.ret, c.t.status}, false);
      }
    }
    std::vector<std::pair<std::int64_t, S>> next;
    std::unordered_set<S> seen;
    for (Child& c : children) {
      if (!seen.insert(c.t.next).second) continue;
      bool complete = c.t.status == Termination::kFailure || depth + 1 == horizon;
      if (complete) {
        auto p = path(c.parent);
        p.push_back(c.t.action);
        offer(Plan<A>{std::move(p), c.ret, c.t.status});
        continue;
      }
      if (static_cast<int>(next.size()) < k) {
        next.emplace_back(add(c.parent, c.t.action, c.ret), std::move(c.t.next));
      }
    }
    if (exhausted) {
      for (auto& [node, s] : next) offer(Plan<A>{path(node), nodes[node].ret, Termination::kContinue});
      break;
    }
    beam = std::move(next);
  }
  return budget.finish(best.value_or(Plan<A>{}), exhausted);
}

struct MctsConfig {
  enum class Rule { kUcb1, kPuct };
  Rule rule = Rule::kUcb1;
  double c_ucb = 1.4142135623730951;
  double c_puct = 1.25;
};

// K iterations of select / expand / rollout / backup from the root. One child
// is expanded per iteration and a uniform rollout runs from it to the
// horizon; the backed-up value is the return of the whole simulated path,
// min-max normalized over values seen so far. The emitted plan follows the
// most visited children and then the rollout stored at the last tree node.
template <Mdp M>
SearchStats<typename M::Action> mcts(const M& mdp, int horizon, int k, std::uint64_t seed,
                                     const MctsConfig& cfg = {}, const SearchLimits& limits = {}) {
  using S = typename M::State;
  using A = typename M::Action;
  struct Node {
    S state;
    std::optional<A> action;
    double reward = 0;
    Termination status = Termination::kContinue;
    int depth = 0;
    bool expanded = false;
    std::vector<Transition<S, A>> untried;
    std::size_t n_actions = 0;
    std::vector<std::size_t> children;
    double visits = 0;
    double total = 0;
    std::vector<A> rollout;
  };

  Budget budget(limits);
  std::mt19937_64 rng(seed);
  std::vector<Node> tree;
  tree.emplace_back();
  tree.back().state = mdp.initial();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto q = [&](const Node& n) {
    if (n.visits == 0) return 0.0;
    double mean = n.total / n.visits;
    return hi > lo ? (mean - lo) / (hi - lo) : 0.5;
  };
  auto terminal = [&](const Node& n) {
    return n.status != Termination::kContinue || n.depth >= horizon;
  };

  bool exhausted = false;
  for (int iter = 0; iter < k; ++iter) {
    if (budget.exhausted()) {
      exhausted = true;
      break;
    }
    std::vector<std::size_t> path{0};
    double value = 0;
    std::size_t cur = 0;
    while (!terminal(tree[cur])) {
      if (!tree[cur].expanded) {
        tree[cur].untried = mdp.successors(tree[cur].state);
        tree[cur].n_actions = tree[cur].untried.size();
        tree[cur].expanded = true;
        budget.count();
      }
      Node& n = tree[cur];
      if (n.n_actions == 0) break;
      const double prior = 1.0 / static_cast<double>(n.n_actions);
      bool take_untried = !n.untried.empty();
      std::size_t pick_child = 0;
      if (!n.children.empty()) {
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c : n.children) {
          const Node& ch = tree[c];
          double score = cfg.rule == MctsConfig::Rule::kUcb1
                             ? q(ch) + cfg.c_ucb * std::sqrt(std::log(n.visits) / ch.visits)
                             : q(ch) + cfg.c_puct * prior * std::sqrt(n.visits) / (1.0 + ch.visits);
          if (score > best_score) {
            best_score = score;
            pick_child = c;
          }
        }
        if (cfg.rule == MctsConfig::Rule::kPuct && take_untried) {
          // An untried action scores as a child with no visits and Q = 0.
          take_untried = cfg.c_puct * prior * std::sqrt(n.visits) >= best_score;
        }
      }
      if (take_untried) {
        std::size_t i = cfg.rule == MctsConfig::Rule::kUcb1
                            ? std::uniform_int_distribution<std::size_t>(0, n.untried.size() - 1)(rng)
                            : 0;
        auto t = std::move(n.untried[i]);
        n.untried.erase(n.untried.begin() + static_cast<std::ptrdiff_t>(i));
        Node child;
        child.state = std::move(t.next);
        child.action = t.action;
        child.reward = t.reward;
        child.status = t.status;
        child.depth = n.depth + 1;
        tree.push_back(std::move(child));
        std::size_t id = tree.size() - 1;
        tree[cur].children.push_back(id);
        value += tree[id].reward;
        path.push_back(id);
        // Rollout from the new leaf.
        Node& leaf = tree[id];
        if (!terminal(leaf)) {
          S s = leaf.state;
          for (int d = leaf.depth; d < horizon; ++d) {
            auto succ = mdp.successors(s);
            budget.count();
            if (succ.empty()) break;
            auto& rt = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)];
            leaf.rollout.push_back(rt.action);
            value += rt.reward;
            s = std::move(rt.next);
            if (rt.status != Termination::kContinue) break;
          }
        }
        break;
      }
      cur = pick_child;
      value += tree[cur].reward;
      path.push_back(cur);
    }
    lo = std::min(lo, value);
    hi = std::max(hi, value);
    for (std::size_t id : path) {
      tree[id].visits += 1;
      tree[id].total += value;
    }
  }

  std::vector<A> actions;
  std::size_t cur = 0;
  while (!tree[cur].children.empty()) {
    std::size_t best = tree[cur].children.front();
    for (std::size_t c : tree[cur].children) {
      const Node& a = tree[c];
      const Node& b = tree[best];
      if (a.visits > b.visits || (a.visits == b.visits && a.total / a.visits > b.total / b.visits)) {
        best = c;
      }
    }
    cur = best;
    actions.push_back(*tree[cur].action);
  }
  actions.insert(actions.end(), tree[cur].rollout.begin(), tree[cur].rollout.end());
  return budget.finish(replay(mdp, actions), exhausted);
}

template <Mdp M>
SearchStats<typename M::Action> mcts_k(const M& mdp, int horizon, int k, std::uint64_t seed,
                                       double c = 1.4142135623730951,
                                       const SearchLimits& limits = {}) {
  MctsConfig cfg;
  cfg.c_ucb = c;
  return mcts(mdp, horizon, k, seed, cfg, limits);
}

template <Mdp M>
SearchStats<typename M::Action> mcts_puct_k(const M& mdp, int horizon, int k, std::uint64_t seed,
                                            double c_puct = 1.25, const SearchLimits& limits = {}) {
  MctsConfig cfg;
  cfg.rule = MctsConfig::Rule::kPuct;
  cfg.c_puct = c_puct;
  return mcts(mdp, horizon, k, seed, cfg, limits);
}

}  // namespace introspect
