#pragma once

#include <chrono>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "introspect/errors.h"
#include "introspect/reward.h"

namespace introspect {

template <class S, class A>
struct Transition {
  A action;
  S next;
  double reward = 0;
  Termination status = Termination::kContinue;
};

// Deterministic MDP with a finite, order-stable action list per state.
template <class M>
concept Mdp = requires(const M& m, const typename M::State& s, const typename M::Action& a) {
  typename M::State;
  typename M::Action;
  { m.initial() } -> std::convertible_to<typename M::State>;
  {
    m.successors(s)
  } -> std::same_as<std::vector<Transition<typename M::State, typename M::Action>>>;
  {
    m.step(s, a)
  } -> std::same_as<std::optional<Transition<typename M::State, typename M::Action>>>;
  { m.max_reward() } -> std::convertible_to<double>;
};

template <class A>
struct Plan {
  std::vector<A> actions;
  double ret = 0;
  Termination status = Termination::kContinue;
};

template <class A>
struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  double wall_ms = 0;
  Plan<A> plan;
  // A node or time cap stopped the search early; plan is the best found.
  bool budget_exhausted = false;
};

struct SearchLimits {
  std::uint64_t node_cap = std::numeric_limits<std::uint64_t>::max();
  double time_cap_s = std::numeric_limits<double>::infinity();
};

// Tracks node and time caps for one planner invocation.
class Budget {
 public:
  explicit Budget(const SearchLimits& limits)
      : limits_(limits), start_(std::chrono::steady_clock::now()) {}

  void count(std::uint64_t n = 1) { nodes_ += n; }
  std::uint64_t nodes() const { return nodes_; }
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }
  // Clock reads are throttled; the node cap is exact.
  bool exhausted() {
    if (nodes_ >= limits_.node_cap) return true;
    if (++polls_ % 256 == 0 && limits_.time_cap_s != std::numeric_limits<double>::infinity()) {
      timed_out_ = elapsed_ms() > limits_.time_cap_s * 1000.0;
    }
    return timed_out_;
  }

  template <class A>
  SearchStats<A> finish(Plan<A> plan, bool exhausted) const {
    SearchStats<A> out;
    out.nodes_expanded = nodes_;
    out.wall_ms = elapsed_ms();
    out.plan = std::move(plan);
    out.budget_exhausted = exhausted;
    return out;
  }

 private:
  SearchLimits limits_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  std::uint64_t polls_ = 0;
  bool timed_out_ = false;
};

// Prefers SUCCESS, then higher return.
template <class A>
bool better_plan(const Plan<A>& a, const Plan<A>& b) {
  bool sa = a.status == Termination::kSuccess, sb = b.status == Termination::kSuccess;
  if (sa != sb) return sa;
  return a.ret > b.ret;
}

// Re-simulates `actions` from the initial state. Throws PreconditionViolation
// if an action is not available or follows a terminal transition.
template <Mdp M>
Plan<typename M::Action> replay(const M& mdp, const std::vector<typename M::Action>& actions) {
  Plan<typename M::Action> out;
  out.actions = actions;
  auto s = mdp.initial();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (out.status != Termination::kContinue) {
      throw PreconditionViolation("plan continues after a terminal transition at step " +
                                  std::to_string(i));
    }
    auto t = mdp.step(s, actions[i]);
    if (!t) {
      throw PreconditionViolation("plan step " + std::to_string(i) + " is not applicable");
    }
    out.ret += t->reward;
    out.status = t->status;
    s = std::move(t->next);
  }
  return out;
}

}  // namespace introspect
