#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "introspect/grid.h"
#include "introspect/mutation.h"
#include "introspect/relational_mdp.h"

namespace introspect {

// Remaining constraint count: literals still to add, literals still to
// remove, plus one for a pending required action. 0 for IMMUTABLY_VALID.
std::size_t literal_count_heuristic(const RelState& s, const Mutation& m);

struct InnerResult {
  bool found = false;  // false: no satisfying transition within budget
  double reward = 0;
  std::vector<GroundAction> actions;
  RelState state;
  Termination status = Termination::kContinue;
};

// Greedy best-first search from `s` for a transition (s1, a, s2) on which the
// mutation holds: its literals are checked on s1 or s2 according to the
// reward list's eval_over flag and a must equal the required action. The
// maximal-reward condition, when given, must also hold on that transition.
// At most `max_depth` steps; every successor call is charged to `budget`.
InnerResult inner_goal_search(const RelationalMdp& mdp, const RelState& s, int max_depth,
                              const Mutation& m, const Formula* condition, Budget& budget);

struct IntrospectorOptions {
  SearchLimits limits;
  std::size_t mutation_cap = kDefaultMutationCap;
  // When set, receives one line per outer-search event.
  std::ostream* trace = nullptr;
};

struct IntrospectorStats {
  SearchStats<GroundAction> search;
  std::size_t outer_pops = 0;
  std::size_t mutations_tried = 0;
  std::size_t inner_failures = 0;     // no satisfying transition found
  std::size_t failure_dropped = 0;    // inner trajectory ended in FAILURE
};

// Outer greedy search through milestone space over candidates
// (score, moves remaining, actions, state), expanded by one inner search per
// mutation of the maximal-reward condition.
IntrospectorStats introspector_plan(const RelationalMdp& mdp, int horizon,
                                    const IntrospectorOptions& options = {});

// Grid instance: informed search toward the origin with the Manhattan
// distance, then leave/return moves to fill the horizon.
SearchStats<Dir> grid_introspector_plan(const GridMdp& mdp, int horizon,
                                        const SearchLimits& limits = {});

}  // namespace introspect
