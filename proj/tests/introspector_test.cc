#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "introspect/domain_io.h"
#include "introspect/introspector.h"
#include "introspect/oracle.h"

using namespace introspect;

namespace {

RelationalMdp fixture_mdp(const char* file) {
  Problem p = parse_problem(read_file(std::string(INTROSPECT_DATA_DIR "/fixtures/") + file));
  return RelationalMdp(builtin_domain(p.domain), p.state);
}

Symbol sym(const char* s) { return Symbol::intern(s); }

std::vector<std::string> names(const std::vector<GroundAction>& as) {
  std::vector<std::string> out;
  for (const auto& a : as) out.push_back(a.str());
  return out;
}

}  // namespace

TEST_CASE("literal count heuristic") {
  RelState s({sym("a"), sym("b")}, {Atom(sym("P"), {sym("a")})});
  CHECK(literal_count_heuristic(s, Mutation::valid()) == 0);
  Mutation m = Mutation::set_true(Atom(sym("P"), {sym("b")}));
  CHECK(literal_count_heuristic(s, m) == 1);
  m = Mutation::set_false(Atom(sym("P"), {sym("a")}));
  CHECK(literal_count_heuristic(s, m) == 1);
  m = Mutation::set_true(Atom(sym("P"), {sym("a")}));
  CHECK(literal_count_heuristic(s, m) == 0);
  m = Mutation::require(GroundAction(sym("Go"), {sym("a")}));
  CHECK(literal_count_heuristic(s, m) == 1);
}

TEST_CASE("inner search on an immutably valid mutation is a no-op") {
  auto mdp = fixture_mdp("blocks_towers.prob");
  Budget budget(SearchLimits{});
  InnerResult r = inner_goal_search(mdp, mdp.initial(), 5, Mutation::valid(), nullptr, budget);
  CHECK(r.found);
  CHECK(r.actions.empty());
  CHECK(r.state == mdp.initial());
  CHECK(budget.nodes() == 0);
}

TEST_CASE("inner search reaches a single-literal goal") {
  auto mdp = fixture_mdp("blocks_towers.prob");
  Budget budget(SearchLimits{});
  Mutation m = Mutation::set_true(Atom(sym("OnTable"), {sym("a")}));
  InnerResult r = inner_goal_search(mdp, mdp.initial(), 5, m, nullptr, budget);
  REQUIRE(r.found);
  CHECK(names(r.actions) == std::vector<std::string>{"Unstack(a,d)", "Place(a)"});
  CHECK(r.state.holds(Atom(sym("OnTable"), {sym("a")})));

  Budget tight(SearchLimits{});
  InnerResult shallow = inner_goal_search(mdp, mdp.initial(), 1, m, nullptr, tight);
  CHECK_FALSE(shallow.found);
}

TEST_CASE("blocks: one milestone clears the tower") {
  auto mdp = fixture_mdp("blocks_towers.prob");
  std::ostringstream trace;
  IntrospectorOptions opt;
  opt.trace = &trace;
  auto r = introspector_plan(mdp, 32, opt);
  CHECK(names(r.search.plan.actions) == std::vector<std::string>{"Unstack(a,d)", "Place(a)"});
  CHECK(r.search.plan.status == Termination::kSuccess);
  CHECK(r.search.plan.ret == doctest::Approx(1.0));
  CHECK(r.outer_pops == 1);
  CHECK(trace.str().find("+OnTable(a)") != std::string::npos);
}

TEST_CASE("already terminal start yields an empty plan") {
  auto mdp = fixture_mdp("blocks_towers_flat.prob");
  auto r = introspector_plan(mdp, 32);
  CHECK(r.search.plan.actions.empty());
  CHECK(r.search.plan.status == Termination::kSuccess);
}

TEST_CASE("bins 2x2: two milestones, optimal plan") {
  auto mdp = fixture_mdp("bins_2x2.prob");
  auto oracle = bfs_oracle(mdp, 1000);
  REQUIRE(oracle.optimal_success_plan);
  std::ostringstream trace;
  IntrospectorOptions opt;
  opt.trace = &trace;
  auto r = introspector_plan(mdp, 16, opt);
  CHECK(r.search.plan.status == Termination::kSuccess);
  CHECK(r.search.plan.ret == doctest::Approx(oracle.optimal_success_plan->ret));
  CHECK(r.search.plan.actions.size() == oracle.optimal_success_plan->actions.size());
  CHECK_FALSE(r.search.budget_exhausted);
  // Returned plan is executable.
  auto replayed = replay(mdp, r.search.plan.actions);
  CHECK(replayed.ret == r.search.plan.ret);

  // Bin 2 is emptied first; from the resulting milestone only one mutation
  // is left, and its inner search ends in the goal state.
  CHECK(names(r.search.plan.actions) ==
        std::vector<std::string>{"Pick(i2,d2)", "CloseBin(d2)", "Pick(i1,d1)", "CloseBin(d1)"});
  std::size_t mutation_lines = 0;
  for (std::size_t at = 0; (at = trace.str().find("mutation {", at)) != std::string::npos; ++at) ++mutation_lines;
  CHECK(mutation_lines == 3);
  auto state_id = [&](std::size_t steps) {
    RelState s = mdp.initial();
    for (std::size_t i = 0; i < steps; ++i) s = mdp.step(s, r.search.plan.actions[i])->next;
    auto it = std::find(oracle.states.begin(), oracle.states.end(), s);
    return static_cast<std::size_t>(it - oracle.states.begin()) + 1;
  };
  CHECK(state_id(2) == 12);
  CHECK(state_id(4) == 24);
}

TEST_CASE("introspector is deterministic and respects the node cap") {
  auto mdp = fixture_mdp("bins_2x2.prob");
  auto a = introspector_plan(mdp, 16);
  auto b = introspector_plan(mdp, 16);
  CHECK(names(a.search.plan.actions) == names(b.search.plan.actions));
  CHECK(a.search.nodes_expanded == b.search.nodes_expanded);

  IntrospectorOptions opt;
  opt.limits.node_cap = 2;
  auto capped = introspector_plan(mdp, 16, opt);
  CHECK(capped.search.budget_exhausted);
  CHECK(capped.search.nodes_expanded <= 3);
  CHECK_NOTHROW(replay(mdp, capped.search.plan.actions));
}

TEST_CASE("grid introspector reaches the optimal return with exactly H moves") {
  for (std::int64_t d = 0; d <= 30; ++d) {
    for (int h : {grid_horizon(d), grid_horizon(d) + 1, static_cast<int>(d), 7}) {
      if (h < 0) continue;
      for (GridState s0 : {GridState{d, 0}, GridState{0, -d}, GridState{-d / 2, d - d / 2}}) {
        GridMdp grid(s0);
        auto r = grid_introspector_plan(grid, h);
        CAPTURE(d);
        CAPTURE(h);
        CHECK(static_cast<int>(r.plan.actions.size()) == h);
        CHECK(r.plan.ret == doctest::Approx(grid_optimal_return(d, h)));
        // Informed search expands at most one node per step toward the goal.
        CHECK(r.nodes_expanded <= static_cast<std::uint64_t>(h >= d ? d : 0));
      }
    }
  }
}
