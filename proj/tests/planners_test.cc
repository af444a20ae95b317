#include <random>

#include "doctest.h"
#include "introspect/domain_io.h"
#include "introspect/grid.h"
#include "introspect/oracle.h"
#include "introspect/planners.h"
#include "introspect/relational_mdp.h"

using namespace introspect;

namespace {

RelationalMdp fixture_mdp(const char* file) {
  Problem p = parse_problem(read_file(std::string(INTROSPECT_DATA_DIR "/fixtures/") + file));
  return RelationalMdp(builtin_domain(p.domain), p.state);
}

std::vector<GridState> sphere(std::int64_t d) {
  std::vector<GridState> out;
  for (std::int64_t x = -d; x <= d; ++x) {
    std::int64_t r = d - (x < 0 ? -x : x);
    out.push_back({x, r});
    if (r != 0) out.push_back({x, -r});
  }
  return out;
}

template <class A>
void check_replays(const auto& mdp, const SearchStats<A>& r) {
  auto p = replay(mdp, r.plan.actions);
  CHECK(p.ret == doctest::Approx(r.plan.ret));
  CHECK(p.status == r.plan.status);
}

}  // namespace

TEST_CASE("grid transitions") {
  GridMdp grid(GridState{1, 0});
  auto succ = grid.successors(grid.initial());
  REQUIRE(succ.size() == 4);
  CHECK(succ[0].action == Dir::kUp);
  CHECK(succ[0].next == GridState{1, 1});
  CHECK(succ[2].action == Dir::kLeft);
  CHECK(succ[2].next == GridState{0, 0});
  CHECK(succ[2].reward == 1);
  CHECK(succ[0].reward == -1);
  for (const auto& t : succ) CHECK(t.status == Termination::kContinue);
  CHECK(grid_horizon(5) == 8);
  CHECK(grid_optimal_return(5, 8) == 2 * (1 + 3 / 2) - 8);
  CHECK(grid_optimal_return(0, 6) == 0);
  CHECK(to_string(Dir::kRight) == "RIGHT");
}

TEST_CASE("greedy matches the exhaustive optimum on small grids") {
  for (std::int64_t d = 2; d <= 8; ++d) {
    int h = grid_horizon(d);
    for (GridState s0 : sphere(d)) {
      GridMdp grid(s0);
      auto r = greedy_exhaustive(grid, h);
      CAPTURE(d);
      CHECK(static_cast<int>(r.plan.actions.size()) == h);
      CHECK(r.plan.ret == doctest::Approx(extreme_return(grid, h, true)));
      check_replays(grid, r);
    }
  }
}

TEST_CASE("greedy matches the exhaustive optimum on relational fixtures") {
  auto bins = fixture_mdp("bins_2x2.prob");
  auto blocks = fixture_mdp("blocks_towers.prob");
  for (int h = 1; h <= 8; ++h) {
    CAPTURE(h);
    auto r = greedy_exhaustive(bins, h);
    CHECK(r.plan.ret == doctest::Approx(extreme_return(bins, h, true)));
    check_replays(bins, r);
    auto b = greedy_exhaustive(blocks, h);
    CHECK(b.plan.ret == doctest::Approx(extreme_return(blocks, h, true)));
    CHECK((h >= 2) == (b.plan.status == Termination::kSuccess));
  }
}

TEST_CASE("beam width 2d^2 reaches the optimum; width d falls short somewhere") {
  bool narrow_failed = false;
  for (std::int64_t d = 2; d <= 20; ++d) {
    int h = grid_horizon(d);
    double opt = grid_optimal_return(d, h);
    for (GridState s0 : {GridState{d, 0}, GridState{d / 2, d - d / 2}, GridState{-1, 1 - d}}) {
      GridMdp grid(s0);
      auto wide = beam_k(grid, h, static_cast<int>(2 * d * d));
      CAPTURE(d);
      CHECK(static_cast<int>(wide.plan.actions.size()) == h);
      CHECK(wide.plan.ret == doctest::Approx(opt));
      check_replays(grid, wide);
      auto narrow = beam_k(grid, h, static_cast<int>(d));
      check_replays(grid, narrow);
      CHECK(narrow.plan.ret <= opt);
      narrow_failed |= narrow.plan.ret < opt;
    }
  }
  CHECK(narrow_failed);
}

TEST_CASE("random-K: more rollouts never hurt for a fixed seed") {
  GridMdp grid(GridState{3, 2});
  int h = grid_horizon(5);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto one = random_k(grid, h, 1, seed);
    auto many = random_k(grid, h, 32, seed);
    CHECK(static_cast<int>(one.plan.actions.size()) == h);
    CHECK(many.plan.ret >= one.plan.ret);
    check_replays(grid, many);
  }
  auto a = random_k(grid, h, 8, 42);
  auto b = random_k(grid, h, 8, 42);
  CHECK(a.plan.actions == b.plan.actions);
}

TEST_CASE("MCTS variants are deterministic and produce full-length valid plans") {
  for (std::int64_t d = 2; d <= 6; ++d) {
    GridMdp grid(GridState{0, d});
    int h = grid_horizon(d);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto u1 = mcts_k(grid, h, 200, seed);
      auto u2 = mcts_k(grid, h, 200, seed);
      CHECK(u1.plan.actions == u2.plan.actions);
      CHECK(static_cast<int>(u1.plan.actions.size()) == h);
      check_replays(grid, u1);
      auto p1 = mcts_puct_k(grid, h, 200, seed);
      auto p2 = mcts_puct_k(grid, h, 200, seed);
      CHECK(p1.plan.actions == p2.plan.actions);
      CHECK(static_cast<int>(p1.plan.actions.size()) == h);
      check_replays(grid, p1);
    }
  }
  auto bins = fixture_mdp("bins_2x2.prob");
  auto r = mcts_k(bins, 16, 300, 7);
  check_replays(bins, r);
}

TEST_CASE("MCTS finds the optimum on a tiny grid with a generous budget") {
  GridMdp grid(GridState{1, 1});
  int h = grid_horizon(2);
  auto r = mcts_k(grid, h, 2000, 11);
  CHECK(r.plan.ret == doctest::Approx(grid_optimal_return(2, h)));
  auto p = mcts_puct_k(grid, h, 2000, 11);
  CHECK(p.plan.ret == doctest::Approx(grid_optimal_return(2, h)));
}

TEST_CASE("node caps are honored") {
  GridMdp grid(GridState{6, 6});
  int h = grid_horizon(12);
  SearchLimits cap{50, std::numeric_limits<double>::infinity()};
  auto g = greedy_exhaustive(grid, h, cap);
  CHECK(g.budget_exhausted);
  CHECK(g.nodes_expanded <= 50);
  check_replays(grid, g);
  auto b = beam_k(grid, h, 100, cap);
  CHECK(b.budget_exhausted);
  CHECK(b.nodes_expanded <= 50);
  check_replays(grid, b);
  auto r = random_k(grid, h, 100, 3, cap);
  CHECK(r.budget_exhausted);
  CHECK(r.nodes_expanded <= 50);
  auto m = mcts_k(grid, h, 1000, 3, 1.4142135623730951, cap);
  CHECK(m.budget_exhausted);
  // One iteration may overshoot by at most a rollout.
  CHECK(m.nodes_expanded <= 50 + static_cast<std::uint64_t>(h) + 1);
  check_replays(grid, m);
}

TEST_CASE("replay rejects invalid plans") {
  auto bins = fixture_mdp("bins_2x2.prob");
  GroundAction bogus(Symbol::intern("CloseBin"), {Symbol::intern("i1")});
  CHECK_THROWS_AS(replay(bins, {bogus}), PreconditionViolation);
  auto blocks = fixture_mdp("blocks_towers.prob");
  auto plan = greedy_exhaustive(blocks, 4).plan.actions;
  REQUIRE(plan.size() == 2);
  plan.push_back(plan.back());
  CHECK_THROWS_AS(replay(blocks, plan), PreconditionViolation);
}
