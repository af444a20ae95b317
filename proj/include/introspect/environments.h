#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "introspect/grid.h"
#include "introspect/planners.h"
#include "introspect/relational_mdp.h"

namespace introspect {

// splitmix64 finalizer; derives per-episode seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

enum class DomainId { kGrid, kBlocksWorld, kDrawers, kBins };
std::string to_string(DomainId d);
// Accepts grid, blocks_world, drawers, bins. Throws Error otherwise.
DomainId parse_domain_id(const std::string& s);

// Uniform over the 4d points with |x| + |y| = d (the origin when d = 0).
GridState gen_grid(std::int64_t d, std::uint64_t seed);

// n blocks in about sqrt(n) random stacks, hand empty. For n >= 2 a state
// with every block on the table is resampled.
RelState gen_blocks_world(int n, std::uint64_t seed);

// n drawers (all closed) and m items with uniformly drawn labels, each on the
// shelf or in a uniformly chosen drawer. Already-solved states are resampled.
RelState gen_drawers(int n, int m, std::uint64_t seed);

// n open bins and m items, each in a uniformly chosen bin.
RelState gen_bins(int n, int m, std::uint64_t seed);

// One cell of a sweep. `size` is d for the grid, the block count for
// blocks-world and the item count for drawers and bins; `containers` is the
// number of drawers or bins.
struct InstanceParams {
  DomainId domain = DomainId::kGrid;
  int size = 1;
  int containers = 0;
};
int default_containers(DomainId d);

struct PlannerSpec {
  enum class Kind { kGreedy, kRandom, kBeam, kMcts, kMctsU, kIntrospector };
  Kind kind = Kind::kGreedy;
  int k = 0;  // budget; unused by greedy and introspector
};
// greedy, random:K, beam:K, mcts:K, mcts-u:K, introspector.
PlannerSpec parse_planner(const std::string& s);
std::string to_string(const PlannerSpec& p);

struct EpisodeConfig {
  SearchLimits limits;
  MctsConfig mcts;
  // Relational episodes are normalized against the reachability oracle when
  // the reachable set fits under this cap; otherwise the score is left empty.
  bool normalize_relational = true;
  std::size_t oracle_state_cap = 20000;
};

struct EpisodeResult {
  double ret = 0;
  std::optional<double> normalized;
  std::size_t plan_length = 0;
  Termination status = Termination::kContinue;
  bool budget_exhausted = false;
  std::uint64_t nodes_expanded = 0;
  double wall_ms = 0;
  std::vector<std::string> plan;
};

// (ret - worst) / (optimal - worst) clamped to [0, 1]; 1 when the two
// endpoints coincide.
double normalized_score(double ret, double worst, double optimal);

// Relational episodes run for at most 8 steps per object.
int relational_horizon(const RelState& s);

// Plans once from the initial state, replays the plan and scores it.
// `seed` drives the planner's own randomness.
EpisodeResult run_grid_episode(const GridState& s0, int horizon, const PlannerSpec& planner,
                               std::uint64_t seed, const EpisodeConfig& cfg = {});
EpisodeResult run_relational_episode(const RelationalMdp& mdp, int horizon,
                                     const PlannerSpec& planner, std::uint64_t seed,
                                     const EpisodeConfig& cfg = {});

// Samples the instance from `seed` and runs one episode on it.
EpisodeResult run_episode(const InstanceParams& params, const PlannerSpec& planner,
                          std::uint64_t seed, const EpisodeConfig& cfg = {});

}  // namespace introspect
