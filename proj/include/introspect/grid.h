#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "introspect/mdp.h"

namespace introspect {

struct GridState {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const GridState&, const GridState&) = default;
  friend auto operator<=>(const GridState&, const GridState&) = default;
  std::string str() const { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }
};

enum class Dir : std::uint8_t { kUp, kDown, kLeft, kRight };
std::string to_string(Dir d);

inline std::int64_t manhattan(const GridState& s) {
  return (s.x < 0 ? -s.x : s.x) + (s.y < 0 ? -s.y : s.y);
}

// Infinite empty grid: moves are unit steps, +1 for entering the origin and
// -1 for every other step. There is no termination signal; episodes run for
// a fixed horizon.
class GridMdp {
 public:
  using State = GridState;
  using Action = Dir;
  using Step = Transition<GridState, Dir>;

  explicit GridMdp(GridState s0) : s0_(s0) {}

  const GridState& initial() const { return s0_; }
  std::vector<Step> successors(const GridState& s) const;
  std::optional<Step> step(const GridState& s, Dir a) const;
  double max_reward() const { return 1; }

  static GridState move(GridState s, Dir a);

 private:
  GridState s0_;
};

// Episode length for start distance d.
inline int grid_horizon(std::int64_t d) { return static_cast<int>(2 * (d - 1)); }
// Best and worst returns over plans of exactly H steps from distance d.
double grid_optimal_return(std::int64_t d, int horizon);
inline double grid_worst_return(int horizon) { return -horizon; }

}  // namespace introspect

template <>
struct std::hash<introspect::GridState> {
  std::size_t operator()(const introspect::GridState& s) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(s.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(s.y) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    return h;
  }
};
