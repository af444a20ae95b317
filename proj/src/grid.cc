#include "introspect/grid.h"

namespace introspect {

std::string to_string(Dir d) {
  switch (d) {
    case Dir::kUp:
      return "UP";
    case Dir::kDown:
      return "DOWN";
    case Dir::kLeft:
      return "LEFT";
    case Dir::kRight:
      return "RIGHT";
  }
  return "?";
}

GridState GridMdp::move(GridState s, Dir a) {
  switch (a) {
    case Dir::kUp:
      ++s.y;
      break;
    case Dir::kDown:
      --s.y;
      break;
    case Dir::kLeft:
      --s.x;
      break;
    case Dir::kRight:
      ++s.x;
      break;
  }
  return s;
}

std::optional<GridMdp::Step> GridMdp::step(const GridState& s, Dir a) const {
  GridState next = move(s, a);
  double r = (next.x == 0 && next.y == 0) ? 1.0 : -1.0;
  return Step{a, next, r, Termination::kContinue};
}

std::vector<GridMdp::Step> GridMdp::successors(const GridState& s) const {
  std::vector<Step> out;
  out.reserve(4);
  for (Dir a : {Dir::kUp, Dir::kDown, Dir::kLeft, Dir::kRight}) out.push_back(*step(s, a));
  return out;
}

double grid_optimal_return(std::int64_t d, int horizon) {
  // Reach the origin in d steps, then every two further steps can leave and
  // re-enter it for a net 0; the last odd step costs 1.
  if (horizon < d) return -horizon;
  std::int64_t arrivals = d == 0 ? horizon / 2 : 1 + (horizon - d) / 2;
  return static_cast<double>(2 * arrivals - horizon);
}

}  // namespace introspect
