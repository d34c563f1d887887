#include "circuitbots/grid.hpp"

namespace circuitbots {

GridCoord rotate_coord_ccw(GridCoord c, int steps) {
  steps = mod6(steps);
  for (int i = 0; i < steps; ++i) {
    c = GridCoord{-c.r, c.q + c.r};
  }
  return c;
}

}  // namespace circuitbots
