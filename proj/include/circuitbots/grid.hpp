// Geometry of the infinite regular triangular grid: axial coordinates,
// the six edge directions, rotations, chirality-dependent local labeling
// and the closed-form grid distance.
#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>

namespace circuitbots {

struct GridCoord {
  int q = 0;
  int r = 0;

  friend bool operator==(const GridCoord&, const GridCoord&) = default;
  friend auto operator<=>(const GridCoord&, const GridCoord&) = default;
  GridCoord operator+(GridCoord o) const { return {q + o.q, r + o.r}; }
  GridCoord operator-(GridCoord o) const { return {q - o.q, r - o.r}; }
};

// Direction indices run counterclockwise. Opposite pairs differ by 3.
inline constexpr std::array<GridCoord, 6> kDirDelta = {
    GridCoord{1, 0},  GridCoord{0, 1},  GridCoord{-1, 1},
    GridCoord{-1, 0}, GridCoord{0, -1}, GridCoord{1, -1}};

inline constexpr int mod6(int x) { return ((x % 6) + 6) % 6; }

inline GridCoord dir_delta(int d) { return kDirDelta[mod6(d)]; }
inline GridCoord neighbor(GridCoord c, int d) { return c + dir_delta(d); }
inline int opposite(int d) { return mod6(d + 3); }
inline int axis_of(int d) { return mod6(d) % 3; }

// Clockwise = decreasing counterclockwise index.
inline int rotate_cw(int d, int steps) { return mod6(d - steps); }
inline int rotate_ccw(int d, int steps) { return mod6(d + steps); }

// Rotate an offset vector counterclockwise by 60-degree steps.
GridCoord rotate_coord_ccw(GridCoord c, int steps);
inline GridCoord rotate_coord_cw(GridCoord c, int steps) {
  return rotate_coord_ccw(c, mod6(-steps));
}

// Shortest path length between two nodes of the grid graph.
inline int hex_distance(GridCoord a, GridCoord b) {
  int dq = a.q - b.q;
  int dr = a.r - b.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

enum class Chirality : uint8_t { CCW, CW };

// An amoebot's frame: chirality plus the rotation of its local direction 0
// relative to the global direction 0.
struct Orientation {
  Chirality chirality = Chirality::CCW;
  int offset = 0;  // 0..5

  friend bool operator==(const Orientation&, const Orientation&) = default;

  int to_global(int local) const {
    return chirality == Chirality::CCW ? mod6(offset + local)
                                       : mod6(offset - local);
  }
  int to_local(int global) const {
    return chirality == Chirality::CCW ? mod6(global - offset)
                                       : mod6(offset - global);
  }
  // Rotation as the amoebot perceives "clockwise" in its own handedness.
  Orientation rotated_cw(int steps) const {
    Orientation o = *this;
    o.offset = chirality == Chirality::CCW ? mod6(offset - steps)
                                           : mod6(offset + steps);
    return o;
  }
  // Flip pivots around local direction 0.
  Orientation flipped() const {
    Orientation o = *this;
    o.chirality = chirality == Chirality::CCW ? Chirality::CW : Chirality::CCW;
    return o;
  }
};

struct GridCoordHash {
  size_t operator()(const GridCoord& c) const {
    uint64_t x = (uint64_t)(uint32_t)c.q << 32 | (uint32_t)c.r;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return (size_t)x;
  }
};

}  // namespace circuitbots
