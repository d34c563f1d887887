// Centralized shape model: shapes as sets of unit triangle faces,
// lattice transformations, representations, minimality, and the reference
// triangulation replay used both as an oracle and as the source of the
// distributed triangulation's iteration bound.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "circuitbots/grid.hpp"
#include "circuitbots/engine.hpp"

namespace circuitbots {

struct SearchBudgetExceeded : SimError {
  using SimError::SimError;
};
struct ShapeFormatError : SimError {
  using SimError::SimError;
};
struct NoBoundaryError : SimError {
  using SimError::SimError;
};

// A unit face: UP(c) covers {c, c+D0, c+D1}, DOWN(c) covers {c, c+D0, c+D5}.
struct Face {
  GridCoord corner;
  bool up = true;
  friend auto operator<=>(const Face&, const Face&) = default;
};

std::array<GridCoord, 3> face_vertices(const Face& f);
std::array<Face, 3> face_dual_neighbors(const Face& f);
// the unit face filling wedge i at node x (between directions i and i+1)
Face wedge_face(GridCoord x, int i);

struct Shape {
  std::vector<Face> faces;  // kept sorted and unique

  static Shape of(std::vector<Face> faces);
  int size() const { return (int)faces.size(); }
  bool connected() const;
  bool contains(const Face& f) const;
};

struct Transformation {
  GridCoord translation{0, 0};
  int rotation = 0;  // 0..5 counterclockwise
  int scale = 1;     // >= 1

  GridCoord apply(GridCoord v) const {
    GridCoord r = rotate_coord_ccw(v, rotation);
    return {translation.q + scale * r.q, translation.r + scale * r.r};
  }
};

// All lattice nodes on a vertex, edge, or interior of the transformed shape.
std::vector<GridCoord> representation(const Shape& shape,
                                      const Transformation& t);

// True iff no face set with fewer faces shares a node-set representation
// with this shape. Bounded search; throws SearchBudgetExceeded when the
// instance is too large for exhaustive checking.
bool is_minimal(const Shape& shape, int max_left_scale = 2);

// ---- structure-level boundary analysis (shared with the distributed
// protocols, which embody the same local rules) ----

enum class NodeClass : uint8_t {
  BOUNDARY_CORNER,
  BOUNDARY_EDGE,
  INTERIOR,
  UNCLASSIFIABLE,
};

class NodeSet {
 public:
  explicit NodeSet(const std::vector<GridCoord>& coords);
  bool occupied(GridCoord c) const { return set_.count(c) != 0; }
  const std::vector<GridCoord>& coords() const { return coords_; }
  // whether a unit face belongs to the filled region (2-neighborhood rule,
  // exact on scale >= 4 representations)
  bool face_filled(const Face& f) const;
  // mask of filled wedges around an occupied node
  uint8_t wedge_mask(GridCoord x) const;
  NodeClass classify(GridCoord x) const;
  // 0 = outside (no filled incident face), 1 = boundary, 2 = interior
  int bond_class(GridCoord x, int dir) const;

 private:
  std::vector<GridCoord> coords_;
  std::set<GridCoord> set_;
};

NodeClass classify_wedge_mask(uint8_t mask);

struct UnitEdge {
  GridCoord a, b;  // normalized a < b
  friend auto operator<=>(const UnitEdge&, const UnitEdge&) = default;
};
inline UnitEdge make_edge(GridCoord a, GridCoord b) {
  if (b < a) std::swap(a, b);
  return {a, b};
}

struct TriangulationCell {
  std::vector<Face> units;
  bool is_triangle = false;
  GridCoord anchor;  // for triangles: left corner of the bounding face
  bool up = true;
  int size = 0;  // side length in lattice edges
};

struct Triangulation {
  std::vector<GridCoord> corners;
  std::set<UnitEdge> edges;  // unit bonds of the triangulation
  int iterations = 0;        // passes of the corner-growing loop
  std::vector<TriangulationCell> cells;
};

// Centralized replay of the corner-growing triangulation over an occupied
// node set. Requires at least one filled face. The first form derives the
// boundary from the 2-neighborhood rules; the second takes it as given
// (the enclosed region is flood-filled from the boundary edges).
Triangulation reference_triangulation(const std::vector<GridCoord>& coords);
Triangulation reference_triangulation(const std::vector<GridCoord>& coords,
                                      const std::set<UnitEdge>& boundary);

// Iteration count of the replay on the scale-4 representation; by the
// representation-independence of the circuit-based algorithm this bounds
// every representation of the shape.
int triangulation_iteration_bound(const Shape& shape);

// ---- shape file format: one face per line "q r U|D", '#' comments ----
Shape parse_shape(const std::string& text);
std::string format_shape(const Shape& shape);
Shape load_shape_file(const std::string& path);

// JSON dump (corners, edges, cells) for the triangulation.
std::string triangulation_to_json(const Triangulation& t);

}  // namespace circuitbots
