#include "circuitbots/shapes.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace circuitbots {

std::array<GridCoord, 3> face_vertices(const Face& f) {
  GridCoord c = f.corner;
  if (f.up) return {c, neighbor(c, 0), neighbor(c, 1)};
  return {c, neighbor(c, 0), neighbor(c, 5)};
}

std::array<Face, 3> face_dual_neighbors(const Face& f) {
  GridCoord c = f.corner;
  if (f.up)
    return {Face{c, false}, Face{neighbor(c, 2), false},
            Face{neighbor(c, 1), false}};
  return {Face{c, true}, Face{neighbor(c, 5), true}, Face{neighbor(c, 4), true}};
}

Face wedge_face(GridCoord x, int i) {
  switch (mod6(i)) {
    case 0: return Face{x, true};
    case 1: return Face{neighbor(x, 2), false};
    case 2: return Face{neighbor(x, 3), true};
    case 3: return Face{neighbor(x, 3), false};
    case 4: return Face{neighbor(x, 4), true};
    default: return Face{x, false};
  }
}

Shape Shape::of(std::vector<Face> faces) {
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  return Shape{std::move(faces)};
}

bool Shape::contains(const Face& f) const {
  return std::binary_search(faces.begin(), faces.end(), f);
}

bool Shape::connected() const {
  if (faces.empty()) return false;
  std::set<Face> todo(faces.begin(), faces.end());
  std::queue<Face> q;
  q.push(faces[0]);
  todo.erase(faces[0]);
  while (!q.empty()) {
    Face f = q.front();
    q.pop();
    for (const Face& g : face_dual_neighbors(f)) {
      auto it = todo.find(g);
      if (it != todo.end()) {
        q.push(g);
        todo.erase(it);
      }
    }
  }
  return todo.empty();
}

namespace {

long cross(GridCoord u, GridCoord v) {
  return (long)u.q * v.r - (long)u.r * v.q;
}

// closed-triangle test in axial coordinates
bool point_in_triangle(GridCoord p, GridCoord a, GridCoord b, GridCoord c) {
  long d1 = cross(b - a, p - a);
  long d2 = cross(c - b, p - b);
  long d3 = cross(a - c, p - c);
  bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

}  // namespace

std::vector<GridCoord> representation(const Shape& shape,
                                      const Transformation& t) {
  std::set<GridCoord> nodes;
  for (const Face& f : shape.faces) {
    auto vs = face_vertices(f);
    GridCoord a = t.apply(vs[0]), b = t.apply(vs[1]), c = t.apply(vs[2]);
    int qmin = std::min({a.q, b.q, c.q}), qmax = std::max({a.q, b.q, c.q});
    int rmin = std::min({a.r, b.r, c.r}), rmax = std::max({a.r, b.r, c.r});
    for (int q = qmin; q <= qmax; ++q)
      for (int r = rmin; r <= rmax; ++r)
        if (point_in_triangle({q, r}, a, b, c)) nodes.insert({q, r});
  }
  return {nodes.begin(), nodes.end()};
}

// -------------------------------------------------------------- minimality

namespace {

// minimum number of cells of one anchored scaled lattice covering exactly
// the node set; -1 if no exact cover exists
int min_cover(const std::set<GridCoord>& target,
              const std::vector<std::pair<Face, std::vector<GridCoord>>>& cells,
              int budget_cap, long& budget) {
  // greedy-ordered branch and bound over uncovered nodes
  std::vector<GridCoord> nodes(target.begin(), target.end());
  std::map<GridCoord, std::vector<int>> covering;
  for (int i = 0; i < (int)cells.size(); ++i)
    for (GridCoord n : cells[i].second) covering[n].push_back(i);
  for (GridCoord n : nodes)
    if (covering.find(n) == covering.end()) return -1;

  int best = budget_cap + 1;
  std::set<GridCoord> covered;
  std::vector<int> chosen;
  std::function<void(int)> rec = [&](int used) {
    if (--budget < 0) throw SearchBudgetExceeded("minimality search budget");
    if (used >= best) return;
    // first uncovered node
    GridCoord pick{0, 0};
    bool found = false;
    for (GridCoord n : nodes)
      if (!covered.count(n)) {
        pick = n;
        found = true;
        break;
      }
    if (!found) {
      best = used;
      return;
    }
    for (int ci : covering[pick]) {
      std::vector<GridCoord> added;
      for (GridCoord n : cells[ci].second)
        if (covered.insert(n).second) added.push_back(n);
      rec(used + 1);
      for (GridCoord n : added) covered.erase(n);
    }
  };
  rec(0);
  return best > budget_cap ? -1 : best;
}

}  // namespace

bool is_minimal(const Shape& shape, int max_left_scale) {
  const int target_count = shape.size();
  long budget = 2'000'000;
  for (int left_scale = 1; left_scale <= max_left_scale; ++left_scale) {
    Transformation t;
    t.scale = left_scale;
    auto rep_vec = representation(shape, t);
    if (rep_vec.size() > 600)
      throw SearchBudgetExceeded("shape too large for minimality search");
    std::set<GridCoord> rep(rep_vec.begin(), rep_vec.end());
    int qmin = rep_vec.front().q, qmax = qmin, rmin = rep_vec.front().r,
        rmax = rmin;
    for (GridCoord c : rep_vec) {
      qmin = std::min(qmin, c.q);
      qmax = std::max(qmax, c.q);
      rmin = std::min(rmin, c.r);
      rmax = std::max(rmax, c.r);
    }
    int diam = std::max(qmax - qmin, rmax - rmin);
    for (int scale = 1; scale <= std::max(1, diam); ++scale) {
      for (int aq = 0; aq < scale; ++aq) {
        for (int ar = 0; ar < scale; ++ar) {
          // candidate cells of the scaled lattice anchored at (aq, ar)
          std::vector<std::pair<Face, std::vector<GridCoord>>> cells;
          for (int q = qmin - scale; q <= qmax + scale; ++q) {
            for (int r = rmin - scale; r <= rmax + scale; ++r) {
              if ((q - aq) % scale != 0 || (r - ar) % scale != 0) continue;
              for (int up = 0; up < 2; ++up) {
                Face f{{q, r}, up == 1};
                GridCoord a{q, r};
                GridCoord b{q + scale, r};
                GridCoord c = up ? GridCoord{q, r + scale}
                                 : GridCoord{q + scale, r - scale};
                std::vector<GridCoord> nodes;
                bool inside = true;
                int lo_q = std::min({a.q, b.q, c.q}),
                    hi_q = std::max({a.q, b.q, c.q});
                int lo_r = std::min({a.r, b.r, c.r}),
                    hi_r = std::max({a.r, b.r, c.r});
                for (int qq = lo_q; qq <= hi_q && inside; ++qq)
                  for (int rr = lo_r; rr <= hi_r; ++rr)
                    if (point_in_triangle({qq, rr}, a, b, c)) {
                      if (!rep.count({qq, rr})) {
                        inside = false;
                        break;
                      }
                      nodes.push_back({qq, rr});
                    }
                if (inside && !nodes.empty())
                  cells.push_back({f, std::move(nodes)});
              }
            }
          }
          int mc = min_cover(rep, cells, target_count, budget);
          if (mc >= 0 && mc < target_count) return false;
        }
      }
    }
  }
  return true;
}

// ----------------------------------------------------------- node analysis

NodeSet::NodeSet(const std::vector<GridCoord>& coords)
    : coords_(coords), set_(coords.begin(), coords.end()) {}

bool NodeSet::face_filled(const Face& f) const {
  auto vs = face_vertices(f);
  for (GridCoord v : vs)
    if (!occupied(v)) return false;
  // A face with occupied corners can still be the mouth of a 60-degree
  // notch. Seen from the notch vertex the rhombus-completion node behind
  // the face is void while both wedge flanks continue occupied; a genuinely
  // filled face passes the test from all three of its vertices.
  for (int i = 0; i < 3; ++i) {
    GridCoord v = vs[i], o1 = vs[(i + 1) % 3], o2 = vs[(i + 2) % 3];
    GridCoord t{o1.q + o2.q - v.q, o1.r + o2.r - v.r};
    GridCoord a1{2 * o1.q - v.q, 2 * o1.r - v.r};
    GridCoord a2{2 * o2.q - v.q, 2 * o2.r - v.r};
    if (!occupied(t) && occupied(a1) && occupied(a2)) return false;
  }
  return true;
}

uint8_t NodeSet::wedge_mask(GridCoord x) const {
  uint8_t mask = 0;
  for (int i = 0; i < 6; ++i) {
    if (face_filled(wedge_face(x, i))) mask |= (uint8_t)(1 << i);
  }
  return mask;
}

NodeClass classify_wedge_mask(uint8_t mask) {
  if (mask == 0) return NodeClass::UNCLASSIFIABLE;
  if (mask == 0x3f) return NodeClass::INTERIOR;
  // detect one contiguous run of exactly 3 (a straight boundary edge)
  for (int start = 0; start < 6; ++start) {
    uint8_t run = (uint8_t)((1 << start) | (1 << mod6(start + 1)) |
                            (1 << mod6(start + 2)));
    if (mask == run) return NodeClass::BOUNDARY_EDGE;
  }
  return NodeClass::BOUNDARY_CORNER;
}

NodeClass NodeSet::classify(GridCoord x) const {
  return classify_wedge_mask(wedge_mask(x));
}

int NodeSet::bond_class(GridCoord x, int dir) const {
  if (!occupied(x) || !occupied(neighbor(x, dir))) return -1;
  int filled = 0;
  for (int w : {mod6(dir), mod6(dir - 1)})
    if (face_filled(wedge_face(x, w))) ++filled;
  return filled;  // 0 outside, 1 boundary, 2 interior
}

// --------------------------------------------------- reference triangulation

namespace {

Triangulation triangulate_core(const std::vector<GridCoord>& coords,
                               const std::set<Face>& filled,
                               const std::set<UnitEdge>& boundary,
                               const std::vector<GridCoord>& init_corners) {
  std::set<GridCoord> occupied(coords.begin(), coords.end());
  if (filled.empty()) throw NoBoundaryError("no filled face in structure");

  // bond class under the given region: -1 missing, 0 outside, 1 boundary,
  // 2 interior
  auto bond_cls = [&](GridCoord x, int d) {
    if (!occupied.count(x) || !occupied.count(neighbor(x, d))) return -1;
    if (boundary.count(make_edge(x, neighbor(x, d)))) return 1;
    int cnt = (filled.count(wedge_face(x, mod6(d))) ? 1 : 0) +
              (filled.count(wedge_face(x, mod6(d - 1))) ? 1 : 0);
    return cnt == 2 ? 2 : 0;
  };
  // Interior amoebots keep all three axis pass-throughs. Boundary amoebots
  // remove the connections that reach the boundary, which leaves exactly
  // the pass-through along a straight boundary side; at corners (where the
  // boundary turns) every line ends.
  auto on_boundary = [&](GridCoord x) {
    for (int d = 0; d < 6; ++d)
      if (bond_cls(x, d) == 1) return true;
    return false;
  };
  auto passthrough = [&](GridCoord x, int axis) {
    int c1 = bond_cls(x, axis), c2 = bond_cls(x, axis + 3);
    if (c1 == 2 && c2 == 2) return !on_boundary(x);
    return c1 == 1 && c2 == 1;
  };

  // per-axis segments: union-find over bonds glued at passthrough nodes
  std::map<std::pair<UnitEdge, int>, int> seg_of_bond;  // (bond, axis)->segment
  std::vector<std::vector<std::pair<GridCoord, int>>> seg_members;  // (node,axis)
  {
    std::map<UnitEdge, int> ids;
    std::vector<UnitEdge> bonds;
    std::vector<int> bond_axis;
    for (GridCoord x : coords)
      for (int d = 0; d < 3; ++d)
        if (bond_cls(x, d) >= 0) {
          UnitEdge e = make_edge(x, neighbor(x, d));
          if (!ids.count(e)) {
            ids[e] = (int)bonds.size();
            bonds.push_back(e);
            bond_axis.push_back(d);
          }
        }
    std::vector<int> parent(bonds.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (GridCoord x : coords) {
      for (int axis = 0; axis < 3; ++axis) {
        if (!passthrough(x, axis)) continue;
        int a = find(ids[make_edge(x, neighbor(x, axis))]);
        int b = find(ids[make_edge(x, neighbor(x, axis + 3))]);
        if (a != b) parent[b] = a;
      }
    }
    std::map<int, int> root_to_seg;
    for (size_t i = 0; i < bonds.size(); ++i) {
      int root = find((int)i);
      auto [it, fresh] = root_to_seg.try_emplace(root, (int)seg_members.size());
      if (fresh) seg_members.push_back({});
      seg_of_bond[{bonds[i], bond_axis[i]}] = it->second;
      seg_members[it->second].push_back({bonds[i].a, bond_axis[i]});
      seg_members[it->second].push_back({bonds[i].b, bond_axis[i]});
    }
  }

  std::set<GridCoord> corner_set;
  std::vector<GridCoord> frontier = init_corners;

  Triangulation out;
  std::set<UnitEdge> beeped_bonds;
  std::set<int> hot_segments;
  int iterations = 0;
  while (true) {
    ++iterations;
    for (GridCoord x : frontier) corner_set.insert(x);
    frontier.clear();
    // all corners beep all their (non-outside) axis circuits
    for (GridCoord x : corner_set) {
      for (int d = 0; d < 6; ++d) {
        if (bond_cls(x, d) < 1) continue;  // missing or outside bond
        auto it = seg_of_bond.find({make_edge(x, neighbor(x, d)), axis_of(d)});
        if (it != seg_of_bond.end()) hot_segments.insert(it->second);
      }
    }
    // receive: nodes with >= 2 hot axes become corners
    std::map<GridCoord, uint8_t> hot_axes;
    for (int seg : hot_segments)
      for (auto [node, axis] : seg_members[seg])
        hot_axes[node] |= (uint8_t)(1 << axis);
    for (auto [node, axes] : hot_axes) {
      if (corner_set.count(node)) continue;
      int cnt = (axes & 1) + (axes >> 1 & 1) + (axes >> 2 & 1);
      if (cnt >= 2) frontier.push_back(node);
    }
    if (frontier.empty()) break;
    if (iterations > (int)coords.size() + 2)
      throw SimError("triangulation replay failed to converge");
  }

  for (int seg : hot_segments) {
    std::set<GridCoord> nodes_on;
    for (auto [node, axis] : seg_members[seg]) nodes_on.insert(node);
    for (GridCoord x : nodes_on)
      for (int d = 0; d < 3; ++d)
        if (bond_cls(x, d) >= 1 && nodes_on.count(neighbor(x, d))) {
          UnitEdge e = make_edge(x, neighbor(x, d));
          auto it = seg_of_bond.find({e, d});
          if (it != seg_of_bond.end() && it->second == seg)
            beeped_bonds.insert(e);
        }
  }

  out.iterations = iterations;
  out.corners.assign(corner_set.begin(), corner_set.end());
  // triangulation edges: every boundary bond plus activated interior bonds
  for (const UnitEdge& e : boundary) out.edges.insert(e);
  for (const UnitEdge& e : beeped_bonds) out.edges.insert(e);
  std::set<Face> seen;
  for (const Face& f : filled) {
    if (seen.count(f)) continue;
    TriangulationCell cell;
    std::queue<Face> q;
    q.push(f);
    seen.insert(f);
    while (!q.empty()) {
      Face g = q.front();
      q.pop();
      cell.units.push_back(g);
      auto vs = face_vertices(g);
      for (const Face& h : face_dual_neighbors(g)) {
        if (!filled.count(h) || seen.count(h)) continue;
        auto hv = face_vertices(h);
        std::vector<GridCoord> inter;
        for (auto a : vs)
          for (auto b : hv)
            if (a == b) inter.push_back(a);
        if (inter.size() != 2) continue;
        if (out.edges.count(make_edge(inter[0], inter[1]))) continue;
        seen.insert(h);
        q.push(h);
      }
    }
    // triangle check: the cell's node set must equal a scaled single face
    int total = (int)cell.units.size();
    int side = 0;
    while (side * side < total) ++side;
    cell.size = side;
    if (side * side == total) {
      std::set<GridCoord> cell_nodes;
      for (const Face& u : cell.units)
        for (GridCoord v : face_vertices(u)) cell_nodes.insert(v);
      for (GridCoord anchor : cell_nodes) {
        for (int up = 0; up < 2 && !cell.is_triangle; ++up) {
          Transformation ct;
          ct.scale = side;
          ct.translation = anchor;
          auto rep = representation(Shape::of({Face{{0, 0}, up == 1}}), ct);
          if (std::set<GridCoord>(rep.begin(), rep.end()) == cell_nodes) {
            cell.is_triangle = true;
            cell.up = up == 1;
            cell.anchor = anchor;
          }
        }
        if (cell.is_triangle) break;
      }
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

}  // namespace

Triangulation reference_triangulation(const std::vector<GridCoord>& coords) {
  NodeSet ns(coords);
  std::set<Face> filled;
  std::vector<GridCoord> corners;
  std::set<UnitEdge> boundary;
  for (GridCoord x : coords) {
    uint8_t mask = ns.wedge_mask(x);
    for (int i = 0; i < 6; ++i)
      if (mask >> i & 1) filled.insert(wedge_face(x, i));
    if (ns.classify(x) == NodeClass::BOUNDARY_CORNER) corners.push_back(x);
    for (int d = 0; d < 3; ++d)
      if (ns.bond_class(x, d) == 1) boundary.insert(make_edge(x, neighbor(x, d)));
  }
  return triangulate_core(coords, filled, boundary, corners);
}

Triangulation reference_triangulation(const std::vector<GridCoord>& coords,
                                      const std::set<UnitEdge>& boundary) {
  std::set<GridCoord> occupied(coords.begin(), coords.end());
  if (boundary.empty()) throw NoBoundaryError("empty boundary");
  // flood-fill the faces reachable from outside across non-boundary edges;
  // what remains enclosed and fully occupied is the filled region
  int qmin = coords[0].q, qmax = qmin, rmin = coords[0].r, rmax = rmin;
  for (GridCoord c : coords) {
    qmin = std::min(qmin, c.q);
    qmax = std::max(qmax, c.q);
    rmin = std::min(rmin, c.r);
    rmax = std::max(rmax, c.r);
  }
  auto in_box = [&](const Face& f) {
    return f.corner.q >= qmin - 1 && f.corner.q <= qmax + 1 &&
           f.corner.r >= rmin - 1 && f.corner.r <= rmax + 1;
  };
  std::set<Face> outside;
  std::queue<Face> q;
  Face seed{{qmin - 1, rmin - 1}, true};
  q.push(seed);
  outside.insert(seed);
  while (!q.empty()) {
    Face f = q.front();
    q.pop();
    auto vs = face_vertices(f);
    for (const Face& g : face_dual_neighbors(f)) {
      if (!in_box(g) || outside.count(g)) continue;
      // shared edge
      auto gv = face_vertices(g);
      std::vector<GridCoord> inter;
      for (auto a : vs)
        for (auto b : gv)
          if (a == b) inter.push_back(a);
      if (inter.size() == 2 && boundary.count(make_edge(inter[0], inter[1])))
        continue;  // cannot cross the boundary
      outside.insert(g);
      q.push(g);
    }
  }
  std::set<Face> filled;
  for (int qq = qmin - 1; qq <= qmax + 1; ++qq)
    for (int rr = rmin - 1; rr <= rmax + 1; ++rr)
      for (int up = 0; up < 2; ++up) {
        Face f{{qq, rr}, up == 1};
        if (outside.count(f)) continue;
        auto vs = face_vertices(f);
        if (occupied.count(vs[0]) && occupied.count(vs[1]) &&
            occupied.count(vs[2]))
          filled.insert(f);
      }
  // initial corners: nodes whose incident boundary edges are not one
  // straight pair
  std::vector<GridCoord> corners;
  for (GridCoord x : coords) {
    std::vector<int> dirs;
    for (int d = 0; d < 6; ++d)
      if (occupied.count(neighbor(x, d)) &&
          boundary.count(make_edge(x, neighbor(x, d))))
        dirs.push_back(d);
    if (dirs.empty()) continue;
    bool straight = dirs.size() == 2 && (dirs[1] - dirs[0]) == 3;
    if (!straight) corners.push_back(x);
  }
  return triangulate_core(coords, filled, boundary, corners);
}

int triangulation_iteration_bound(const Shape& shape) {
  Transformation t;
  t.scale = 4;
  return reference_triangulation(representation(shape, t)).iterations;
}

// ------------------------------------------------------------------- files

Shape parse_shape(const std::string& text) {
  std::vector<Face> faces;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    int q, r;
    std::string o;
    if (!(ls >> q >> r >> o)) {
      std::string rest;
      std::istringstream check(line);
      if (check >> rest)
        throw ShapeFormatError("bad shape line: " + line);
      continue;  // blank
    }
    if (o != "U" && o != "D") throw ShapeFormatError("orientation must be U or D");
    faces.push_back(Face{{q, r}, o == "U"});
  }
  if (faces.empty()) throw ShapeFormatError("shape file has no faces");
  return Shape::of(std::move(faces));
}

std::string format_shape(const Shape& shape) {
  std::ostringstream out;
  for (const Face& f : shape.faces)
    out << f.corner.q << ' ' << f.corner.r << ' ' << (f.up ? 'U' : 'D') << '\n';
  return out.str();
}

Shape load_shape_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShapeFormatError("cannot open shape file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_shape(ss.str());
}

std::string triangulation_to_json(const Triangulation& t) {
  nlohmann::json j;
  j["iterations"] = t.iterations;
  for (const GridCoord& c : t.corners) j["corners"].push_back({c.q, c.r});
  for (const UnitEdge& e : t.edges)
    j["edges"].push_back({{e.a.q, e.a.r}, {e.b.q, e.b.r}});
  for (const TriangulationCell& c : t.cells) {
    nlohmann::json jc;
    jc["triangle"] = c.is_triangle;
    jc["size"] = c.size;
    for (const Face& f : c.units)
      jc["units"].push_back({f.corner.q, f.corner.r, f.up ? "U" : "D"});
    j["cells"].push_back(jc);
  }
  return j.dump();
}

}  // namespace circuitbots
