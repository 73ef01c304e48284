#include "qrep/surface.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qrep/error.hpp"

namespace qrep {

std::string to_string(const LiftTag& tag) {
  std::ostringstream os;
  switch (tag.cls) {
    case LiftClass::Corner: os << 'v'; break;
    case LiftClass::A: os << 'a'; break;
    case LiftClass::B: os << 'b'; break;
    case LiftClass::StarA: os << "*a"; break;
    case LiftClass::StarB: os << "*b"; break;
    case LiftClass::Inner: os << 'w'; break;
  }
  os << tag.index << '^' << tag.wedge;
  return os.str();
}

namespace {

bool is_tree_class(LiftClass c) {
  return c == LiftClass::StarA || c == LiftClass::StarB || c == LiftClass::Inner;
}

// Boundary walk of wedge k from v_0^k to v_4^k = v_0^{k+1}: the a side, the
// tree copy of the b side, the tree copy of the a side, then the b side.
std::array<LiftTag, 13> wedge_boundary(int genus, int k) {
  const int next = k % genus + 1;
  return {{
      {LiftClass::Corner, k, 0},
      {LiftClass::A, k, 1},
      {LiftClass::A, k, 2},
      {LiftClass::Corner, k, 1},
      {LiftClass::StarB, k, 1},
      {LiftClass::StarB, k, 2},
      {LiftClass::Corner, k, 2},
      {LiftClass::StarA, k, 2},
      {LiftClass::StarA, k, 1},
      {LiftClass::Corner, k, 3},
      {LiftClass::B, k, 2},
      {LiftClass::B, k, 1},
      {LiftClass::Corner, next, 0},
  }};
}

LiftTag inner_tag(int genus, int k, int j) {
  if (j == 4) return {LiftClass::Inner, k % genus + 1, 0};
  return {LiftClass::Inner, k, j};
}

Point2 corner_position(int genus, int k, int i) {
  const double angle = 2.0 * std::numbers::pi * (4 * (k - 1) + i) / (4.0 * genus);
  return {std::cos(angle), std::sin(angle)};
}

Point2 lerp(const Point2& a, const Point2& b, double s) {
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

// Planar position of a polygon vertex. Side points split the chord between
// consecutive corners in thirds; inner vertices sit at half radius.
Point2 position_of(int genus, const LiftTag& tag, int boundary_slot) {
  if (tag.cls == LiftClass::Inner) {
    const Point2 c = corner_position(genus, tag.wedge, tag.index);
    return {0.5 * c.x, 0.5 * c.y};
  }
  if (tag.cls == LiftClass::Corner) return corner_position(genus, tag.wedge, tag.index);
  // boundary_slot is the position 1..11 in the wedge walk.
  const int side = boundary_slot / 3;
  const int offset = boundary_slot % 3;
  const Point2 from = corner_position(genus, tag.wedge, side);
  const Point2 to = corner_position(genus, tag.wedge, side + 1);
  return lerp(from, to, offset / 3.0);
}

struct PlacedLift {
  LiftTag tag;
  Point2 pos;
};

}  // namespace

int SurfaceComplex::euler_characteristic() const {
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(triangles.size());
}

int SurfaceComplex::find_edge(int a, int b) const {
  const auto it = edge_index.find({std::min(a, b), std::max(a, b)});
  return it == edge_index.end() ? -1 : it->second;
}

int SurfaceComplex::vertex_of(const LiftTag& tag) const {
  const auto it = lift_index.find(tag);
  if (it == lift_index.end()) throw Error(ErrorKind::InvalidArgument, "unknown lift " + to_string(tag));
  return it->second;
}

int SurfaceComplex::exceptional_triangle() const {
  const LiftTag v1{LiftClass::Corner, genus, 1};
  const LiftTag a2{LiftClass::A, genus, 2};
  const LiftTag w1{LiftClass::Inner, genus, 1};
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& l = triangles[t].lifts;
    auto has = [&l](const LiftTag& x) { return std::find(l.begin(), l.end(), x) != l.end(); };
    if (has(v1) && has(a2) && has(w1)) return static_cast<int>(t);
  }
  return -1;
}

SurfaceComplex build_complex(int genus) {
  if (genus < 1) throw Error(ErrorKind::InvalidArgument, "genus must be >= 1");
  SurfaceComplex c;
  c.genus = genus;

  // Surface vertices in local order.
  {
    SurfaceVertex corner{LiftClass::Corner, 0, 0, "v", {}};
    for (int k = 1; k <= genus; ++k)
      for (int i = 0; i < 4; ++i) corner.lifts.push_back({LiftClass::Corner, k, i});
    c.vertices.push_back(corner);
  }
  for (int k = 1; k <= genus; ++k) {
    for (int i = 1; i <= 2; ++i) {
      c.vertices.push_back({LiftClass::A, k, i, "a" + std::to_string(i) + "^" + std::to_string(k),
                            {{LiftClass::A, k, i}, {LiftClass::StarA, k, i}}});
    }
    for (int i = 1; i <= 2; ++i) {
      c.vertices.push_back({LiftClass::B, k, i, "b" + std::to_string(i) + "^" + std::to_string(k),
                            {{LiftClass::B, k, i}, {LiftClass::StarB, k, i}}});
    }
  }
  for (int k = 1; k <= genus; ++k) {
    for (int j = 0; j < 4; ++j) {
      c.vertices.push_back({LiftClass::Inner, k, j, "w" + std::to_string(j) + "^" + std::to_string(k),
                            {{LiftClass::Inner, k, j}}});
    }
  }
  for (std::size_t v = 0; v < c.vertices.size(); ++v)
    for (const LiftTag& l : c.vertices[v].lifts) c.lift_index[l] = static_cast<int>(v);

  auto add_triangle = [&c](std::array<PlacedLift, 3> corners) {
    SurfaceTriangle tri;
    std::array<int, 3> ids{};
    for (int i = 0; i < 3; ++i) ids[i] = c.vertex_of(corners[i].tag);
    std::array<int, 3> perm{0, 1, 2};
    std::sort(perm.begin(), perm.end(), [&ids](int a, int b) { return ids[a] < ids[b]; });
    for (int i = 0; i < 3; ++i) {
      tri.vertices[i] = ids[perm[i]];
      tri.lifts[i] = corners[perm[i]].tag;
      tri.positions[i] = corners[perm[i]].pos;
    }
    if (tri.vertices[0] == tri.vertices[1] || tri.vertices[1] == tri.vertices[2]) {
      throw Error(ErrorKind::InvalidArgument, "triangle with repeated surface vertex");
    }
    for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
      const std::pair key{tri.vertices[a], tri.vertices[b]};
      auto [it, inserted] = c.edge_index.emplace(key, static_cast<int>(c.edges.size()));
      if (inserted) c.edges.push_back({key.first, key.second, {}});
      auto& lifts = c.edges[it->second].lifts;
      const std::pair lift{tri.lifts[a], tri.lifts[b]};
      if (std::find(lifts.begin(), lifts.end(), lift) == lifts.end()) lifts.push_back(lift);
    }
    c.triangles.push_back(tri);
  };

  for (int k = 1; k <= genus; ++k) {
    const auto walk = wedge_boundary(genus, k);
    std::array<PlacedLift, 13> outer;
    for (int s = 0; s < 13; ++s) {
      Point2 pos;
      if (s == 12) {
        pos = corner_position(genus, k, 4);
      } else {
        pos = position_of(genus, walk[s], s);
      }
      outer[s] = {walk[s], pos};
    }
    std::array<PlacedLift, 5> inner;
    for (int j = 0; j < 5; ++j) {
      const Point2 cpos = corner_position(genus, k, j);
      inner[j] = {inner_tag(genus, k, j), {0.5 * cpos.x, 0.5 * cpos.y}};
    }
    for (int j = 0; j < 4; ++j) {
      const PlacedLift& o0 = outer[3 * j];
      const PlacedLift& o1 = outer[3 * j + 1];
      const PlacedLift& o2 = outer[3 * j + 2];
      const PlacedLift& o3 = outer[3 * j + 3];
      add_triangle({o0, o1, inner[j]});
      add_triangle({o1, o2, inner[j]});
      add_triangle({inner[j], inner[j + 1], o2});
      add_triangle({o2, o3, inner[j + 1]});
    }
  }

  // Fan over the central 4g-gon bounded by the inner cycle.
  std::vector<PlacedLift> ring;
  for (int k = 1; k <= genus; ++k) {
    for (int j = 0; j < 4; ++j) {
      const Point2 cpos = corner_position(genus, k, j);
      ring.push_back({{LiftClass::Inner, k, j}, {0.5 * cpos.x, 0.5 * cpos.y}});
    }
  }
  for (std::size_t m = 1; m + 1 < ring.size(); ++m) add_triangle({ring[0], ring[m], ring[m + 1]});

  // Spanning tree: v_0^1 w_0^1, the inner path, and the tree copies of the
  // side vertices hung off w_2^k (a side) and w_1^k (b side).
  auto tree_edge = [&c](const LiftTag& x, const LiftTag& y) {
    const int e = c.find_edge(c.vertex_of(x), c.vertex_of(y));
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "tree edge missing from complex");
    c.tree_edges.push_back(e);
  };
  tree_edge({LiftClass::Corner, 1, 0}, {LiftClass::Inner, 1, 0});
  for (std::size_t m = 0; m + 1 < ring.size(); ++m) tree_edge(ring[m].tag, ring[m + 1].tag);
  for (int k = 1; k <= genus; ++k) {
    for (int i = 1; i <= 2; ++i) {
      tree_edge({LiftClass::StarA, k, i}, {LiftClass::Inner, k, 2});
      tree_edge({LiftClass::StarB, k, i}, {LiftClass::Inner, k, 1});
    }
  }
  c.root = c.vertex_of({LiftClass::Corner, 1, 0});
  return c;
}

// ---------------------------------------------------------------------------
// Labels

EdgeLabeling::EdgeLabeling(int genus, std::map<std::pair<int, int>, FreeWord> labels)
    : genus_(genus), labels_(std::move(labels)) {}

FreeWord EdgeLabeling::label(int i, int j) const {
  if (i < j) {
    const auto it = labels_.find({i, j});
    if (it != labels_.end()) return it->second;
  } else {
    const auto it = labels_.find({j, i});
    if (it != labels_.end()) return it->second.inverse();
  }
  throw Error(ErrorKind::NotAnEdge,
              "no edge between vertices " + std::to_string(i) + " and " + std::to_string(j));
}

namespace {

// Label of one polygon lift of an edge, oriented lo -> hi, or nullopt when
// this lift is not the one the table is stated for.
std::optional<FreeWord> lift_label(const SurfaceGroupData& sg, LiftTag lo, LiftTag hi) {
  const int g = sg.genus;
  const FreeWord one(g);
  if (lo.cls == LiftClass::Inner && hi.cls == LiftClass::Inner) return one;

  const bool a_side = (lo.cls == LiftClass::A && hi.cls == LiftClass::A) ||
                      (lo.cls == LiftClass::StarA && hi.cls == LiftClass::StarA);
  const bool b_side = (lo.cls == LiftClass::B && hi.cls == LiftClass::B) ||
                      (lo.cls == LiftClass::StarB && hi.cls == LiftClass::StarB);
  if ((a_side || b_side) && lo.wedge == hi.wedge) return one;

  if (hi.cls == LiftClass::Inner) {
    switch (lo.cls) {
      case LiftClass::A: return FreeWord::alpha(g, lo.wedge, -1);
      case LiftClass::B: return FreeWord::beta(g, lo.wedge, -1);
      case LiftClass::StarA:
      case LiftClass::StarB: return one;
      default: break;
    }
  }

  if (lo.cls == LiftClass::Corner && is_tree_class(hi.cls)) {
    const int k = lo.wedge;
    const FreeWord& kap = sg.kappa[k - 1];
    const FreeWord a = FreeWord::alpha(g, k);
    const FreeWord b = FreeWord::beta(g, k);
    FreeWord natural(g);
    switch (lo.index) {
      case 0: natural = kap; break;
      case 1: natural = kap * a * b * a.inverse(); break;
      case 2: natural = kap * a * b; break;
      case 3: natural = kap * a; break;
      default: return std::nullopt;
    }
    auto s = sg.section(natural);
    if (!s) return std::nullopt;
    return *s;
  }
  return std::nullopt;
}

}  // namespace

EdgeLabeling edge_labels(const SurfaceComplex& c, const SurfaceGroupData& sg) {
  if (c.genus != sg.genus) throw Error(ErrorKind::GenusMismatch, "complex and group genus differ");
  std::map<std::pair<int, int>, FreeWord> labels;
  for (const SurfaceEdge& e : c.edges) {
    std::optional<FreeWord> chosen;
    for (const auto& [lo, hi] : e.lifts) {
      auto l = lift_label(sg, lo, hi);
      if (!l) continue;
      if (chosen && !(*chosen == *l)) {
        throw Error(ErrorKind::UnclassifiedEdge,
                    "lifts of edge " + c.vertices[e.lo].name + " " + c.vertices[e.hi].name +
                        " disagree: " + chosen->to_string() + " vs " + l->to_string());
      }
      chosen = std::move(l);
    }
    if (!chosen) {
      throw Error(ErrorKind::UnclassifiedEdge,
                  "edge " + c.vertices[e.lo].name + " " + c.vertices[e.hi].name +
                      " matches no label class");
    }
    labels.emplace(std::pair{e.lo, e.hi}, *chosen);
  }
  return EdgeLabeling(c.genus, std::move(labels));
}

// ---------------------------------------------------------------------------
// Orientation and dual cells

double signed_area(const Point2& p0, const Point2& p1, const Point2& p2) {
  return (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
}

std::vector<OrientedSimplex> orientation_signs(const SurfaceComplex& c) {
  std::vector<OrientedSimplex> out;
  out.reserve(c.triangles.size());
  for (std::size_t t = 0; t < c.triangles.size(); ++t) {
    const auto& p = c.triangles[t].positions;
    const double area = signed_area(p[0], p[1], p[2]);
    if (std::abs(area) < 1e-12) {
      throw Error(ErrorKind::DegenerateEmbedding,
                  "triangle " + std::to_string(t) + " has vanishing signed area");
    }
    out.push_back({static_cast<int>(t), area > 0.0 ? 0 : 1, area});
  }
  return out;
}

bool DualCellGeometry::in_dual_block(const std::array<double, 3>& t, int i) const {
  return t[i] >= t[0] && t[i] >= t[1] && t[i] >= t[2];
}

bool DualCellGeometry::in_dilated_block(const std::array<double, 3>& t, int i) const {
  return t[i] > 1.0 / 3.0 - dilation;
}

std::array<double, 3> DualCellGeometry::partition_of_unity(const std::array<double, 3>& t) const {
  std::array<double, 3> w{};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    w[i] = std::max(t[i] - (1.0 / 3.0 - dilation), 0.0);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

double DualCellGeometry::interpolation_weight(double t_mid) const {
  return std::clamp(t_mid / (1.0 / 3.0 - dilation), 0.0, 1.0);
}

std::array<double, 3> partition_of_unity_at(const SurfaceComplex& c, int triangle,
                                            const std::array<double, 3>& t,
                                            const DualCellGeometry& geom) {
  if (triangle < 0 || triangle >= static_cast<int>(c.triangles.size())) {
    throw Error(ErrorKind::InvalidArgument, "triangle index out of range");
  }
  for (double x : t) {
    if (x < -1e-15 || x > 1.0 + 1e-15) {
      throw Error(ErrorKind::InvalidArgument, "point outside the closed simplex");
    }
  }
  return geom.partition_of_unity(t);
}

SimplexValues simplex_values(const SurfaceComplex& c, const EdgeLabeling& labels,
                             const UnitaryTuple& t, int triangle) {
  const auto& v = c.triangles.at(triangle).vertices;
  TracialMatrix ij = evaluate_word(t, labels.label(v[0], v[1]));
  TracialMatrix jk = evaluate_word(t, labels.label(v[1], v[2]));
  TracialMatrix ik = evaluate_word(t, labels.label(v[0], v[2]));
  TracialMatrix product = ij * jk;
  return {std::move(ij), std::move(jk), std::move(ik), std::move(product)};
}

namespace {

TracialMatrix oriented_transition(const SimplexValues& values, int a, int b, double weight) {
  if (a < 0 || a > 2 || b < 0 || b > 2 || a == b) {
    throw Error(ErrorKind::NotAnEdge, "vertex pair (" + std::to_string(a) + ", " +
                                          std::to_string(b) + ") is not an edge of the triangle");
  }
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  TracialMatrix forward = [&] {
    if (lo == 0 && hi == 1) return values.ij;
    if (lo == 1 && hi == 2) return values.jk;
    return (1.0 - weight) * values.ik + Complex(weight) * values.product;
  }();
  if (a < b) return forward;
  return forward.inverse();
}

}  // namespace

TracialMatrix transition_at(const SimplexValues& values, int a, int b, double parameter,
                            const DualCellGeometry& geom) {
  if (!(parameter >= 0.0 && parameter <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "transition parameter must lie in [0, 1]");
  }
  return oriented_transition(values, a, b, geom.interpolation_weight(parameter / 3.0));
}

TracialMatrix transition_at(const SurfaceComplex& c, const EdgeLabeling& labels,
                            const UnitaryTuple& t, int triangle, int a, int b,
                            double parameter, const DualCellGeometry& geom) {
  return transition_at(simplex_values(c, labels, t, triangle), a, b, parameter, geom);
}

TracialMatrix transition_at_point(const SimplexValues& values, int a, int b,
                                  const std::array<double, 3>& t,
                                  const DualCellGeometry& geom) {
  return oriented_transition(values, a, b, geom.interpolation_weight(t[1]));
}

std::string export_complex(const SurfaceComplex& c, const EdgeLabeling& labels,
                           const std::vector<OrientedSimplex>& signs) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "genus " << c.genus << "\n";
  os << "vertices " << c.vertices.size() << "\n";
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    os << v << ' ' << c.vertices[v].name << " lifts";
    for (const LiftTag& l : c.vertices[v].lifts) os << ' ' << to_string(l);
    os << "\n";
  }
  os << "edges " << c.edges.size() << "\n";
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const SurfaceEdge& edge = c.edges[e];
    const bool tree = std::find(c.tree_edges.begin(), c.tree_edges.end(), static_cast<int>(e)) !=
                      c.tree_edges.end();
    os << e << ' ' << edge.lo << ' ' << edge.hi << (tree ? " tree" : " -") << " label "
       << labels.label(edge.lo, edge.hi).to_string() << "\n";
  }
  os << "triangles " << c.triangles.size() << "\n";
  for (std::size_t t = 0; t < c.triangles.size(); ++t) {
    const SurfaceTriangle& tri = c.triangles[t];
    os << t;
    for (int i = 0; i < 3; ++i) {
      os << ' ' << to_string(tri.lifts[i]) << '(' << tri.positions[i].x << ','
         << tri.positions[i].y << ')';
    }
    os << " s " << signs.at(t).sign << "\n";
  }
  return os.str();
}

}  // namespace qrep
