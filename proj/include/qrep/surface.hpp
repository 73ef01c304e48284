#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qrep/groups.hpp"
#include "qrep/matcore.hpp"

namespace qrep {

/// Vertex classes of the triangulated 4g-gon. Corner vertices v_i^k all
/// glue to one point of the surface; a_i^k glues to *a_i^k and b_i^k to
/// *b_i^k.
enum class LiftClass : std::uint8_t { Corner, A, B, StarA, StarB, Inner };

/// A vertex of the fundamental polygon, e.g. {StarA, k = 2, index = 1} is
/// *a_1^2. Corner and Inner indices run 0..3 (index 4 is normalized to 0 of
/// the next wedge); side indices are 1 or 2.
struct LiftTag {
  LiftClass cls = LiftClass::Corner;
  int wedge = 1;
  int index = 0;

  auto operator<=>(const LiftTag&) const = default;
};

std::string to_string(const LiftTag& tag);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct SurfaceVertex {
  /// Quotient class: Corner, A, B or Inner.
  LiftClass cls = LiftClass::Corner;
  int wedge = 0;
  int index = 0;
  std::string name;
  /// Every polygon vertex mapping to this surface vertex.
  std::vector<LiftTag> lifts;
};

struct SurfaceEdge {
  int lo = 0;  // lower vertex in the local order
  int hi = 0;
  /// Lifts of the edge to the polygon, endpoints listed (lo, hi).
  std::vector<std::pair<LiftTag, LiftTag>> lifts;
};

struct SurfaceTriangle {
  /// Vertex ids in increasing local order.
  std::array<int, 3> vertices{};
  /// The polygon lift of each vertex and its planar position.
  std::array<LiftTag, 3> lifts{};
  std::array<Point2, 3> positions{};
};

/// Locally ordered triangulation of the closed genus-g surface. Vertex ids
/// realize the local order: the corner vertex first, then a/b vertices, then
/// inner vertices counter-clockwise starting at w_0^1.
struct SurfaceComplex {
  int genus = 1;
  std::vector<SurfaceVertex> vertices;
  std::vector<SurfaceEdge> edges;
  std::vector<SurfaceTriangle> triangles;
  std::vector<int> tree_edges;  // indices into `edges`
  int root = 0;

  int euler_characteristic() const;
  /// Index of the edge {a, b}; -1 if absent.
  int find_edge(int a, int b) const;
  /// Index of the triangle with lifts (v_1^g, a_2^g, w_1^g).
  int exceptional_triangle() const;
  int vertex_of(const LiftTag& tag) const;

  std::map<std::pair<int, int>, int> edge_index;
  std::map<LiftTag, int> lift_index;
};

SurfaceComplex build_complex(int genus);

/// Maps each edge (lo, hi) to its label s_{lo,hi} as an s_0 image in F_{2g};
/// label(hi, lo) is the inverse.
class EdgeLabeling {
 public:
  EdgeLabeling(int genus, std::map<std::pair<int, int>, FreeWord> labels);

  int genus() const { return genus_; }
  /// Label of the directed edge i -> j. Throws NotAnEdge.
  FreeWord label(int i, int j) const;
  const std::map<std::pair<int, int>, FreeWord>& table() const { return labels_; }

 private:
  int genus_;
  std::map<std::pair<int, int>, FreeWord> labels_;
};

/// Table-driven labels: a-w edges get a_k^-1, b-w edges b_k^-1, inner and
/// tree-side edges 1, corner edges K_{k-1}, K_{k-1} a_k b_k a_k^-1,
/// K_{k-1} a_k b_k, K_{k-1} a_k depending on the corner v_0..v_3, all passed
/// through s_0. Throws UnclassifiedEdge.
EdgeLabeling edge_labels(const SurfaceComplex& c, const SurfaceGroupData& sg);

struct OrientedSimplex {
  int triangle = 0;
  /// 0 when the ordered triple is counter-clockwise in the polygon, so the
  /// segment U_ik starts at the barycenter; 1 otherwise.
  int sign = 0;
  double signed_area = 0.0;
};

/// Twice the signed area of (p0, p1, p2); positive when counter-clockwise.
double signed_area(const Point2& p0, const Point2& p1, const Point2& p2);

/// Throws DegenerateEmbedding when a triangle has |area| < 1e-12.
std::vector<OrientedSimplex> orientation_signs(const SurfaceComplex& c);

/// Dual-cell and partition-of-unity geometry of a single triangle in
/// barycentric coordinates t = (t_0, t_1, t_2), index order = local order.
struct DualCellGeometry {
  double dilation = 0.1;  // delta in (0, 1/2)

  /// U_i: t_i >= t_l for all l.
  bool in_dual_block(const std::array<double, 3>& t, int i) const;
  /// V_i: t_i > 1/3 - delta, the support of chi_i.
  bool in_dilated_block(const std::array<double, 3>& t, int i) const;
  /// chi_i(t) = max(t_i - (1/3 - delta), 0), normalized to sum 1.
  std::array<double, 3> partition_of_unity(const std::array<double, 3>& t) const;
  /// Interpolation weight of the (min, max) transition at height t_1:
  /// min(t_1 / (1/3 - delta), 1).
  double interpolation_weight(double t_mid) const;
};

std::array<double, 3> partition_of_unity_at(const SurfaceComplex& c, int triangle,
                                            const std::array<double, 3>& t,
                                            const DualCellGeometry& geom = {});

/// pi(s_ij), pi(s_jk), pi(s_ik) and the product pi(s_ij) pi(s_jk) of one
/// triangle, with i < j < k.
struct SimplexValues {
  TracialMatrix ij;
  TracialMatrix jk;
  TracialMatrix ik;
  TracialMatrix product;
};

SimplexValues simplex_values(const SurfaceComplex& c, const EdgeLabeling& labels,
                             const UnitaryTuple& t, int triangle);

/// Transition function v_ab on the segment U_ab of a triangle, a, b local
/// indices in {0, 1, 2}. For (0, 2) the parameter runs from the edge
/// midpoint (0, value pi(s_ik)) to the barycenter (1, value pi(s_ij)pi(s_jk))
/// and is constant on the delta-collar; the other pairs are constant.
/// Reversed pairs return the inverse. Throws NotAnEdge for a == b or indices
/// outside {0, 1, 2}.
TracialMatrix transition_at(const SimplexValues& values, int a, int b, double parameter,
                            const DualCellGeometry& geom = {});
TracialMatrix transition_at(const SurfaceComplex& c, const EdgeLabeling& labels,
                            const UnitaryTuple& t, int triangle, int a, int b,
                            double parameter, const DualCellGeometry& geom = {});

/// Transition function at a barycentric point of the triangle.
TracialMatrix transition_at_point(const SimplexValues& values, int a, int b,
                                  const std::array<double, 3>& t,
                                  const DualCellGeometry& geom = {});

/// Text dump of vertices (classes, lifts, positions), edges with labels and
/// triangles with signs.
std::string export_complex(const SurfaceComplex& c, const EdgeLabeling& labels,
                           const std::vector<OrientedSimplex>& signs);

}  // namespace qrep
