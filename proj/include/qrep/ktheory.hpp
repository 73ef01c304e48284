#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrep/determinant.hpp"
#include "qrep/groups.hpp"
#include "qrep/matcore.hpp"
#include "qrep/surface.hpp"

namespace qrep {

/// Everything needed to evaluate invariants on a genus-g surface: group
/// data, triangulation, edge labels and orientation signs.
struct SurfaceContext {
  SurfaceGroupData group;
  SurfaceComplex complex;
  EdgeLabeling labels;
  std::vector<OrientedSimplex> signs;
};

SurfaceContext make_surface_context(int genus);

// ---------------------------------------------------------------------------
// Genus one: the Exel-Loring invariant

struct BottProjectionData {
  TracialMatrix u;
  TracialMatrix v;
  /// [[f(v), g(v) + h(v) u*], [g(v) + u h(v), 1 - f(v)]], size 2n.
  TracialMatrix e;
  double idempotency_residual;  // ||e^2 - e||
};

/// Chord functions on the circle z = exp(2 pi i t), t in [0, 1).
struct ChordValues {
  double f, g, h;
};
ChordValues chord_functions(double t);

/// Throws NotUnitary (||x* x - 1|| > 1e-10) and DimensionMismatch.
BottProjectionData bott_projection(const TracialMatrix& u, const TracialMatrix& v);

struct KappaValue {
  double value = 0.0;  // tr(chi(e)) - n
  int integer = 0;
  double rounding_residual = 0.0;
  double gap = 0.0;
  double idempotency_residual = 0.0;
};

/// Throws SpectralGapTooSmall when e(u, v) has spectrum within 1e-6 of
/// Re z = 1/2.
KappaValue kappa_invariant(const TracialMatrix& u, const TracialMatrix& v);

// ---------------------------------------------------------------------------
// Simplicial determinant sum

struct SimplexTerm {
  int triangle = 0;
  int sign = 0;  // s(sigma)
  double dhs = 0.0;  // Delta(xi_sigma)
  double imaginary_residual = 0.0;
  double contribution = 0.0;  // -(-1)^s Delta(xi_sigma)
};

struct SimplicialSum {
  double value = 0.0;
  std::vector<SimplexTerm> terms;
};

/// S = -sum_sigma (-1)^{s(sigma)} Delta(xi_sigma) with
/// xi_sigma(t) = (1 - t) pi(s_ik) + t pi(s_ij) pi(s_jk). The overall minus
/// comes from tau(ch) = -(1/2 pi i) int tau(Omega). Throws
/// SegmentNotInvertible naming the offending triangle.
SimplicialSum simplicial_pushforward(const SurfaceContext& ctx, const UnitaryTuple& t);

// ---------------------------------------------------------------------------
// Bundle-side checks

/// Projection e_pi at a barycentric point of a triangle, restricted to the
/// three vertices of that triangle: block (a, b) is
/// sqrt(chi_a chi_b) v_ab(x), size 3n.
TracialMatrix e_pi_at(const SimplexValues& values, const std::array<double, 3>& t,
                      const DualCellGeometry& geom = {});
TracialMatrix e_pi_at(const SurfaceContext& ctx, const UnitaryTuple& t, int triangle,
                      const std::array<double, 3>& point, const DualCellGeometry& geom = {});

struct BundleSample {
  int triangle = 0;
  std::array<double, 3> point{};
};

/// Deterministic sample points: uniform triangle, uniform barycentric point.
std::vector<BundleSample> bundle_samples(const SurfaceComplex& c, int count, std::uint64_t seed);

/// max ||e_pi^2 - e_pi|| over the samples.
double bundle_idempotency_residual(const SurfaceContext& ctx, const UnitaryTuple& t,
                                   const std::vector<BundleSample>& samples);

/// max |tr(chi(e_pi(x))) - n| over the samples. Requires the idempotency
/// residual to be below 1/4 (InvalidArgument otherwise).
double bundle_rank_check(const SurfaceContext& ctx, const UnitaryTuple& t,
                         const std::vector<BundleSample>& samples);

struct BoundaryIntegral {
  /// int over U_ik, oriented as part of the boundary of U_i, of
  /// tau(v_ki^-1 dv_ki).
  Complex oriented_integral;
  /// +1 when the orientation runs from the barycenter to the edge midpoint.
  int direction = 1;
  /// (-1)^s Delta(xi_sigma) in closed form (complex).
  Complex closed_form;
  /// |oriented_integral / (2 pi i) - closed_form|
  double residual = 0.0;
};

BoundaryIntegral boundary_integral_check(const SurfaceContext& ctx, const UnitaryTuple& t,
                                         int triangle, double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Full verification

struct VerifyOptions {
  double tol_sw = 1e-8;
  double tol_kw = 1e-6;
  double tol_quantization = 1e-8;
  double tol_boundary = 1e-9;
  double quadrature_tolerance = 1e-12;
  int bundle_sample_count = 100;
  std::uint64_t bundle_seed = 1;
  std::string family = "custom";
};

struct Verdict {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct InvariantReport {
  int genus = 1;
  int dim = 1;
  std::string family;
  double defect = 0.0;
  double winding = 0.0;  // W
  double simplicial = 0.0;  // S
  std::vector<SimplexTerm> terms;
  std::optional<KappaValue> kappa;
  /// Set when kappa could not be evaluated (genus 1 only).
  std::string kappa_error;
  MultiplicativityBound multiplicativity;
  double bundle_residual = 0.0;
  std::optional<double> bundle_rank_deviation;
  int bundle_samples = 0;
  double boundary_sum = 0.0;  // -(1/2 pi i) sum of oriented boundary integrals
  double boundary_residual = 0.0;  // max per-simplex residual
  std::vector<Verdict> verdicts;

  bool all_pass() const;
};

InvariantReport verify(const SurfaceContext& ctx, const UnitaryTuple& t,
                       const VerifyOptions& options = {});

}  // namespace qrep
