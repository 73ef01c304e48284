#include "qrep/ktheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qrep/error.hpp"
#include "qrep/random.hpp"

namespace qrep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kTwoPiI(0.0, kTwoPi);

// f(v) for a unitary (hence normal) v, through its Schur vectors.
struct SpectralCalculus {
  Matrix q;
  Eigen::VectorXcd eigenvalues;

  explicit SpectralCalculus(const TracialMatrix& v) {
    Eigen::ComplexSchur<Matrix> schur(v.entries());
    q = schur.matrixU();
    eigenvalues = schur.matrixT().diagonal();
  }

  template <typename F>
  Matrix apply(F&& f) const {
    Eigen::VectorXcd d(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      double t = std::arg(eigenvalues[i]) / kTwoPi;
      if (t < 0.0) t += 1.0;
      if (t >= 1.0) t -= 1.0;
      d[i] = f(t);
    }
    return q * d.asDiagonal() * q.adjoint();
  }
};

void require_unitary(const TracialMatrix& x, const char* name) {
  const double d = unitarity_defect(x);
  if (d > 1e-10) {
    throw Error(ErrorKind::NotUnitary,
                std::string(name) + " is not unitary (defect " + std::to_string(d) + ")");
  }
}

double real_trace(const TracialMatrix& m) { return normalized_trace(m).real() * m.dim(); }

}  // namespace

SurfaceContext make_surface_context(int genus) {
  SurfaceGroupData group = build_surface_group(genus);
  SurfaceComplex complex = build_complex(genus);
  EdgeLabeling labels = edge_labels(complex, group);
  std::vector<OrientedSimplex> signs = orientation_signs(complex);
  return {std::move(group), std::move(complex), std::move(labels), std::move(signs)};
}

ChordValues chord_functions(double t) {
  t -= std::floor(t);
  const double f = t <= 0.5 ? 2.0 * t : 2.0 - 2.0 * t;
  const double r = std::sqrt(std::max(f - f * f, 0.0));
  if (t <= 0.5) return {f, r, 0.0};
  return {f, 0.0, r};
}

BottProjectionData bott_projection(const TracialMatrix& u, const TracialMatrix& v) {
  if (u.dim() != v.dim()) throw Error(ErrorKind::DimensionMismatch, "u and v differ in size");
  require_unitary(u, "u");
  require_unitary(v, "v");
  const int n = u.dim();
  const SpectralCalculus calc(v);
  const Matrix f = calc.apply([](double t) { return Complex(chord_functions(t).f); });
  const Matrix g = calc.apply([](double t) { return Complex(chord_functions(t).g); });
  const Matrix h = calc.apply([](double t) { return Complex(chord_functions(t).h); });
  const Matrix& um = u.entries();

  Matrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = f;
  e.topRightCorner(n, n) = g + h * um.adjoint();
  e.bottomLeftCorner(n, n) = g + um * h;
  e.bottomRightCorner(n, n) = Matrix::Identity(n, n) - f;
  TracialMatrix proj(std::move(e));
  const double residual = operator_norm(proj * proj - proj);
  return {u, v, std::move(proj), residual};
}

KappaValue kappa_invariant(const TracialMatrix& u, const TracialMatrix& v) {
  const BottProjectionData data = bott_projection(u, v);
  const RieszProjector riesz = riesz_half_plane(data.e);
  if (riesz.gap <= 1e-6) {
    throw Error(ErrorKind::SpectralGapTooSmall,
                "e(u, v) has spectral gap " + std::to_string(riesz.gap) + " at Re z = 1/2");
  }
  KappaValue k;
  k.value = real_trace(riesz.projector) - u.dim();
  k.integer = static_cast<int>(std::lround(k.value));
  k.rounding_residual = std::abs(k.value - k.integer);
  k.gap = riesz.gap;
  k.idempotency_residual = data.idempotency_residual;
  return k;
}

SimplicialSum simplicial_pushforward(const SurfaceContext& ctx, const UnitaryTuple& t) {
  SimplicialSum sum;
  sum.terms.reserve(ctx.complex.triangles.size());
  for (const OrientedSimplex& os : ctx.signs) {
    const SimplexValues values = simplex_values(ctx.complex, ctx.labels, t, os.triangle);
    DhsValue d;
    try {
      d = dhs_linear(values.ik, values.product);
    } catch (const Error& e) {
      throw Error(e.kind(), "triangle " + std::to_string(os.triangle) + ": " + e.what());
    }
    SimplexTerm term;
    term.triangle = os.triangle;
    term.sign = os.sign;
    term.dhs = d.value;
    term.imaginary_residual = d.imaginary_residual;
    term.contribution = (os.sign == 0 ? -1.0 : 1.0) * d.value;
    sum.value += term.contribution;
    sum.terms.push_back(term);
  }
  return sum;
}

TracialMatrix e_pi_at(const SimplexValues& values, const std::array<double, 3>& t,
                      const DualCellGeometry& geom) {
  const int n = values.ij.dim();
  const std::array<double, 3> chi = geom.partition_of_unity(t);
  Matrix e = Matrix::Zero(3 * n, 3 * n);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double w = std::sqrt(chi[a] * chi[b]);
      if (w == 0.0) continue;
      if (a == b) {
        e.block(a * n, a * n, n, n) = w * Matrix::Identity(n, n);
      } else {
        e.block(a * n, b * n, n, n) = w * transition_at_point(values, a, b, t, geom).entries();
      }
    }
  }
  return TracialMatrix(std::move(e));
}

TracialMatrix e_pi_at(const SurfaceContext& ctx, const UnitaryTuple& t, int triangle,
                      const std::array<double, 3>& point, const DualCellGeometry& geom) {
  partition_of_unity_at(ctx.complex, triangle, point, geom);
  return e_pi_at(simplex_values(ctx.complex, ctx.labels, t, triangle), point, geom);
}

std::vector<BundleSample> bundle_samples(const SurfaceComplex& c, int count, std::uint64_t seed) {
  CounterRng rng(seed, 0x62756e646c65ULL);
  std::vector<BundleSample> out;
  out.reserve(std::max(count, 0));
  const auto triangles = static_cast<double>(c.triangles.size());
  for (int s = 0; s < count; ++s) {
    BundleSample sample;
    sample.triangle = std::min(static_cast<int>(uniform01(rng) * triangles),
                               static_cast<int>(c.triangles.size()) - 1);
    // Uniform on the simplex: normalized exponentials.
    double total = 0.0;
    for (double& x : sample.point) {
      x = -std::log(1.0 - uniform01(rng));
      total += x;
    }
    for (double& x : sample.point) x /= total;
    out.push_back(sample);
  }
  return out;
}

double bundle_idempotency_residual(const SurfaceContext& ctx, const UnitaryTuple& t,
                                   const std::vector<BundleSample>& samples) {
  double worst = 0.0;
  for (const BundleSample& s : samples) {
    const TracialMatrix e = e_pi_at(ctx, t, s.triangle, s.point);
    worst = std::max(worst, operator_norm(e * e - e));
  }
  return worst;
}

double bundle_rank_check(const SurfaceContext& ctx, const UnitaryTuple& t,
                         const std::vector<BundleSample>& samples) {
  const double residual = bundle_idempotency_residual(ctx, t, samples);
  if (!(residual < 0.25)) {
    throw Error(ErrorKind::InvalidArgument, "bundle idempotency residual " +
                                                std::to_string(residual) + " is not below 1/4");
  }
  double worst = 0.0;
  for (const BundleSample& s : samples) {
    const RieszProjector r = riesz_half_plane(e_pi_at(ctx, t, s.triangle, s.point));
    worst = std::max(worst, std::abs(real_trace(r.projector) - t.dim()));
  }
  return worst;
}

BoundaryIntegral boundary_integral_check(const SurfaceContext& ctx, const UnitaryTuple& t,
                                         int triangle, double tolerance) {
  const SurfaceTriangle& tri = ctx.complex.triangles.at(triangle);
  const SimplexValues values = simplex_values(ctx.complex, ctx.labels, t, triangle);
  const DualCellGeometry geom;

  const Point2& xi = tri.positions[0];
  const Point2 bary{(tri.positions[0].x + tri.positions[1].x + tri.positions[2].x) / 3.0,
                    (tri.positions[0].y + tri.positions[1].y + tri.positions[2].y) / 3.0};
  const Point2 mid{(tri.positions[0].x + tri.positions[2].x) / 2.0,
                   (tri.positions[0].y + tri.positions[2].y) / 2.0};
  const double cross =
      (bary.x - xi.x) * (mid.y - xi.y) - (bary.y - xi.y) * (mid.x - xi.x);

  BoundaryIntegral out;
  out.direction = cross > 0.0 ? 1 : -1;

  // v_ik(s) runs from pi(s_ik) at the midpoint (s = 0) to the product, reached
  // at s = 1 - 3 delta and held constant on the collar.
  const double knee = 1.0 - 3.0 * geom.dilation;
  const Matrix step = (values.product - values.ik).entries() / knee;
  auto integrand = [&](double s) {
    const TracialMatrix v = transition_at(values, 0, 2, s, geom);
    return -normalized_trace(TracialMatrix(step) * v.inverse());
  };
  // int_{midpoint -> barycenter} tau(v_ki^-1 dv_ki)
  const Complex toward_barycenter = adaptive_simpson(integrand, 0.0, knee, tolerance).first;
  out.oriented_integral = out.direction == 1 ? -toward_barycenter : toward_barycenter;

  Complex closed(0.0, 0.0);
  try {
    closed = normalized_trace(principal_log(values.product * values.ik.inverse())) / kTwoPiI;
  } catch (const Error& e) {
    throw Error(ErrorKind::SegmentNotInvertible,
                "triangle " + std::to_string(triangle) + ": " + e.what());
  }
  const int sign = ctx.signs.at(triangle).sign;
  out.closed_form = (sign == 0 ? 1.0 : -1.0) * closed;
  out.residual = std::abs(out.oriented_integral / kTwoPiI - out.closed_form);
  return out;
}

bool InvariantReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

InvariantReport verify(const SurfaceContext& ctx, const UnitaryTuple& t,
                       const VerifyOptions& options) {
  if (t.genus() != ctx.complex.genus) {
    throw Error(ErrorKind::GenusMismatch, "tuple genus " + std::to_string(t.genus()) +
                                              " does not match complex genus " +
                                              std::to_string(ctx.complex.genus));
  }
  InvariantReport r;
  r.genus = t.genus();
  r.dim = t.dim();
  r.family = options.family;
  r.defect = commutator_defect(t);
  r.winding = winding_invariant(t);

  SimplicialSum s = simplicial_pushforward(ctx, t);
  r.simplicial = s.value;
  r.terms = std::move(s.terms);

  if (t.genus() == 1) {
    try {
      r.kappa = kappa_invariant(t.u(1), t.v(1));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SpectralGapTooSmall) throw;
      r.kappa_error = e.what();
    }
  }
  r.multiplicativity = quasi_rep_defect_bound(ctx.group, r.defect);

  const auto samples = bundle_samples(ctx.complex, options.bundle_sample_count, options.bundle_seed);
  r.bundle_samples = static_cast<int>(samples.size());
  r.bundle_residual = bundle_idempotency_residual(ctx, t, samples);
  if (r.bundle_residual < 0.25) r.bundle_rank_deviation = bundle_rank_check(ctx, t, samples);

  Complex boundary(0.0, 0.0);
  for (std::size_t tri = 0; tri < ctx.complex.triangles.size(); ++tri) {
    const BoundaryIntegral b =
        boundary_integral_check(ctx, t, static_cast<int>(tri), options.quadrature_tolerance);
    boundary += b.oriented_integral;
    r.boundary_residual = std::max(r.boundary_residual, b.residual);
  }
  r.boundary_sum = (-boundary / kTwoPiI).real();

  const double scaled = r.dim * r.winding;
  auto add = [&](std::string name, double measured, double tol) {
    r.verdicts.push_back({std::move(name), measured <= tol, measured, tol});
  };
  add("main_equality", std::abs(r.simplicial - r.winding), options.tol_sw);
  if (r.kappa) {
    add("kappa_winding", std::abs(r.kappa->value - scaled), options.tol_kw);
  } else if (t.genus() == 1) {
    add("kappa_winding", std::numeric_limits<double>::infinity(), options.tol_kw);
  }
  add("quantization", std::abs(scaled - std::round(scaled)), options.tol_quantization);
  add("boundary_integral", r.boundary_residual, options.tol_boundary);
  return r;
}

}  // namespace qrep
