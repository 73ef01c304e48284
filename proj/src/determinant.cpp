#include "qrep/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qrep/error.hpp"

namespace qrep {

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};
constexpr long kMaxPanels = 1L << 20;

DhsValue from_contour(Complex integral, long panels) {
  const Complex v = integral / kTwoPiI;
  return {v.real(), std::abs(v.imag()), panels};
}

}  // namespace

MatrixPath MatrixPath::linear(TracialMatrix from, TracialMatrix to) {
  if (from.dim() != to.dim()) throw Error(ErrorKind::DimensionMismatch, "path endpoints differ in size");
  return MatrixPath(Linear{std::move(from), std::move(to)});
}

MatrixPath MatrixPath::sampled(std::vector<std::pair<double, TracialMatrix>> samples) {
  if (samples.size() < 2 || samples.front().first != 0.0 || samples.back().first != 1.0) {
    throw Error(ErrorKind::InvalidArgument, "sampled path needs samples at t = 0 and t = 1");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw Error(ErrorKind::InvalidArgument, "sample times must be strictly increasing");
    }
    if (samples[i].second.dim() != samples.front().second.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "samples differ in size");
    }
    Eigen::JacobiSVD<Matrix> svd(samples[i].second.entries());
    if (svd.singularValues().minCoeff() <= 1e-10) {
      throw Error(ErrorKind::SingularInput, "path sample " + std::to_string(i) + " is not invertible");
    }
  }
  return MatrixPath(Sampled{std::move(samples)});
}

MatrixPath MatrixPath::smooth(std::function<Matrix(double)> value,
                              std::function<Matrix(double)> derivative) {
  return MatrixPath(Smooth{std::move(value), std::move(derivative)});
}

int MatrixPath::dim() const {
  return static_cast<int>(value(0.0).rows());
}

Matrix MatrixPath::value(double t) const {
  if (const auto* lin = std::get_if<Linear>(&kind_)) {
    return (1.0 - t) * lin->from.entries() + t * lin->to.entries();
  }
  if (const auto* s = std::get_if<Sampled>(&kind_)) {
    const auto& smp = s->samples;
    auto it = std::upper_bound(smp.begin(), smp.end(), t,
                               [](double x, const auto& sample) { return x < sample.first; });
    if (it == smp.begin()) return smp.front().second.entries();
    if (it == smp.end()) return smp.back().second.entries();
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return (1.0 - w) * lo.second.entries() + w * hi.second.entries();
  }
  return std::get<Smooth>(kind_).value(t);
}

Matrix MatrixPath::derivative(double t) const {
  if (const auto* lin = std::get_if<Linear>(&kind_)) {
    return lin->to.entries() - lin->from.entries();
  }
  if (const auto* s = std::get_if<Sampled>(&kind_)) {
    // Centered difference of the interpolant: exact on each linear piece.
    const auto& smp = s->samples;
    auto it = std::upper_bound(smp.begin(), smp.end(), t,
                               [](double x, const auto& sample) { return x < sample.first; });
    if (it == smp.begin()) ++it;
    if (it == smp.end()) --it;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return (hi.second.entries() - lo.second.entries()) / (hi.first - lo.first);
  }
  return std::get<Smooth>(kind_).derivative(t);
}

Matrix MatrixPath::derivative_on_piece(std::size_t piece, double t) const {
  if (const auto* s = std::get_if<Sampled>(&kind_)) {
    const auto& lo = s->samples.at(piece);
    const auto& hi = s->samples.at(piece + 1);
    return (hi.second.entries() - lo.second.entries()) / (hi.first - lo.first);
  }
  return derivative(t);
}

std::vector<double> MatrixPath::breakpoints() const {
  if (const auto* s = std::get_if<Sampled>(&kind_)) {
    std::vector<double> out;
    for (const auto& smp : s->samples) out.push_back(smp.first);
    return out;
  }
  return {0.0, 1.0};
}

DhsValue dhs_linear(const TracialMatrix& a, const TracialMatrix& b) {
  const TracialMatrix ratio = b * a.inverse();
  TracialMatrix log_ratio = TracialMatrix::zero(a.dim());
  try {
    log_ratio = principal_log(ratio);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SpectrumOnBranchCut) throw;
    throw Error(ErrorKind::SegmentNotInvertible,
                std::string("segment (1-t)a + tb meets a singular matrix: ") + e.what() +
                    "; use dhs_quadrature on a deformed path");
  }
  return from_contour(normalized_trace(log_ratio), 0);
}

std::pair<Complex, long> adaptive_simpson(const std::function<Complex(double)>& f, double a,
                                          double b, double tolerance) {
  struct Panel {
    double a, b;
    Complex fa, fm, fb, whole;
    double tol;
  };
  auto simpson = [](double a, double b, Complex fa, Complex fm, Complex fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };

  // Start from a uniform grid so symmetric integrands cannot fake convergence.
  constexpr int kInitial = 8;
  std::vector<Panel> stack;
  for (int i = kInitial - 1; i >= 0; --i) {
    const double pa = a + (b - a) * i / kInitial;
    const double pb = a + (b - a) * (i + 1) / kInitial;
    const double pm = 0.5 * (pa + pb);
    const Complex fa = f(pa), fm = f(pm), fb = f(pb);
    stack.push_back({pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb), tolerance / kInitial});
  }

  Complex total = 0.0;
  long panels = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const Complex flm = f(lm), frm = f(rm);
    const Complex left = simpson(p.a, m, p.fa, flm, p.fm);
    const Complex right = simpson(m, p.b, p.fm, frm, p.fb);
    const Complex refined = left + right;
    const double err = std::abs(refined - p.whole) / 15.0;
    if (err <= p.tol || (p.b - p.a) < 1e-12) {
      total += refined + (refined - p.whole) / 15.0;
      panels += 2;
      if (panels > kMaxPanels) break;
      continue;
    }
    if (static_cast<long>(stack.size()) + panels > kMaxPanels) {
      panels = kMaxPanels + 1;
      break;
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol});
  }
  if (panels > kMaxPanels) {
    std::ostringstream os;
    os << "adaptive quadrature exceeded " << kMaxPanels << " panels at tolerance " << tolerance;
    throw Error(ErrorKind::QuadratureStall, os.str());
  }
  return {total, panels};
}

DhsValue dhs_quadrature(const MatrixPath& path, double tolerance) {
  auto integrand = [&path](std::size_t piece, double t) -> Complex {
    const Matrix x = path.value(t);
    Eigen::PartialPivLU<Matrix> lu(x);
    const Matrix y = lu.solve(path.derivative_on_piece(piece, t));
    return y.trace() / static_cast<double>(x.rows());
  };
  const auto breaks = path.breakpoints();
  Complex total = 0.0;
  long panels = 0;
  const double piece_tol = tolerance / static_cast<double>(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto piece = [&integrand, i](double t) { return integrand(i, t); };
    auto [value, used] = adaptive_simpson(piece, breaks[i], breaks[i + 1], piece_tol);
    total += value;
    panels += used;
  }
  return from_contour(total, panels);
}

double winding_invariant(const UnitaryTuple& t) {
  const TracialMatrix c = commutator_product(t);
  Eigen::ComplexEigenSolver<Matrix> eig(c.entries(), false);
  for (const Complex& lambda : eig.eigenvalues()) {
    if (std::abs(lambda + 1.0) < 1e-10) {
      std::ostringstream os;
      os << "commutator product has eigenvalue " << lambda << " at -1";
      throw Error(ErrorKind::BranchCutHit, os.str());
    }
  }
  const Complex w = normalized_trace(principal_log(c)) / kTwoPiI;
  if (std::abs(w.imag()) > 1e-12) {
    std::ostringstream os;
    os << "winding invariant has imaginary part " << w.imag();
    throw Error(ErrorKind::NotUnitary, os.str());
  }
  return w.real();
}

}  // namespace qrep
