#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "qrep/groups.hpp"
#include "qrep/matcore.hpp"

namespace qrep {

/// A path xi: [0, 1] -> GL_n(C).
class MatrixPath {
 public:
  struct Linear {
    TracialMatrix from;
    TracialMatrix to;
  };
  /// Piecewise-linear interpolation of samples at strictly increasing times
  /// 0 = t_0 < ... < t_m = 1.
  struct Sampled {
    std::vector<std::pair<double, TracialMatrix>> samples;
  };
  /// A smooth path given by its value and derivative.
  struct Smooth {
    std::function<Matrix(double)> value;
    std::function<Matrix(double)> derivative;
  };

  static MatrixPath linear(TracialMatrix from, TracialMatrix to);
  /// Throws InvalidArgument on bad times, SingularInput when a sample has
  /// smallest singular value <= 1e-10.
  static MatrixPath sampled(std::vector<std::pair<double, TracialMatrix>> samples);
  static MatrixPath smooth(std::function<Matrix(double)> value,
                           std::function<Matrix(double)> derivative);

  int dim() const;
  Matrix value(double t) const;
  Matrix derivative(double t) const;
  /// Derivative restricted to the piece [breakpoints()[piece],
  /// breakpoints()[piece + 1]], i.e. the one-sided value at its ends.
  Matrix derivative_on_piece(std::size_t piece, double t) const;
  /// Points where the derivative may jump (sample times), including 0 and 1.
  std::vector<double> breakpoints() const;

 private:
  explicit MatrixPath(std::variant<Linear, Sampled, Smooth> kind) : kind_(std::move(kind)) {}
  std::variant<Linear, Sampled, Smooth> kind_;
};

/// Value of the de la Harpe-Skandalis functional (1/2 pi i) int tau(xi' xi^-1).
/// `value` is the real part; `imaginary_residual` the discarded imaginary part.
struct DhsValue {
  double value = 0.0;
  double imaginary_residual = 0.0;
  /// Panels used by quadrature (0 for closed forms).
  long panels = 0;
};

/// Closed form for the segment xi(t) = (1 - t) a + t b:
/// (1/2 pi i) tau(log(b a^-1)). The segment is invertible exactly when
/// b a^-1 has no eigenvalue on (-inf, 0]; otherwise SegmentNotInvertible.
DhsValue dhs_linear(const TracialMatrix& a, const TracialMatrix& b);

/// Adaptive Simpson quadrature of tau(xi' xi^-1) to absolute `tolerance`.
/// Throws QuadratureStall beyond 2^20 panels.
DhsValue dhs_quadrature(const MatrixPath& path, double tolerance = 1e-10);

/// Adaptive Simpson on [a, b] of a complex scalar integrand; shared with the
/// boundary-integral checks.
std::pair<Complex, long> adaptive_simpson(const std::function<Complex(double)>& f, double a,
                                          double b, double tolerance);

/// (1/2 pi i) tau(log prod_i [u_i, v_i]). Throws BranchCutHit when the
/// product has an eigenvalue within 1e-10 of -1.
double winding_invariant(const UnitaryTuple& t);

}  // namespace qrep
