#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrep {

enum class ErrorKind {
  SpectrumOnBranchCut,
  SpectralGapTooSmall,
  SingularInput,
  GenusMismatch,
  DimensionTooSmall,
  UnclassifiedEdge,
  DegenerateEmbedding,
  NotAnEdge,
  SegmentNotInvertible,
  QuadratureStall,
  BranchCutHit,
  NotUnitary,
  InvalidArgument,
  ParseError,
  DimensionMismatch,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. `kind()` is the
/// machine-readable tag written into CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qrep
