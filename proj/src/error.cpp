#include "qrep/error.hpp"

namespace qrep {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SpectrumOnBranchCut: return "SpectrumOnBranchCut";
    case ErrorKind::SpectralGapTooSmall: return "SpectralGapTooSmall";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::GenusMismatch: return "GenusMismatch";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::UnclassifiedEdge: return "UnclassifiedEdge";
    case ErrorKind::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorKind::NotAnEdge: return "NotAnEdge";
    case ErrorKind::SegmentNotInvertible: return "SegmentNotInvertible";
    case ErrorKind::QuadratureStall: return "QuadratureStall";
    case ErrorKind::BranchCutHit: return "BranchCutHit";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qrep
