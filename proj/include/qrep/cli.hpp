#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrep/error.hpp"
#include "qrep/ktheory.hpp"

namespace qrep {

struct ExperimentConfig {
  int genus = 1;
  std::string family = "clock-shift";  // clock-shift | twisted | perturbed | from-file
  int dim = 2;
  int p = 1;
  double magnitude = 0.05;
  std::uint64_t seed = 1;
  double tol_sw = 1e-8;
  double tol_kw = 1e-6;
  double quadrature_tolerance = 1e-12;
  /// u_1, v_1, ..., u_g, v_g for the from-file family.
  std::vector<std::string> matrices;
  std::string output;  // empty: stdout
};

/// Throws InvalidArgument for an inconsistent configuration.
void validate(const ExperimentConfig& config);

UnitaryTuple make_tuple(const ExperimentConfig& config);

/// Surface data for a genus, built once per process. Thread-safe.
const SurfaceContext& cached_context(int genus);

InvariantReport run(const ExperimentConfig& config);

/// JSON report with schema_version; numbers at 17 significant digits.
std::string report_document(const ExperimentConfig& config, const InvariantReport& report);
std::string error_document(ErrorKind kind, const std::string& message);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepGrid {
  ExperimentConfig base;
  std::vector<int> genera;
  std::vector<int> dims;
  std::vector<int> ps;
  std::vector<double> magnitudes;
  std::vector<std::uint64_t> seeds;
};

/// Cartesian product in the order genus, dim, p, magnitude, seed (last
/// varies fastest). Empty when any axis is empty.
std::vector<ExperimentConfig> expand(const SweepGrid& grid);

struct SweepRow {
  std::string text;  // CSV line including the newline
  bool pass = false;
};

struct SweepResult {
  std::string document;
  bool all_pass = true;
};

std::string sweep_header();
/// One CSV row; failures are reported in the error column.
SweepRow sweep_row(const ExperimentConfig& config);
/// Header plus rows in grid order, computed on `threads` workers.
SweepResult sweep(const SweepGrid& grid, int threads);

/// QREP_THREADS, defaulting to the hardware concurrency.
int threads_from_env();

// ---------------------------------------------------------------------------
// Matrix files: {"dim": n, "entries": [[re, im], ...]} in row-major order.

std::string matrix_document(const TracialMatrix& m);
/// Throws ParseError with field context.
TracialMatrix parse_matrix(const std::string& text, const std::string& source = "<string>");
TracialMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const TracialMatrix& m);

/// Entry point of the command-line tool; returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrep
