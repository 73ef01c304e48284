#include "qrep/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace qrep {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// nlohmann's dump uses shortest round-trip digits; reports want a fixed 17.
void write_json(std::ostream& os, const Json& j, int indent) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(key).dump() << ": ";
        write_json(os, value, indent + 2);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Short numeric arrays (complex entries) stay on one line.
      const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const Json& x) {
                          return x.is_number();
                        });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], 0);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string to_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j, 0);
  os << "\n";
  return os.str();
}

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (c.genus < 1) fail("genus must be positive");
  if (c.family == "clock-shift") {
    if (c.genus != 1) fail("clock-shift family is genus 1; use twisted for higher genus");
  } else if (c.family == "twisted" || c.family == "perturbed") {
  } else if (c.family == "from-file") {
    if (c.matrices.size() != static_cast<std::size_t>(2 * c.genus)) {
      fail("from-file family needs " + std::to_string(2 * c.genus) + " matrix paths, got " +
           std::to_string(c.matrices.size()));
    }
  } else {
    fail("unknown family '" + c.family + "'");
  }
  if (c.family != "from-file" && c.dim < 1) fail("dim must be positive");
  if (!(c.tol_sw > 0.0 && c.tol_kw > 0.0 && c.quadrature_tolerance > 0.0)) {
    fail("tolerances must be positive");
  }
}

UnitaryTuple make_tuple(const ExperimentConfig& c) {
  validate(c);
  if (c.family == "clock-shift") return clock_shift_tuple(c.dim, c.p);
  if (c.family == "twisted") return twisted_genus_tuple(c.genus, c.dim, c.p);
  if (c.family == "perturbed") return perturbed_commuting_tuple(c.genus, c.dim, c.magnitude, c.seed);
  std::vector<TracialMatrix> entries;
  for (const std::string& path : c.matrices) {
    entries.push_back(read_matrix(path));
    if (entries.back().dim() != entries.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  path + " has dim " + std::to_string(entries.back().dim()) + ", expected " +
                      std::to_string(entries.front().dim()));
    }
  }
  return UnitaryTuple(c.genus, std::move(entries));
}

const SurfaceContext& cached_context(int genus) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<SurfaceContext>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[genus];
  if (!slot) slot = std::make_unique<SurfaceContext>(make_surface_context(genus));
  return *slot;
}

InvariantReport run(const ExperimentConfig& c) {
  const UnitaryTuple t = make_tuple(c);
  VerifyOptions options;
  options.tol_sw = c.tol_sw;
  options.tol_kw = c.tol_kw;
  options.quadrature_tolerance = c.quadrature_tolerance;
  options.family = c.family;
  return verify(cached_context(t.genus()), t, options);
}

std::string report_document(const ExperimentConfig& c, const InvariantReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["status"] = r.all_pass() ? "pass" : "fail";
  Json config;
  config["genus"] = c.genus;
  config["family"] = c.family;
  config["dim"] = r.dim;
  if (c.family == "clock-shift" || c.family == "twisted") config["p"] = c.p;
  if (c.family == "perturbed") {
    config["magnitude"] = c.magnitude;
    config["seed"] = c.seed;
  }
  if (c.family == "from-file") config["matrices"] = c.matrices;
  j["config"] = config;

  j["defect"] = r.defect;
  j["winding"] = r.winding;
  j["dim_winding"] = r.dim * r.winding;
  j["simplicial"] = r.simplicial;
  if (r.genus == 1) {
    Json k;
    if (r.kappa) {
      k["value"] = r.kappa->value;
      k["integer"] = r.kappa->integer;
      k["rounding_residual"] = r.kappa->rounding_residual;
      k["spectral_gap"] = r.kappa->gap;
      k["idempotency_residual"] = r.kappa->idempotency_residual;
    } else {
      k["error"] = r.kappa_error;
    }
    j["kappa"] = k;
  }
  j["multiplicativity"] = {{"constant", r.multiplicativity.constant},
                           {"bound", r.multiplicativity.bound}};
  Json bundle;
  bundle["samples"] = r.bundle_samples;
  bundle["idempotency_residual"] = r.bundle_residual;
  bundle["rank_deviation"] =
      r.bundle_rank_deviation ? Json(*r.bundle_rank_deviation) : Json(nullptr);
  j["bundle"] = bundle;
  j["boundary"] = {{"simplicial_from_integrals", r.boundary_sum},
                   {"max_residual", r.boundary_residual}};

  Json terms = Json::array();
  for (const SimplexTerm& t : r.terms) {
    terms.push_back({{"triangle", t.triangle},
                     {"sign", t.sign},
                     {"dhs", t.dhs},
                     {"imaginary_residual", t.imaginary_residual},
                     {"contribution", t.contribution}});
  }
  j["terms"] = terms;

  Json verdicts = Json::array();
  for (const Verdict& v : r.verdicts) {
    verdicts.push_back({{"name", v.name},
                        {"pass", v.pass},
                        {"measured", nullable(v.measured)},
                        {"tolerance", v.tolerance}});
  }
  j["verdicts"] = verdicts;
  return to_text(j);
}

std::string error_document(ErrorKind kind, const std::string& message) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["status"] = "error";
  j["error"] = {{"kind", std::string(to_string(kind))}, {"message", message}};
  return to_text(j);
}

std::vector<ExperimentConfig> expand(const SweepGrid& g) {
  std::vector<ExperimentConfig> out;
  for (int genus : g.genera)
    for (int dim : g.dims)
      for (int p : g.ps)
        for (double m : g.magnitudes)
          for (std::uint64_t seed : g.seeds) {
            ExperimentConfig c = g.base;
            c.genus = genus;
            c.dim = dim;
            c.p = p;
            c.magnitude = m;
            c.seed = seed;
            out.push_back(std::move(c));
          }
  return out;
}

std::string sweep_header() {
  return "genus,dim,p,magnitude,seed,defect,W,S,kappa,kappa_int,bundle_residual,"
         "boundary_residual,main_equality,kappa_winding,quantization,boundary_integral,pass,"
         "error\n";
}

SweepRow sweep_row(const ExperimentConfig& c) {
  std::ostringstream os;
  bool pass = false;
  os << c.genus << ',' << c.dim << ',' << c.p << ',' << format_double(c.magnitude) << ','
     << c.seed << ',';
  try {
    const InvariantReport r = run(c);
    auto verdict = [&](const std::string& name) -> std::string {
      for (const Verdict& v : r.verdicts) {
        if (v.name == name) return v.pass ? "1" : "0";
      }
      return "";
    };
    os << format_double(r.defect) << ',' << format_double(r.winding) << ','
       << format_double(r.simplicial) << ',';
    if (r.kappa) {
      os << format_double(r.kappa->value) << ',' << r.kappa->integer << ',';
    } else {
      os << ",,";
    }
    os << format_double(r.bundle_residual) << ',' << format_double(r.boundary_residual) << ','
       << verdict("main_equality") << ',' << verdict("kappa_winding") << ','
       << verdict("quantization") << ',' << verdict("boundary_integral") << ','
       << (r.all_pass() ? 1 : 0) << ',' << csv_escape(r.kappa_error) << '\n';
    pass = r.all_pass();
  } catch (const Error& e) {
    os << ",,,,,,,,,,,0," << csv_escape(std::string(to_string(e.kind())) + ": " + e.what())
       << '\n';
  }
  return {os.str(), pass};
}

SweepResult sweep(const SweepGrid& grid, int threads) {
  const std::vector<ExperimentConfig> cases = expand(grid);
  std::vector<SweepRow> rows(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) rows[i] = sweep_row(cases[i]);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  SweepResult out{sweep_header(), true};
  for (const SweepRow& r : rows) {
    out.document += r.text;
    out.all_pass = out.all_pass && r.pass;
  }
  return out;
}

int threads_from_env() {
  if (const char* s = std::getenv("QREP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string matrix_document(const TracialMatrix& m) {
  Json j;
  j["dim"] = m.dim();
  Json entries = Json::array();
  for (int r = 0; r < m.dim(); ++r) {
    for (int c = 0; c < m.dim(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  j["entries"] = entries;
  return to_text(j);
}

TracialMatrix parse_matrix(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, source + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw Error(ErrorKind::ParseError, source + ": field 'dim' missing or not an integer");
  }
  const long long dim = j["dim"].get<long long>();
  if (dim < 1 || dim > 4096) {
    throw Error(ErrorKind::ParseError, source + ": field 'dim' out of range");
  }
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw Error(ErrorKind::ParseError, source + ": field 'entries' missing or not a list");
  }
  const Json& entries = j["entries"];
  if (entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw Error(ErrorKind::ParseError, source + ": 'entries' has " +
                                           std::to_string(entries.size()) + " items, expected " +
                                           std::to_string(dim * dim) + " (dim^2)");
  }
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& e = entries[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorKind::ParseError,
                  source + ": entries[" + std::to_string(i) + "] is not a [re, im] pair");
    }
    m(static_cast<Eigen::Index>(i) / dim, static_cast<Eigen::Index>(i) % dim) =
        Complex(e[0].get<double>(), e[1].get<double>());
  }
  return TracialMatrix(std::move(m));
}

TracialMatrix read_matrix(const std::string& path) { return parse_matrix(read_file(path), path); }

void write_matrix(const std::string& path, const TracialMatrix& m) {
  write_file(path, matrix_document(m));
}

namespace {

// "a:b" expands to a..b inclusive.
std::vector<int> expand_ints(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (const std::string& t : tokens) {
    const auto colon = t.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoi(t));
      } else {
        const int lo = std::stoi(t.substr(0, colon));
        const int hi = std::stoi(t.substr(colon + 1));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad integer list item '" + t + "'");
    }
  }
  return out;
}

// "a:b:step" expands to a, a + step, ... <= b (with slack for rounding).
std::vector<double> expand_doubles(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const std::string& t : tokens) {
    try {
      const auto c1 = t.find(':');
      if (c1 == std::string::npos) {
        out.push_back(std::stod(t));
        continue;
      }
      const auto c2 = t.find(':', c1 + 1);
      if (c2 == std::string::npos) throw std::invalid_argument("range needs a step");
      const double lo = std::stod(t.substr(0, c1));
      const double hi = std::stod(t.substr(c1 + 1, c2 - c1 - 1));
      const double step = std::stod(t.substr(c2 + 1));
      if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
      const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
      for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad number list item '" + t + "'");
    }
  }
  return out;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

void add_common(CLI::App* cmd, ExperimentConfig& c) {
  cmd->add_option("--family", c.family, "clock-shift | twisted | perturbed | from-file")
      ->check(CLI::IsMember({"clock-shift", "twisted", "perturbed", "from-file"}));
  cmd->add_option("--tol-sw", c.tol_sw, "tolerance for |S - W|");
  cmd->add_option("--tol-kw", c.tol_kw, "tolerance for |kappa - dim W|");
  cmd->add_option("--quad-tol", c.quadrature_tolerance, "boundary quadrature tolerance");
  cmd->add_option("-o,--output", c.output, "output path (default stdout)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-representation invariants of surface groups"};
  app.require_subcommand(1);

  ExperimentConfig config;
  CLI::App* run_cmd = app.add_subcommand("run", "evaluate W, S and kappa for one tuple");
  add_common(run_cmd, config);
  run_cmd->add_option("--genus", config.genus)->check(CLI::PositiveNumber);
  run_cmd->add_option("--dim", config.dim);
  run_cmd->add_option("--p", config.p);
  run_cmd->add_option("--magnitude", config.magnitude);
  run_cmd->add_option("--seed", config.seed);
  run_cmd->add_option("--matrices", config.matrices, "u_1 v_1 ... u_g v_g matrix files");

  SweepGrid grid;
  std::vector<std::string> genera{"1"}, dims, ps{"1"}, magnitudes{"0.05"}, seeds{"1"};
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "CSV table over a parameter grid");
  add_common(sweep_cmd, grid.base);
  sweep_cmd->add_option("--genus", genera, "values or a:b ranges");
  sweep_cmd->add_option("--dims", dims, "values or a:b ranges")->expected(0, -1);
  sweep_cmd->add_option("--ps", ps, "values or a:b ranges")->expected(0, -1);
  sweep_cmd->add_option("--magnitudes", magnitudes, "values or a:b:step ranges")
      ->expected(0, -1);
  sweep_cmd->add_option("--seeds", seeds, "values or a:b ranges")->expected(0, -1);

  int export_genus = 1;
  std::string export_output;
  CLI::App* export_cmd = app.add_subcommand("export-complex", "dump the labelled triangulation");
  export_cmd->add_option("--genus", export_genus)->check(CLI::PositiveNumber);
  export_cmd->add_option("-o,--output", export_output);

  std::string matrix_family = "clock";
  int matrix_dim = 2, matrix_p = 1;
  std::string matrix_output;
  CLI::App* matrix_cmd = app.add_subcommand("write-matrix", "write a clock or shift matrix file");
  matrix_cmd->add_option("kind", matrix_family)->check(CLI::IsMember({"clock", "shift"}));
  matrix_cmd->add_option("--dim", matrix_dim);
  matrix_cmd->add_option("--p", matrix_p);
  matrix_cmd->add_option("-o,--output", matrix_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_document(ErrorKind::InvalidArgument, e.what());
    return 1;
  }

  try {
    if (*run_cmd) {
      const InvariantReport report = run(config);
      emit(config.output, report_document(config, report), out);
      return report.all_pass() ? 0 : 1;
    }
    if (*sweep_cmd) {
      grid.genera = expand_ints(genera);
      grid.dims = expand_ints(dims);
      grid.ps = expand_ints(ps);
      grid.magnitudes = expand_doubles(magnitudes);
      for (int s : expand_ints(seeds)) grid.seeds.push_back(static_cast<std::uint64_t>(s));
      const SweepResult result = sweep(grid, threads_from_env());
      emit(grid.base.output, result.document, out);
      return result.all_pass ? 0 : 1;
    }
    if (*export_cmd) {
      const SurfaceContext& ctx = cached_context(export_genus);
      emit(export_output, export_complex(ctx.complex, ctx.labels, ctx.signs), out);
      return 0;
    }
    if (*matrix_cmd) {
      const UnitaryTuple t = clock_shift_tuple(matrix_dim, matrix_p);
      const TracialMatrix& m = matrix_family == "clock" ? t.u(1) : t.v(1);
      emit(matrix_output, matrix_document(m), out);
      return 0;
    }
  } catch (const Error& e) {
    err << error_document(e.kind(), e.what());
    return 1;
  }
  return 1;
}

}  // namespace qrep
