#include "qrep/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qrep/error.hpp"
#include "qrep/random.hpp"

namespace qrep {

namespace {

void check_letter(int genus, const Letter& l) {
  if (l.generator < 1 || l.generator > genus || (l.exponent != 1 && l.exponent != -1)) {
    std::ostringstream os;
    os << "letter (" << l.generator << ", " << l.exponent << ") invalid for genus " << genus;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

std::vector<Letter> concat(std::span<const Letter> a, std::span<const Letter> b) {
  std::vector<Letter> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

FreeWord reduce_word(int genus, std::span<const Letter> letters) {
  if (genus < 1) throw Error(ErrorKind::InvalidArgument, "genus must be >= 1");
  return FreeWord(genus, letters);
}

FreeWord::FreeWord(int genus, std::span<const Letter> letters) : genus_(genus) {
  // Stack-based cancellation.
  letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    check_letter(genus, l);
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

FreeWord FreeWord::alpha(int genus, int k, int exponent) {
  const Letter l{k, GeneratorKind::Alpha, exponent};
  return FreeWord(genus, std::span<const Letter>(&l, 1));
}

FreeWord FreeWord::beta(int genus, int k, int exponent) {
  const Letter l{k, GeneratorKind::Beta, exponent};
  return FreeWord(genus, std::span<const Letter>(&l, 1));
}

FreeWord FreeWord::inverse() const {
  std::vector<Letter> inv;
  inv.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) inv.push_back(it->inverse());
  return FreeWord(genus_, inv);
}

std::vector<int> FreeWord::abelianization() const {
  std::vector<int> sums(2 * genus_, 0);
  for (const Letter& l : letters_) {
    const int slot = 2 * (l.generator - 1) + (l.kind == GeneratorKind::Beta ? 1 : 0);
    sums[slot] += l.exponent;
  }
  return sums;
}

std::string FreeWord::to_string() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const Letter& l = letters_[i];
    if (i) os << ' ';
    os << (l.kind == GeneratorKind::Alpha ? 'a' : 'b') << l.generator;
    if (l.exponent < 0) os << "^-1";
  }
  return os.str();
}

FreeWord FreeWord::parse(int genus, const std::string& text) {
  std::istringstream is(text);
  std::vector<Letter> letters;
  std::string token;
  while (is >> token) {
    if (token == "1") continue;
    Letter l;
    if (token[0] == 'a') {
      l.kind = GeneratorKind::Alpha;
    } else if (token[0] == 'b') {
      l.kind = GeneratorKind::Beta;
    } else {
      throw Error(ErrorKind::ParseError, "bad generator token '" + token + "'");
    }
    std::string rest = token.substr(1);
    const auto caret = rest.find("^-1");
    if (caret != std::string::npos) {
      l.exponent = -1;
      rest = rest.substr(0, caret);
    }
    try {
      l.generator = std::stoi(rest);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad generator index in '" + token + "'");
    }
    letters.push_back(l);
  }
  return reduce_word(genus, letters);
}

FreeWord operator*(const FreeWord& lhs, const FreeWord& rhs) {
  if (lhs.genus_ != rhs.genus_) throw Error(ErrorKind::GenusMismatch, "word genus mismatch");
  return FreeWord(lhs.genus_, concat(lhs.letters_, rhs.letters_));
}

FreeWord commutator(const FreeWord& x, const FreeWord& y) {
  return x * y * x.inverse() * y.inverse();
}

// ---------------------------------------------------------------------------
// Surface group data

std::optional<FreeWord> SurfaceGroupData::section(const FreeWord& natural) const {
  for (const AlphabetEntry& e : alphabet)
    if (e.natural == natural) return e.section;
  // Names coinciding with an alphabet element under a different spelling
  // (a_1 = K_0 a_1, b_g = K_{g-1} a_g b_g a_g^-1) live in the families.
  for (const auto& family : families)
    for (const AlphabetEntry& e : family) {
      if (e.natural == natural) return e.section;
      if (e.natural.inverse() == natural) return e.section.inverse();
    }
  return std::nullopt;
}

namespace {

int count_multiplicative_pairs(const SurfaceGroupData& sg, int* pairs) {
  int worst = 0;
  int found = 0;
  for (const AlphabetEntry& x : sg.alphabet) {
    for (const AlphabetEntry& y : sg.alphabet) {
      const FreeWord xy = x.section * y.section;
      for (const AlphabetEntry& z : sg.alphabet) {
        const FreeWord defect = xy * z.section.inverse();
        const auto ab = defect.abelianization();
        if (std::any_of(ab.begin(), ab.end(), [](int c) { return c != 0; })) continue;
        if (auto count = relator_conjugate_count(defect)) {
          ++found;
          worst = std::max(worst, *count);
          break;  // z is unique in Gamma_g
        }
      }
    }
  }
  if (pairs) *pairs = found;
  return worst;
}

}  // namespace

SurfaceGroupData build_surface_group(int genus) {
  if (genus < 1) throw Error(ErrorKind::InvalidArgument, "genus must be >= 1");
  SurfaceGroupData sg;
  sg.genus = genus;
  sg.kappa.push_back(FreeWord(genus));
  for (int k = 1; k <= genus; ++k) {
    sg.kappa.push_back(sg.kappa.back() *
                       commutator(FreeWord::alpha(genus, k), FreeWord::beta(genus, k)));
  }

  for (int k = 1; k <= genus; ++k) {
    const FreeWord a = FreeWord::alpha(genus, k);
    const FreeWord b = FreeWord::beta(genus, k);
    const FreeWord& kap = sg.kappa[k - 1];
    const std::string ks = "K" + std::to_string(k - 1);
    const std::string as = "a" + std::to_string(k);
    const std::string bs = "b" + std::to_string(k);
    std::vector<AlphabetEntry> family = {
        {as + "^-1", a.inverse(), a.inverse()},
        {bs + "^-1", b.inverse(), b.inverse()},
        {ks, kap, kap},
        {ks + " " + as, kap * a, kap * a},
        {ks + " " + as + " " + bs, kap * a * b, kap * a * b},
        {ks + " " + as + " " + bs + " " + as + "^-1", kap * a * b * a.inverse(),
         // K_{g-1} a_g b_g a_g^-1 equals b_g in Gamma_g; s0 sends it to b_g.
         k == genus ? b : kap * a * b * a.inverse()},
    };
    sg.families.push_back(std::move(family));
  }

  auto add = [&sg](const AlphabetEntry& e) {
    for (const AlphabetEntry& existing : sg.alphabet)
      if (existing.section == e.section) return;
    sg.alphabet.push_back(e);
  };
  for (const auto& family : sg.families)
    for (const AlphabetEntry& e : family) add(e);
  for (const auto& family : sg.families)
    for (const AlphabetEntry& e : family)
      add({"(" + e.name + ")^-1", e.natural.inverse(), e.section.inverse()});

  sg.multiplicativity = count_multiplicative_pairs(sg, &sg.multiplicative_pairs);
  return sg;
}

// ---------------------------------------------------------------------------
// Relator decomposition

std::optional<int> relator_conjugate_count(const FreeWord& word) {
  const int genus = word.genus();
  const std::size_t rel_len = 4 * static_cast<std::size_t>(genus);
  FreeWord kappa(genus);
  for (int k = 1; k <= genus; ++k)
    kappa = kappa * commutator(FreeWord::alpha(genus, k), FreeWord::beta(genus, k));

  std::vector<std::vector<Letter>> rotations;
  for (const FreeWord& r : {kappa, kappa.inverse()}) {
    const auto& l = r.letters();
    for (std::size_t s = 0; s < rel_len; ++s) {
      std::vector<Letter> rot(l.begin() + s, l.end());
      rot.insert(rot.end(), l.begin(), l.begin() + s);
      rotations.push_back(std::move(rot));
    }
  }

  std::vector<Letter> w = word.letters();
  int count = 0;
  constexpr int kMaxSteps = 64;
  for (int step = 0; step < kMaxSteps; ++step) {
    if (w.empty()) return count;
    std::size_t best_len = 0, best_pos = 0, best_rot = 0;
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      for (std::size_t r = 0; r < rotations.size(); ++r) {
        std::size_t len = 0;
        while (len < rel_len && pos + len < w.size() && w[pos + len] == rotations[r][len]) ++len;
        if (len > best_len) {
          best_len = len;
          best_pos = pos;
          best_rot = r;
        }
      }
    }
    if (2 * best_len < rel_len) return std::nullopt;
    // w = x r1 y with r1 r2 a relator rotation; x r1 y = (x r1 r2 x^-1) x r2^-1 y.
    std::vector<Letter> next(w.begin(), w.begin() + best_pos);
    const auto& rot = rotations[best_rot];
    for (std::size_t i = rel_len; i > best_len; --i) next.push_back(rot[i - 1].inverse());
    next.insert(next.end(), w.begin() + best_pos + best_len, w.end());
    w = reduce_word(genus, next).letters();
    ++count;
  }
  return std::nullopt;
}

MultiplicativityBound quasi_rep_defect_bound(const SurfaceGroupData& sg, double defect) {
  return {sg.multiplicativity, sg.multiplicativity * defect};
}

// ---------------------------------------------------------------------------
// Unitary tuples

UnitaryTuple::UnitaryTuple(int genus, std::vector<TracialMatrix> unitaries)
    : genus_(genus), unitaries_(std::move(unitaries)) {
  if (genus < 1 || unitaries_.size() != static_cast<std::size_t>(2 * genus)) {
    throw Error(ErrorKind::InvalidArgument, "a genus-g tuple needs exactly 2g unitaries");
  }
  const int n = unitaries_.front().dim();
  for (std::size_t i = 0; i < unitaries_.size(); ++i) {
    if (unitaries_[i].dim() != n) {
      throw Error(ErrorKind::DimensionMismatch, "tuple entries have different dimensions");
    }
    const double d = unitarity_defect(unitaries_[i]);
    if (d > 1e-12) {
      std::ostringstream os;
      os << "tuple entry " << i << " is not unitary (||x*x - 1|| = " << d << ")";
      throw Error(ErrorKind::NotUnitary, os.str());
    }
  }
}

TracialMatrix evaluate_word(const UnitaryTuple& t, const FreeWord& w) {
  if (w.genus() != t.genus()) {
    std::ostringstream os;
    os << "word of genus " << w.genus() << " evaluated on tuple of genus " << t.genus();
    throw Error(ErrorKind::GenusMismatch, os.str());
  }
  Matrix acc = Matrix::Identity(t.dim(), t.dim());
  for (const Letter& l : w.letters()) {
    const TracialMatrix& x = l.kind == GeneratorKind::Alpha ? t.u(l.generator) : t.v(l.generator);
    if (l.exponent > 0) {
      acc = acc * x.entries();
    } else {
      acc = acc * x.entries().adjoint();
    }
  }
  return TracialMatrix(std::move(acc));
}

TracialMatrix commutator_product(const UnitaryTuple& t) {
  Matrix acc = Matrix::Identity(t.dim(), t.dim());
  for (int k = 1; k <= t.genus(); ++k) {
    const Matrix& u = t.u(k).entries();
    const Matrix& v = t.v(k).entries();
    acc = acc * u * v * u.adjoint() * v.adjoint();
  }
  return TracialMatrix(std::move(acc));
}

double commutator_defect(const UnitaryTuple& t) {
  return operator_norm(commutator_product(t) - TracialMatrix::identity(t.dim()));
}

UnitaryTuple clock_shift_tuple(int n, int p) {
  if (n < 2) {
    throw Error(ErrorKind::DimensionTooSmall,
                "clock/shift needs n >= 2, got " + std::to_string(n));
  }
  Eigen::VectorXcd phases(n);
  for (int j = 0; j < n; ++j) {
    // Reduce j p mod n first so the phases are exact roots of unity.
    const long long r = ((static_cast<long long>(j) * p) % n + n) % n;
    phases(j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
  }
  Matrix shift = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) shift((j + n - 1) % n, j) = 1.0;
  return UnitaryTuple(1, {TracialMatrix::diagonal(phases), TracialMatrix(shift)});
}

UnitaryTuple twisted_genus_tuple(int genus, int n, int p) {
  if (genus < 1) throw Error(ErrorKind::InvalidArgument, "genus must be >= 1");
  const UnitaryTuple base = clock_shift_tuple(n, p);
  std::vector<TracialMatrix> entries = base.unitaries();
  for (int k = 2; k <= genus; ++k) {
    entries.push_back(TracialMatrix::identity(n));
    entries.push_back(TracialMatrix::identity(n));
  }
  return UnitaryTuple(genus, std::move(entries));
}

UnitaryTuple identity_tuple(int genus, int n) {
  std::vector<TracialMatrix> entries(2 * genus, TracialMatrix::identity(n));
  return UnitaryTuple(genus, std::move(entries));
}

UnitaryTuple perturbed_commuting_tuple(int genus, int n, double magnitude, std::uint64_t seed) {
  if (genus < 1 || n < 1) throw Error(ErrorKind::InvalidArgument, "genus and n must be >= 1");
  if (!(magnitude >= 0.0 && magnitude <= 0.2)) {
    throw Error(ErrorKind::InvalidArgument, "perturbation magnitude must lie in [0, 0.2]");
  }
  std::vector<TracialMatrix> entries;
  for (int i = 0; i < 2 * genus; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    Eigen::VectorXcd phases(n);
    for (int j = 0; j < n; ++j) phases(j) = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
    Matrix x = phases.asDiagonal();
    if (magnitude > 0.0) {
      Matrix h = random_hermitian(n, rng);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
      const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
      h *= magnitude / norm;
      const Matrix noise = matrix_exp(TracialMatrix(Complex(0.0, 1.0) * h)).entries();
      x = polar_unitary(TracialMatrix(x * noise)).entries();
    }
    entries.emplace_back(std::move(x));
  }
  return UnitaryTuple(genus, std::move(entries));
}

UnitaryTuple conjugate_tuple(const UnitaryTuple& t, const TracialMatrix& w) {
  std::vector<TracialMatrix> entries;
  const TracialMatrix w_adj = w.adjoint();
  for (const TracialMatrix& x : t.unitaries()) entries.push_back(w * x * w_adj);
  return UnitaryTuple(t.genus(), std::move(entries));
}

}  // namespace qrep
