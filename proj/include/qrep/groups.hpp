#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrep/matcore.hpp"

namespace qrep {

enum class GeneratorKind : std::uint8_t { Alpha, Beta };

/// One letter of a word in the free group on alpha_1, beta_1, ..., alpha_g,
/// beta_g. `generator` is 1-based.
struct Letter {
  int generator = 1;
  GeneratorKind kind = GeneratorKind::Alpha;
  int exponent = 1;  // +1 or -1

  Letter inverse() const { return {generator, kind, -exponent}; }
  bool operator==(const Letter&) const = default;
};

/// A freely reduced word in F_{2g}. Construction always reduces, so two
/// FreeWords are equal as group elements iff they compare equal.
class FreeWord {
 public:
  explicit FreeWord(int genus) : genus_(genus) {}
  FreeWord(int genus, std::span<const Letter> letters);

  static FreeWord alpha(int genus, int k, int exponent = 1);
  static FreeWord beta(int genus, int k, int exponent = 1);

  int genus() const { return genus_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  FreeWord inverse() const;
  /// Exponent sums (alpha_1, beta_1, ..., alpha_g, beta_g).
  std::vector<int> abelianization() const;

  /// "1" for the identity, otherwise letters like "a1 b2^-1".
  std::string to_string() const;
  static FreeWord parse(int genus, const std::string& text);

  friend FreeWord operator*(const FreeWord& lhs, const FreeWord& rhs);
  bool operator==(const FreeWord&) const = default;

 private:
  int genus_;
  std::vector<Letter> letters_;
};

/// Free reduction of an arbitrary letter sequence.
FreeWord reduce_word(int genus, std::span<const Letter> letters);

/// [x, y] = x y x^-1 y^-1.
FreeWord commutator(const FreeWord& x, const FreeWord& y);

/// One element of the label alphabet: the word naming a group element of
/// Gamma_g and its image under the section s_0.
struct AlphabetEntry {
  std::string name;
  FreeWord natural;
  FreeWord section;
};

/// Presentation data of the surface group Gamma_g = <alpha_i, beta_i |
/// prod [alpha_i, beta_i]> together with the finite set of group elements
/// that occur as edge labels.
struct SurfaceGroupData {
  int genus = 1;
  /// kappa[k] = [a1, b1] ... [ak, bk] for k = 0..g.
  std::vector<FreeWord> kappa;
  /// families[k-1] lists, in order: a_k^-1, b_k^-1, K, K a_k, K a_k b_k,
  /// K a_k b_k a_k^-1 with K = kappa_{k-1}.
  std::vector<std::vector<AlphabetEntry>> families;
  /// Distinct group elements of all families and their inverses.
  std::vector<AlphabetEntry> alphabet;
  /// Constant M: largest number of relator conjugates in
  /// s0(g) s0(g') s0(g g')^-1 over alphabet pairs with g g' in the alphabet.
  int multiplicativity = 0;
  /// Number of such pairs found.
  int multiplicative_pairs = 0;

  /// s_0 image of the group element named by `natural`, if it belongs to the
  /// alphabet.
  std::optional<FreeWord> section(const FreeWord& natural) const;
};

SurfaceGroupData build_surface_group(int genus);

/// Quasi-representation data: unitaries (u_1, v_1, ..., u_g, v_g).
class UnitaryTuple {
 public:
  /// Throws NotUnitary if any entry has ||x* x - 1|| > 1e-12, and
  /// InvalidArgument on size or dimension mismatch.
  UnitaryTuple(int genus, std::vector<TracialMatrix> unitaries);

  int genus() const { return genus_; }
  int dim() const { return unitaries_.front().dim(); }
  const TracialMatrix& u(int k) const { return unitaries_.at(2 * (k - 1)); }
  const TracialMatrix& v(int k) const { return unitaries_.at(2 * (k - 1) + 1); }
  const std::vector<TracialMatrix>& unitaries() const { return unitaries_; }

 private:
  int genus_;
  std::vector<TracialMatrix> unitaries_;
};

/// Image of w under the homomorphism alpha_k -> u_k, beta_k -> v_k.
TracialMatrix evaluate_word(const UnitaryTuple& t, const FreeWord& w);

/// prod_i [u_i, v_i].
TracialMatrix commutator_product(const UnitaryTuple& t);
/// ||prod_i [u_i, v_i] - 1||.
double commutator_defect(const UnitaryTuple& t);

/// Clock u = diag(1, w, ..., w^{n-1}), w = exp(2 pi i p / n), and the shift
/// v e_j = e_{j-1}, so that v u = w u v and [u, v] = exp(-2 pi i p / n).
UnitaryTuple clock_shift_tuple(int n, int p);

/// Clock/shift in the first pair and identity pairs after it.
UnitaryTuple twisted_genus_tuple(int genus, int n, int p);

UnitaryTuple identity_tuple(int genus, int n);

/// Commuting diagonal unitaries with random phases, each multiplied by
/// exp(iH) with ||H|| = magnitude and re-unitarized. Deterministic in seed.
UnitaryTuple perturbed_commuting_tuple(int genus, int n, double magnitude, std::uint64_t seed);

/// Replaces every entry x by w x w*.
UnitaryTuple conjugate_tuple(const UnitaryTuple& t, const TracialMatrix& w);

/// Number of conjugates of kappa_g^{+-1} needed to write `word`, found by
/// repeatedly cutting out at least half of a cyclic rotation of the relator.
/// nullopt when no such decomposition is found.
std::optional<int> relator_conjugate_count(const FreeWord& word);

struct MultiplicativityBound {
  int constant = 0;  // M
  double bound = 0.0;  // M * defect
};

MultiplicativityBound quasi_rep_defect_bound(const SurfaceGroupData& sg, double defect);

}  // namespace qrep
