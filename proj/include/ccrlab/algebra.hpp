#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ccrlab/scalar.hpp"

namespace ccrlab {

/// Label of an abstract real test function f_i. Indices start at 1 and carry
/// the total order used by normal forms.
struct GeneratorIndex {
  std::uint32_t value = 1;

  friend auto operator<=>(const GeneratorIndex&, const GeneratorIndex&) = default;
};

using Word = std::vector<GeneratorIndex>;

Word make_word(std::initializer_list<std::uint32_t> indices);

/// Graded-lexicographic order: lower degree first, then lexicographic.
struct WordOrder {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

bool is_nondecreasing(const Word& w);

/// Finite complex-linear combination of words in hermitian generators phi(f_i).
/// The empty word is the unit. Zero coefficients are never stored.
class AlgebraElement {
 public:
  using TermMap = std::map<Word, Scalar, WordOrder>;

  explicit AlgebraElement(ScalarMode mode = ScalarMode::kExact) : mode_(mode) {}

  static AlgebraElement unit(ScalarMode mode = ScalarMode::kExact);
  static AlgebraElement scalar(const Scalar& c);
  static AlgebraElement generator(std::uint32_t index, ScalarMode mode = ScalarMode::kExact);
  static AlgebraElement monomial(const Word& word, const Scalar& coeff);

  ScalarMode mode() const { return mode_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Filtration degree (longest word); 0 for multiples of the unit and for zero.
  std::size_t degree() const;
  Scalar coefficient(const Word& w) const;
  Scalar unit_coefficient() const { return coefficient({}); }

  void add_term(const Word& w, const Scalar& c);

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(const Scalar& c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, const Scalar& c) { return a *= c; }
  friend AlgebraElement operator*(const Scalar& c, AlgebraElement a) { return a *= c; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.mode_ == b.mode_ && a.terms_ == b.terms_;
  }

  /// Drops float coefficients with modulus <= tol (no-op for exact elements).
  AlgebraElement pruned(double tol) const;
  /// Largest coefficient modulus.
  double max_abs_coefficient() const;

  /// Canonical text: `coeff*phi(i1)phi(i2)...` terms joined by " + ", "0" for zero.
  std::string to_string() const;
  static AlgebraElement parse(std::string_view text, ScalarMode mode);

 private:
  ScalarMode mode_;
  TermMap terms_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

/// Anti-linear involution: reverses every word and conjugates coefficients.
AlgebraElement star(const AlgebraElement& a);

/// Antisymmetric real form E on generators 1..n, stored as the strict upper triangle.
class PairingForm {
 public:
  PairingForm(std::size_t n, ScalarMode mode = ScalarMode::kExact);

  static PairingForm standard_symplectic(std::size_t pairs, ScalarMode mode = ScalarMode::kExact);

  std::size_t size() const { return n_; }
  ScalarMode mode() const { return mode_; }

  /// E(f_i, f_j); throws kInvalidInput when an index is outside 1..n.
  Scalar operator()(GeneratorIndex i, GeneratorIndex j) const;
  Scalar at(std::uint32_t i, std::uint32_t j) const { return (*this)({i}, {j}); }
  /// Sets E_ij = v and E_ji = -v. v must be real.
  void set(std::uint32_t i, std::uint32_t j, const Scalar& v);

  /// Rank of the real matrix (float SVD, tolerance 1e-12 relative).
  std::size_t rank() const;
  bool weakly_nondegenerate() const { return rank() == n_; }

  nlohmann::json to_json() const;
  static PairingForm from_json(const nlohmann::json& j);

 private:
  std::size_t index(std::uint32_t i, std::uint32_t j) const;

  std::size_t n_;
  ScalarMode mode_;
  std::vector<Scalar> upper_;
};

/// Rewrites elements into the canonical basis of non-decreasing words using
/// phi(f_j)phi(f_i) -> phi(f_i)phi(f_j) - i E_ij 1 for j > i. Caches word results,
/// so keep one engine around for repeated reductions against the same form.
class NormalFormEngine {
 public:
  explicit NormalFormEngine(PairingForm form) : form_(std::move(form)) {}

  const PairingForm& form() const { return form_; }
  AlgebraElement reduce(const AlgebraElement& a);
  const AlgebraElement& reduce_word(const Word& w);

 private:
  void insert_letter(const Word& sorted, GeneratorIndex g, const Scalar& coeff, AlgebraElement& out);

  PairingForm form_;
  std::map<Word, AlgebraElement, WordOrder> cache_;
};

AlgebraElement normal_form(const AlgebraElement& a, const PairingForm& form);

/// normal_form(ab - ba).
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b, const PairingForm& form);

enum class Parity { kPreserving, kReversing };

/// Homomorphism (preserving) or anti-linear homomorphism (reversing) induced by
/// a real linear map sigma on the generator span; column j of `sigma` is the
/// image of f_j. Throws kInvalidSymmetry when sigma^T E sigma != +/-E.
class InducedMap {
 public:
  InducedMap(std::vector<std::vector<Scalar>> sigma, Parity parity, const PairingForm& form, double tol = 1e-12);

  Parity parity() const { return parity_; }
  const std::vector<std::vector<Scalar>>& matrix() const { return sigma_; }
  AlgebraElement operator()(const AlgebraElement& a) const;
  /// Image of phi(f_j) as a degree-one element.
  AlgebraElement image_of_generator(GeneratorIndex j) const;

 private:
  std::vector<std::vector<Scalar>> sigma_;
  Parity parity_;
  ScalarMode mode_;
};

/// Infers whether sigma preserves or flips E; nullopt if neither.
std::optional<Parity> detect_parity(const std::vector<std::vector<Scalar>>& sigma, const PairingForm& form,
                                    double tol = 1e-12);

/// Generator-span vector u = sum_j u_j f_j; phi(u) = sum_j u_j phi(f_j).
using SpanVector = std::vector<Scalar>;
AlgebraElement field(const SpanVector& u);

/// Coefficient of the unit in [...[a, phi(u_1)], ..., phi(u_k)] with k = deg(nf(a)).
Scalar simplicity_probe(const AlgebraElement& a, const std::vector<SpanVector>& probes, const PairingForm& form);

/// Searches multisets of basis vectors for probes with a nonzero result.
std::optional<std::vector<SpanVector>> find_simplicity_witness(const AlgebraElement& a, const PairingForm& form);

}  // namespace ccrlab
