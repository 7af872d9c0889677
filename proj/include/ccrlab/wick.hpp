#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccrlab/algebra.hpp"
#include "ccrlab/minkowski.hpp"
#include "ccrlab/quasifree.hpp"

namespace ccrlab::wick {

enum class KernelTag { kState, kHadamard };

/// Complex bilinear kappa on generators 1..n used as the subtraction in
/// normal ordering. Valid when kappa_ij - kappa_ji = i E_ij.
class OrderingKernel {
 public:
  OrderingKernel(std::size_t n, ScalarMode mode = ScalarMode::kExact, KernelTag tag = KernelTag::kState);

  static OrderingKernel from_two_point(const TwoPointKernel& omega);
  /// Symmetric part s plus (i/2) E.
  static OrderingKernel from_symmetric(const std::vector<std::vector<Scalar>>& s, const PairingForm& e,
                                       KernelTag tag = KernelTag::kHadamard);

  std::size_t size() const { return n_; }
  ScalarMode mode() const { return mode_; }
  KernelTag tag() const { return tag_; }

  Scalar operator()(GeneratorIndex i, GeneratorIndex j) const;
  Scalar at(std::uint32_t i, std::uint32_t j) const { return (*this)({i}, {j}); }
  void set(std::uint32_t i, std::uint32_t j, const Scalar& v);

  /// Throws kOrderingKernelInvalid when the antisymmetric part differs from (i/2) E.
  void validate(const PairingForm& e, double tol = 1e-12) const;

 private:
  std::size_t n_;
  ScalarMode mode_;
  KernelTag tag_;
  std::vector<Scalar> table_;
};

/// Combination of normal-ordered monomials :phi(f_i1)...phi(f_in): labelled by
/// non-decreasing words (the products are symmetric). The empty word is the unit.
class WickElement {
 public:
  using TermMap = std::map<Word, Scalar, WordOrder>;

  explicit WickElement(ScalarMode mode = ScalarMode::kExact) : mode_(mode) {}
  static WickElement monomial(Word w, const Scalar& c);

  ScalarMode mode() const { return mode_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const;
  Scalar coefficient(Word w) const;
  Scalar unit_coefficient() const { return coefficient({}); }

  /// The word is sorted before insertion.
  void add_term(Word w, const Scalar& c);

  WickElement& operator+=(const WickElement& o);
  WickElement& operator-=(const WickElement& o);
  WickElement& operator*=(const Scalar& c);
  friend WickElement operator+(WickElement a, const WickElement& b) { return a += b; }
  friend WickElement operator-(WickElement a, const WickElement& b) { return a -= b; }
  friend bool operator==(const WickElement& a, const WickElement& b) {
    return a.mode_ == b.mode_ && a.terms_ == b.terms_;
  }

  WickElement pruned(double tol) const;
  double max_abs_coefficient() const;
  /// Terms like `coeff*:phi(1)phi(2):`; the unit term is the bare coefficient.
  std::string to_string() const;

 private:
  ScalarMode mode_;
  TermMap terms_;
};

/// Rewrites a in the basis of kappa-normal-ordered monomials using
/// :s: phi(g) = :s g: + sum_l kappa(s_l, g) :s \ s_l:.
WickElement normal_order(const AlgebraElement& a, const OrderingKernel& kappa, const PairingForm& e);

/// Inverse map: expands each :s: by the defining recursion and returns the
/// result in the canonical non-decreasing basis.
AlgebraElement to_algebra(const WickElement& w, const OrderingKernel& kappa, const PairingForm& e);

inline constexpr std::size_t kMaxWickProductDegree = 4;

/// Product of normal-ordered elements by summing over partial contractions
/// between the two factors (left index first in kappa).
WickElement wick_product(const WickElement& a, const WickElement& b, const OrderingKernel& kappa);

inline constexpr std::size_t kMaxTensorBasis = 8;
inline constexpr std::size_t kMaxAlphaDegree = 6;

/// Symmetric bilinear d on basis elements 1..B (the symmetric part of a kernel difference).
class DifferenceKernel {
 public:
  DifferenceKernel(std::vector<std::vector<Scalar>> d, double tol = 1e-12);

  /// Symmetric part of kappa_to - kappa_from.
  static DifferenceKernel between(const OrderingKernel& from, const OrderingKernel& to);

  std::size_t size() const { return d_.size(); }
  ScalarMode mode() const { return mode_; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return d_[i][j]; }  // 0-based
  DifferenceKernel operator+(const DifferenceKernel& o) const;

 private:
  std::vector<std::vector<Scalar>> d_;
  ScalarMode mode_;
};

/// Rank-n tensor over a basis of B test functions, dense and row-major.
class WickTensor {
 public:
  WickTensor(std::size_t degree, std::size_t basis, ScalarMode mode = ScalarMode::kExact);

  /// f^{tensor n} for a coefficient vector f.
  static WickTensor power(const std::vector<Scalar>& f, std::size_t degree);

  std::size_t degree() const { return degree_; }
  std::size_t basis() const { return basis_; }
  ScalarMode mode() const { return mode_; }
  const std::vector<Scalar>& entries() const { return entries_; }

  Scalar& at(const std::vector<std::size_t>& idx) { return entries_[offset(idx)]; }
  const Scalar& at(const std::vector<std::size_t>& idx) const { return entries_[offset(idx)]; }
  Scalar& at_flat(std::size_t k) { return entries_[k]; }
  const Scalar& at_flat(std::size_t k) const { return entries_[k]; }

  WickTensor symmetrized() const;
  bool is_symmetric(double tol = 1e-12) const;
  /// Contracts the first two slots with d.
  WickTensor contract(const DifferenceKernel& d) const;
  WickTensor conj() const;

  WickTensor& operator+=(const WickTensor& o);
  WickTensor& operator*=(const Scalar& c);
  friend bool operator==(const WickTensor& a, const WickTensor& b) {
    return a.degree_ == b.degree_ && a.basis_ == b.basis_ && a.entries_ == b.entries_;
  }

  /// sum_idx t_idx :phi(f_{i1+1}) ... phi(f_{in+1}):.
  WickElement to_element() const;

  nlohmann::json to_json() const;
  static WickTensor from_json(const nlohmann::json& j, ScalarMode mode, const std::string& pointer = "");

 private:
  std::size_t offset(const std::vector<std::size_t>& idx) const;

  std::size_t degree_, basis_;
  ScalarMode mode_;
  std::vector<Scalar> entries_;
};

/// sum_n W_n(t_n), keyed by degree.
using WickSeries = std::map<std::size_t, WickTensor>;

/// n! / (2^k k! (n - 2k)!), the number of ways to pick k disjoint pairs.
Scalar alpha_coefficient(std::size_t n, std::size_t k, ScalarMode mode);

/// alpha_d(W_n(t)) = sum_k W_{n-2k}(c_{n,k} <d^k, t>).
WickSeries alpha_map(const DifferenceKernel& d, const WickSeries& w);

WickSeries star(const WickSeries& w);
WickElement to_element(const WickSeries& w);
bool series_equal(const WickSeries& a, const WickSeries& b);

/// Coincidence limit of the symmetric part of omega2 - H for the Minkowski
/// vacuum, extrapolated from the equal-time ladder r = 2^-j / m, plus the
/// diagonal value of a smooth symmetric perturbation of the state.
double phi2_H_expectation(const minkowski::KernelParams& params, double perturbation = 0.0);

using Event = std::array<double, 4>;
using Tensor4 = std::array<std::array<double, 4>, 4>;
/// Smooth symmetric two-point function w(x, y).
using TwoPointFunction = std::function<double(const Event&, const Event&)>;

/// Signature (-+++).
inline constexpr std::array<double, 4> kMetricDiag{-1.0, 1.0, 1.0, 1.0};

struct StressEnergyOptions {
  double m = 1.0;
  double xi = 0.0;
  double h = 1e-2;     // point-split step; the check also uses h/2
  double tol = 1e-8;   // allowed Richardson error estimate, relative to max(1, |T|)
};

struct StressEnergy {
  Tensor4 t{};          // full D_ab applied at coincidence
  Tensor4 canonical{};  // without the -(1/3) g_ab P_x term
  double p_w = 0.0;     // (P_x w)(x, x), P = -g^{ab} d_a d_b + m^2
  double error_estimate = 0.0;

  double trace() const;
  double canonical_trace() const;
};

/// Point-split D_ab w by fourth-order differences at steps h and h/2,
/// Richardson combined; throws kResolution when the two disagree beyond tol.
StressEnergy stress_energy(const TwoPointFunction& w, const Event& x, const StressEnergyOptions& opts);

/// max_b |g^{aa} d_a T_ab(x)| by fourth-order differences of step hx.
double divergence_residual(const TwoPointFunction& w, const Event& x, const StressEnergyOptions& opts, double hx);

}  // namespace ccrlab::wick
