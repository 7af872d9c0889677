#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ccrlab/algebra.hpp"

namespace ccrlab {

/// Perfect matching of {1..n}; each pair ascending, pairs ordered by first element.
using Pairing = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline constexpr std::size_t kMaxPairingOrder = 16;
inline constexpr std::size_t kMaxGramDegree = 4;

/// All perfect matchings in deterministic order: the first open index is paired
/// with each later open index in increasing order.
std::vector<Pairing> enumerate_pairings(std::size_t n, std::size_t guard = kMaxPairingOrder);

/// (n-1)!! for even n, 0 for odd n.
std::uint64_t double_factorial_pairings(std::size_t n);

/// Finite table of omega_2 on generators 1..n. Entries may be missing.
class TwoPointKernel {
 public:
  TwoPointKernel(std::size_t n, ScalarMode mode);

  std::size_t size() const { return n_; }
  ScalarMode mode() const { return mode_; }

  void set(std::uint32_t i, std::uint32_t j, const Scalar& v);
  bool has(std::uint32_t i, std::uint32_t j) const;
  /// Throws kIncompleteKernel for missing entries or indices outside 1..n.
  const Scalar& operator()(std::uint32_t i, std::uint32_t j) const;

  /// E = 2 Im omega_2; requires a complete kernel.
  PairingForm commutator_form() const;

  /// Throws kKernelInconsistency unless Re omega_2 is symmetric, Im omega_2
  /// antisymmetric and the diagonal real and non-negative (exact in exact mode).
  void check_consistency(double tol = 1e-12) const;
  /// Pairs (i, j) violating |E_ij|^2/4 <= omega(i,i) omega(j,j).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cauchy_schwarz_violations(double tol = 1e-12) const;

  /// Kernel of a quasifree state with symmetric part mu and E = sigma:
  /// omega_2 = mu + (i/2) E.
  static TwoPointKernel from_covariance(const std::vector<std::vector<Scalar>>& mu, const PairingForm& e);

  nlohmann::json to_json() const;
  /// {"n", "mode", "entries": [[i, j, "re+im*i" or [re, im]], ...]}
  static TwoPointKernel from_json(const nlohmann::json& j);

 private:
  std::size_t n_;
  ScalarMode mode_;
  std::vector<std::optional<Scalar>> table_;
};

class QuasifreeState {
 public:
  explicit QuasifreeState(TwoPointKernel kernel, double tol = 1e-12);

  const TwoPointKernel& kernel() const { return kernel_; }
  ScalarMode mode() const { return kernel_.mode(); }

  /// omega_n on a word; zero for odd length, pairing sum otherwise.
  Scalar npoint(const Word& indices, std::size_t guard = kMaxPairingOrder) const;
  /// Linear extension of npoint; omega(1) = 1.
  Scalar evaluate(const AlgebraElement& a, std::size_t guard = kMaxPairingOrder) const;

 private:
  TwoPointKernel kernel_;
};

struct GramReport {
  std::vector<std::vector<std::complex<double>>> matrix;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  double tolerance = 0.0;
  bool psd = false;

  nlohmann::json to_json() const;
};

/// G_ij = omega(a_i^* a_j) and its spectrum. PSD means min eig >= -1e-10 trace.
GramReport gram_positivity(const QuasifreeState& state, const std::vector<AlgebraElement>& elements,
                           std::size_t degree_guard = kMaxGramDegree);

}  // namespace ccrlab
