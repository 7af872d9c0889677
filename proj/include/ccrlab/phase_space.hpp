#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "ccrlab/error.hpp"

// Phase-space conventions used throughout: coordinates are interleaved
// (q_1, p_1, ..., q_N, p_N); mu(x, y) = x^T M y and tau(x, y) = x^T T y with the
// standard form tau(q_k, p_k) = 1. A one-particle map K satisfies
// <Kx|Ky> = mu(x, y) + (i/2) tau(x, y), antilinear in the first slot.
namespace ccrlab {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

MatrixXd standard_tau(std::size_t modes);

struct OperatorJ {
  MatrixXd j;               // mu(x, J y) = tau(x, y) / 2
  double norm_mu = 0.0;     // operator norm in the mu inner product
  double adjoint_defect = 0.0;  // || M J + J^T M || (J is mu-antisymmetric)
};

/// Checks shapes, symmetry, antisymmetry, mu > 0 and ||J||_mu <= 1 + tol.
OperatorJ validate_mu_tau(const MatrixXd& mu, const MatrixXd& tau, double tol = 1e-10);

enum class OneParticleMethod {
  kSpectral,    // eigenbasis of I + iA, zero directions dropped
  kSquareRoot,  // (I + iA)^{1/2} compressed onto its range by an SVD basis
};

struct OneParticleStructure {
  MatrixXd mu;
  MatrixXd tau;
  MatrixXcd k;  // M x 2N, M <= 2N

  std::size_t hilbert_dim() const { return static_cast<std::size_t>(k.rows()); }
  std::complex<double> inner(const VectorXd& x, const VectorXd& y) const;
  /// |<Kx|Ky> - mu(x,y) - (i/2) tau(x,y)|.
  double reconstruction_defect(const VectorXd& x, const VectorXd& y) const;
  /// Complex rank of K equals the Hilbert dimension (K(V) + iK(V) spans).
  bool spans(double tol = 1e-10) const;
};

OneParticleStructure one_particle(const MatrixXd& mu, const MatrixXd& tau,
                                  OneParticleMethod method = OneParticleMethod::kSpectral);

struct Intertwiner {
  MatrixXcd v;  // V K_a = K_b
  double unitarity_defect = 0.0;
  double intertwining_defect = 0.0;
};

Intertwiner intertwiner(const OneParticleStructure& a, const OneParticleStructure& b);

struct PurityReport {
  bool pure = false;
  double j_square_residual = 0.0;  // || J^2 + I ||
  double sup_residual = 0.0;       // max over psi of |1 - sup-expression / mu(psi,psi)|
  bool j_route_pure = false;
  bool sup_route_pure = false;

  nlohmann::json to_json() const;
};

/// (1/4) sup_{xi != 0} tau(psi, xi)^2 / mu(xi, xi), in closed form.
double purity_sup(const MatrixXd& mu, const MatrixXd& tau, const VectorXd& psi);

/// Both purity routes; throws kInternalInconsistency when they disagree.
PurityReport purity(const MatrixXd& mu, const MatrixXd& tau, double j_tol = 1e-10, double sup_tol = 1e-8);

/// Energy matrix for N periodic lattice sites: energy = (1/2) x^T h x with
/// (1/2) sum_j [p_j^2 + m^2 q_j^2 + ((q_{j+1} - q_j)/a)^2].
MatrixXd periodic_kg_energy(std::size_t sites, double mass, double spacing);

/// Generator X of the Hamiltonian flow dx/dt = X x, X = -T^{-1} h.
MatrixXd hamiltonian_generator(const MatrixXd& h, const MatrixXd& tau);

/// Ground-state covariance: mu(psi, psi') = Re(P+ psi | 2 H^{-1} P+ psi') for the
/// energy product (psi|psi') = (1/2) psi^* h psi' and H = iX.
MatrixXd ground_state_mu(const MatrixXd& h, const MatrixXd& tau, double gap_tol = 1e-10);

inline constexpr std::size_t kMaxFockModes = 4;
inline constexpr std::size_t kMaxFockCutoff = 6;

/// Truncated symmetric Fock space over C^M with total occupation <= cutoff.
class FockRepresentation {
 public:
  FockRepresentation(OneParticleStructure ops, std::size_t cutoff);

  std::size_t modes() const { return modes_; }
  std::size_t cutoff() const { return cutoff_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<std::vector<std::uint8_t>>& states() const { return states_; }
  const OneParticleStructure& structure() const { return ops_; }

  const MatrixXcd& annihilation(std::size_t j) const { return a_[j]; }
  MatrixXcd creation(std::size_t j) const { return a_[j].adjoint(); }
  /// a(Kx) = sum_j conj((Kx)_j) a_j.
  MatrixXcd a(const VectorXd& x) const;
  MatrixXcd a_dagger(const VectorXd& x) const;
  /// phi(x) = a(Kx) + a^dagger(Kx).
  MatrixXcd field(const VectorXd& x) const;

  /// <0| phi(x_1) ... phi(x_n) |0>; requires cutoff >= ceil(n/2).
  std::complex<double> vacuum_npoint(const std::vector<VectorXd>& xs) const;
  /// max |[a_j, a_k^dagger] - delta_jk| on sectors of total occupation <= max_sector.
  double ccr_defect(std::size_t max_sector) const;
  /// max |[phi(x), phi(y)] - i tau(x,y)| on sectors <= max_sector.
  double field_commutator_defect(const VectorXd& x, const VectorXd& y, std::size_t max_sector) const;

 private:
  std::vector<std::size_t> sector_columns(std::size_t max_sector) const;

  OneParticleStructure ops_;
  std::size_t modes_;
  std::size_t cutoff_;
  std::vector<std::vector<std::uint8_t>> states_;
  std::vector<MatrixXcd> a_;
};

enum class HsTrend { kBounded, kDivergent, kInconclusive };
std::string_view to_string(HsTrend t);

struct TruncationInput {
  std::size_t n = 0;  // number of modes at this truncation
  MatrixXd mu1, mu2, tau;
};

struct EquivalenceReport {
  std::vector<std::size_t> ns;
  std::vector<double> c_min, c_max, hs_norms;
  double slope = 0.0;  // least-squares slope of log hs versus log N
  HsTrend trend = HsTrend::kInconclusive;

  nlohmann::json to_json() const;
};

struct EquivalenceSample {
  double c_min = 0.0, c_max = 0.0, hs_norm = 0.0;
};

/// Single truncation: Q = M1^{-1}(M2 - M1), hs = ||Q|| in the mu1 Hilbert-Schmidt norm.
EquivalenceSample equivalence_sample(const MatrixXd& mu1, const MatrixXd& mu2);

/// Trend thresholds: slope >= 0.4 divergent, slope <= 0.1 (or all norms ~0) bounded.
EquivalenceReport equivalence_probe(const std::vector<TruncationInput>& ladder);

MatrixXd random_symplectic(std::size_t modes, std::mt19937_64& rng, double scale = 0.5);

/// Random valid (mu, standard tau): mu = (1/2) S^T diag(nu) S with symplectic S
/// and symplectic eigenvalues nu_k = 1 (pure) or drawn from [1, 3].
MatrixXd random_covariance(std::size_t modes, std::mt19937_64& rng, bool pure);

MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& pointer);
nlohmann::json matrix_to_json(const MatrixXd& m);

}  // namespace ccrlab
