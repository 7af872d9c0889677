#include "ccrlab/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

namespace ccrlab {

namespace {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kInvalidInput, std::string(what) + " must be square");
}

struct SqrtPair {
  MatrixXd root, inv_root;
  double min_eig = 0.0;
};

// Symmetric square root of a symmetric positive definite matrix.
SqrtPair spd_sqrt(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  SqrtPair s;
  s.min_eig = m.rows() == 0 ? 0.0 : es.eigenvalues().minCoeff();
  if (s.min_eig <= 0.0) return s;
  VectorXd r = es.eigenvalues().cwiseSqrt();
  s.root = es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
  s.inv_root = es.eigenvectors() * r.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return s;
}

SqrtPair checked_mu_sqrt(const MatrixXd& mu, double tol) {
  double scale = std::max(1.0, max_abs(mu));
  if (max_abs(mu - mu.transpose()) > tol * scale) throw Error(ErrorCode::kInvalidCovariance, "mu is not symmetric");
  SqrtPair s = spd_sqrt(0.5 * (mu + mu.transpose()));
  if (s.min_eig <= tol * scale) throw Error(ErrorCode::kInvalidCovariance, "mu is not positive definite");
  return s;
}

}  // namespace

MatrixXd standard_tau(std::size_t modes) {
  auto n = static_cast<Eigen::Index>(2 * modes);
  MatrixXd t = MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    t(k, k + 1) = 1.0;
    t(k + 1, k) = -1.0;
  }
  return t;
}

OperatorJ validate_mu_tau(const MatrixXd& mu, const MatrixXd& tau, double tol) {
  require_square(mu, "mu");
  require_square(tau, "tau");
  if (mu.rows() != tau.rows()) throw Error(ErrorCode::kInvalidInput, "mu and tau sizes differ");
  if (max_abs(tau + tau.transpose()) > tol * std::max(1.0, max_abs(tau))) {
    throw Error(ErrorCode::kInvalidInput, "tau is not antisymmetric");
  }
  SqrtPair s = checked_mu_sqrt(mu, tol);
  OperatorJ out;
  out.j = 0.5 * mu.ldlt().solve(tau);
  // In mu-orthonormal coordinates J becomes A = (1/2) L^{-1} T L^{-1}.
  MatrixXd a = 0.5 * s.inv_root * tau * s.inv_root;
  out.norm_mu = a.rows() == 0 ? 0.0 : Eigen::JacobiSVD<MatrixXd>(a).singularValues()(0);
  out.adjoint_defect = max_abs(mu * out.j + out.j.transpose() * mu);
  if (out.norm_mu > 1.0 + tol) {
    throw Error(ErrorCode::kInvalidCovariance,
                "||J||_mu = " + std::to_string(out.norm_mu) + " > 1: (1/4)|tau(x,y)|^2 <= mu(x,x)mu(y,y) fails");
  }
  return out;
}

std::complex<double> OneParticleStructure::inner(const VectorXd& x, const VectorXd& y) const {
  VectorXcd kx = k * x.cast<std::complex<double>>();
  VectorXcd ky = k * y.cast<std::complex<double>>();
  return kx.dot(ky);
}

double OneParticleStructure::reconstruction_defect(const VectorXd& x, const VectorXd& y) const {
  std::complex<double> expected(x.dot(mu * y), 0.5 * x.dot(tau * y));
  return std::abs(inner(x, y) - expected);
}

bool OneParticleStructure::spans(double tol) const {
  if (k.rows() == 0) return true;
  Eigen::JacobiSVD<MatrixXcd> svd(k);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > tol * s(0) ? 1 : 0;
  return rank == k.rows();
}

OneParticleStructure one_particle(const MatrixXd& mu, const MatrixXd& tau, OneParticleMethod method) {
  validate_mu_tau(mu, tau);
  SqrtPair s = spd_sqrt(0.5 * (mu + mu.transpose()));
  const std::complex<double> i(0.0, 1.0);
  Eigen::Index n = mu.rows();
  // mu + (i/2) tau = L (I + iA) L with A = (1/2) L^{-1} T L^{-1}; I + iA is hermitian, PSD.
  MatrixXd a = 0.5 * s.inv_root * tau * s.inv_root;
  MatrixXcd g = MatrixXcd::Identity(n, n) + i * a.cast<std::complex<double>>();
  g = 0.5 * (g + g.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g);
  const double keep = 1e-10;
  OneParticleStructure out{mu, tau, MatrixXcd()};
  MatrixXcd lc = s.root.cast<std::complex<double>>();
  if (method == OneParticleMethod::kSpectral) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index c = 0; c < n; ++c)
      if (es.eigenvalues()(c) > keep) cols.push_back(c);
    out.k.resize(static_cast<Eigen::Index>(cols.size()), n);
    for (std::size_t r = 0; r < cols.size(); ++r) {
      double sg = std::sqrt(es.eigenvalues()(cols[r]));
      out.k.row(static_cast<Eigen::Index>(r)) = sg * es.eigenvectors().col(cols[r]).adjoint() * lc;
    }
    return out;
  }
  VectorXd root_g = (es.eigenvalues().array() > keep).select(es.eigenvalues(), 0.0).cwiseSqrt();
  MatrixXcd k2 = es.eigenvectors() * root_g.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint() * lc;
  Eigen::JacobiSVD<MatrixXcd> svd(k2, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < sv.size(); ++c) rank += sv(c) > keep * std::max(1.0, sv(0)) ? 1 : 0;
  out.k = svd.matrixU().leftCols(rank).adjoint() * k2;
  return out;
}

Intertwiner intertwiner(const OneParticleStructure& a, const OneParticleStructure& b) {
  Intertwiner out;
  out.v = b.k * a.k.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::Index ma = a.k.rows(), mb = b.k.rows();
  out.unitarity_defect = std::max(max_abs(MatrixXcd(out.v.adjoint() * out.v) - MatrixXcd::Identity(ma, ma)),
                                  max_abs(MatrixXcd(out.v * out.v.adjoint()) - MatrixXcd::Identity(mb, mb)));
  out.intertwining_defect = max_abs(MatrixXcd(out.v * a.k - b.k));
  return out;
}

nlohmann::json PurityReport::to_json() const {
  return {{"verdict", pure ? "pure" : "mixed"},
          {"j_square_residual", j_square_residual},
          {"sup_residual", sup_residual},
          {"j_route_pure", j_route_pure},
          {"sup_route_pure", sup_route_pure}};
}

double purity_sup(const MatrixXd& mu, const MatrixXd& tau, const VectorXd& psi) {
  // sup_xi (v . xi)^2 / (xi^T M xi) = v^T M^{-1} v with v = T^T psi (Cauchy-Schwarz in the M product).
  VectorXd v = tau.transpose() * psi;
  return 0.25 * v.dot(mu.ldlt().solve(v));
}

PurityReport purity(const MatrixXd& mu, const MatrixXd& tau, double j_tol, double sup_tol) {
  OperatorJ j = validate_mu_tau(mu, tau);
  PurityReport r;
  Eigen::Index n = mu.rows();
  SqrtPair s = spd_sqrt(0.5 * (mu + mu.transpose()));
  // Route 1: J^2 = -I, measured in the mu norm.
  MatrixXd j2 = s.root * (j.j * j.j + MatrixXd::Identity(n, n)) * s.inv_root;
  r.j_square_residual = n == 0 ? 0.0 : Eigen::JacobiSVD<MatrixXd>(j2).singularValues()(0);
  // Route 2: mu(psi,psi) = (1/4) psi^T T M^{-1} T^T psi for all psi, i.e. the
  // generalized eigenvalues of (B, M) with B = (1/4) T M^{-1} T^T are all one.
  MatrixXd b = 0.25 * tau * mu.ldlt().solve(tau.transpose());
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(b, 0.5 * (mu + mu.transpose()));
  r.sup_residual = n == 0 ? 0.0 : (ges.eigenvalues().array() - 1.0).abs().maxCoeff();
  r.j_route_pure = r.j_square_residual <= j_tol;
  r.sup_route_pure = r.sup_residual <= sup_tol;
  if (r.j_route_pure != r.sup_route_pure) {
    throw Error(ErrorCode::kInternalInconsistency, "purity routes disagree: J^2 residual " +
                                                       std::to_string(r.j_square_residual) + ", sup residual " +
                                                       std::to_string(r.sup_residual));
  }
  r.pure = r.j_route_pure;
  return r;
}

MatrixXd periodic_kg_energy(std::size_t sites, double mass, double spacing) {
  if (sites == 0 || spacing <= 0.0) throw Error(ErrorCode::kInvalidInput, "lattice needs sites >= 1 and spacing > 0");
  auto n = static_cast<Eigen::Index>(sites);
  MatrixXd h = MatrixXd::Zero(2 * n, 2 * n);
  double inv_a2 = 1.0 / (spacing * spacing);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index q = 2 * j, qn = 2 * ((j + 1) % n);
    h(q + 1, q + 1) += 1.0;
    h(q, q) += mass * mass;
    if (qn == q) continue;
    h(q, q) += inv_a2;
    h(qn, qn) += inv_a2;
    h(q, qn) -= inv_a2;
    h(qn, q) -= inv_a2;
  }
  return h;
}

MatrixXd hamiltonian_generator(const MatrixXd& h, const MatrixXd& tau) {
  require_square(h, "energy matrix");
  require_square(tau, "tau");
  if (h.rows() != tau.rows()) throw Error(ErrorCode::kInvalidInput, "energy matrix and tau sizes differ");
  Eigen::FullPivLU<MatrixXd> lu(tau);
  if (!lu.isInvertible()) throw Error(ErrorCode::kInvalidInput, "tau must be non-degenerate for a Hamiltonian flow");
  return -lu.solve(h);
}

MatrixXd ground_state_mu(const MatrixXd& h, const MatrixXd& tau, double gap_tol) {
  MatrixXd x = hamiltonian_generator(h, tau);
  double scale = std::max(1e-300, max_abs(h));
  if (max_abs(h - h.transpose()) > 1e-12 * scale) throw Error(ErrorCode::kInvalidInput, "energy matrix must be symmetric");
  SqrtPair r = spd_sqrt(0.5 * (h + h.transpose()));
  if (r.min_eig <= gap_tol * scale) {
    throw Error(ErrorCode::kSpectrumNotGapped, "energy form has a zero mode (min eigenvalue " + std::to_string(r.min_eig) + ")");
  }
  const std::complex<double> i(0.0, 1.0);
  // H = iX is self-adjoint for the energy product; in h-orthonormal coordinates it is hermitian.
  MatrixXcd hs = i * (r.root * x * r.inv_root).cast<std::complex<double>>();
  hs = 0.5 * (hs + hs.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hs);
  const VectorXd& lam = es.eigenvalues();
  double lmax = lam.cwiseAbs().maxCoeff();
  Eigen::Index n = h.rows();
  MatrixXcd acc = MatrixXcd::Zero(n, n);
  for (Eigen::Index c = 0; c < lam.size(); ++c) {
    if (std::abs(lam(c)) <= gap_tol * lmax) {
      throw Error(ErrorCode::kSpectrumNotGapped, "generator has a zero frequency");
    }
    if (lam(c) > 0.0) acc += (1.0 / lam(c)) * es.eigenvectors().col(c) * es.eigenvectors().col(c).adjoint();
  }
  MatrixXcd rc = r.root.cast<std::complex<double>>();
  MatrixXd mu = (rc * acc * rc).real();
  return 0.5 * (mu + mu.transpose());
}

FockRepresentation::FockRepresentation(OneParticleStructure ops, std::size_t cutoff)
    : ops_(std::move(ops)), modes_(ops_.hilbert_dim()), cutoff_(cutoff) {
  if (modes_ > kMaxFockModes) {
    throw Error(ErrorCode::kDegreeGuard, "Fock representation supports at most " + std::to_string(kMaxFockModes) +
                                             " one-particle modes, got " + std::to_string(modes_));
  }
  if (cutoff_ > kMaxFockCutoff) {
    throw Error(ErrorCode::kDegreeGuard, "Fock cutoff above " + std::to_string(kMaxFockCutoff));
  }
  // Occupation vectors ordered by total number, then lexicographically.
  std::vector<std::uint8_t> occ(modes_, 0);
  for (std::size_t total = 0; total <= cutoff_; ++total) {
    std::vector<std::vector<std::uint8_t>> level;
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
      if (pos + 1 >= modes_) {
        if (modes_ == 0) {
          if (left == 0) level.push_back(occ);
          return;
        }
        occ[pos] = static_cast<std::uint8_t>(left);
        level.push_back(occ);
        return;
      }
      for (std::size_t k = left + 1; k-- > 0;) {
        occ[pos] = static_cast<std::uint8_t>(k);
        self(self, pos + 1, left - k);
      }
    };
    rec(rec, 0, total);
    std::sort(level.begin(), level.end());
    states_.insert(states_.end(), level.begin(), level.end());
  }
  std::map<std::vector<std::uint8_t>, Eigen::Index> index;
  for (std::size_t s = 0; s < states_.size(); ++s) index.emplace(states_[s], static_cast<Eigen::Index>(s));
  auto d = static_cast<Eigen::Index>(states_.size());
  a_.assign(modes_, MatrixXcd::Zero(d, d));
  for (std::size_t j = 0; j < modes_; ++j) {
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (states_[s][j] == 0) continue;
      auto lower = states_[s];
      --lower[j];
      a_[j](index.at(lower), static_cast<Eigen::Index>(s)) = std::sqrt(static_cast<double>(states_[s][j]));
    }
  }
}

MatrixXcd FockRepresentation::a(const VectorXd& x) const {
  VectorXcd kx = ops_.k * x.cast<std::complex<double>>();
  auto d = static_cast<Eigen::Index>(dim());
  MatrixXcd out = MatrixXcd::Zero(d, d);
  for (std::size_t j = 0; j < modes_; ++j) out += std::conj(kx(static_cast<Eigen::Index>(j))) * a_[j];
  return out;
}

MatrixXcd FockRepresentation::a_dagger(const VectorXd& x) const { return a(x).adjoint(); }

MatrixXcd FockRepresentation::field(const VectorXd& x) const {
  MatrixXcd lo = a(x);
  return lo + lo.adjoint();
}

std::complex<double> FockRepresentation::vacuum_npoint(const std::vector<VectorXd>& xs) const {
  std::size_t n = xs.size();
  std::size_t right_len = (n + 1) / 2;
  if (right_len > cutoff_) {
    throw Error(ErrorCode::kTruncationInsufficient, "vacuum " + std::to_string(n) + "-point function needs cutoff >= " +
                                                        std::to_string(right_len));
  }
  // <0|phi_1..phi_k phi_{k+1}..phi_n|0> = <phi_k..phi_1 0 | phi_{k+1}..phi_n 0>; each half
  // stays within the cutoff, so the truncated matrices act exactly.
  std::size_t k = n - right_len;
  auto d = static_cast<Eigen::Index>(dim());
  VectorXcd right = VectorXcd::Zero(d), left = VectorXcd::Zero(d);
  right(0) = 1.0;
  left(0) = 1.0;
  for (std::size_t p = n; p-- > k;) right = field(xs[p]) * right;
  for (std::size_t p = 0; p < k; ++p) left = field(xs[p]) * left;
  return left.dot(right);
}

std::vector<std::size_t> FockRepresentation::sector_columns(std::size_t max_sector) const {
  if (max_sector + 1 > cutoff_) {
    throw Error(ErrorCode::kTruncationInsufficient, "commutators are exact only on sectors <= cutoff - 1 = " +
                                                        std::to_string(cutoff_ == 0 ? 0 : cutoff_ - 1));
  }
  std::vector<std::size_t> cols;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    std::size_t total = 0;
    for (auto v : states_[s]) total += v;
    if (total <= max_sector) cols.push_back(s);
  }
  return cols;
}

double FockRepresentation::ccr_defect(std::size_t max_sector) const {
  auto cols = sector_columns(max_sector);
  double worst = 0.0;
  for (std::size_t j = 0; j < modes_; ++j) {
    for (std::size_t k = 0; k < modes_; ++k) {
      MatrixXcd c = a_[j] * a_[k].adjoint() - a_[k].adjoint() * a_[j];
      for (auto col : cols) {
        auto ci = static_cast<Eigen::Index>(col);
        if (j == k) c(ci, ci) -= 1.0;
        worst = std::max(worst, c.col(ci).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

double FockRepresentation::field_commutator_defect(const VectorXd& x, const VectorXd& y, std::size_t max_sector) const {
  auto cols = sector_columns(max_sector);
  MatrixXcd fx = field(x), fy = field(y);
  MatrixXcd c = fx * fy - fy * fx;
  std::complex<double> itau(0.0, x.dot(ops_.tau * y));
  double worst = 0.0;
  for (auto col : cols) {
    auto ci = static_cast<Eigen::Index>(col);
    c(ci, ci) -= itau;
    worst = std::max(worst, c.col(ci).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::string_view to_string(HsTrend t) {
  switch (t) {
    case HsTrend::kBounded: return "bounded-trend";
    case HsTrend::kDivergent: return "divergent-trend";
    case HsTrend::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json EquivalenceReport::to_json() const {
  return {{"n", ns},           {"c_min", c_min},   {"c_max", c_max},
          {"hs_norms", hs_norms}, {"slope", slope}, {"verdict", std::string(to_string(trend))}};
}

EquivalenceSample equivalence_sample(const MatrixXd& mu1, const MatrixXd& mu2) {
  require_square(mu1, "mu1");
  require_square(mu2, "mu2");
  if (mu1.rows() != mu2.rows()) throw Error(ErrorCode::kInvalidInput, "mu1 and mu2 sizes differ");
  SqrtPair s = spd_sqrt(0.5 * (mu1 + mu1.transpose()));
  if (s.min_eig <= 0.0) throw Error(ErrorCode::kInvalidInput, "mu1 is not positive definite");
  EquivalenceSample out;
  // L Q L^{-1} = L^{-1} (M2 - M1) L^{-1}, symmetric.
  MatrixXd q = s.inv_root * (mu2 - mu1) * s.inv_root;
  out.hs_norm = q.norm();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s.inv_root * mu2 * s.inv_root);
  out.c_min = es.eigenvalues().minCoeff();
  out.c_max = es.eigenvalues().maxCoeff();
  return out;
}

EquivalenceReport equivalence_probe(const std::vector<TruncationInput>& ladder) {
  EquivalenceReport r;
  for (const auto& t : ladder) {
    if (t.tau.size() != 0) {
      validate_mu_tau(t.mu1, t.tau);
      validate_mu_tau(t.mu2, t.tau);
    }
    EquivalenceSample s = equivalence_sample(t.mu1, t.mu2);
    r.ns.push_back(t.n);
    r.c_min.push_back(s.c_min);
    r.c_max.push_back(s.c_max);
    r.hs_norms.push_back(s.hs_norm);
  }
  double top = r.hs_norms.empty() ? 0.0 : *std::max_element(r.hs_norms.begin(), r.hs_norms.end());
  if (top <= 1e-12) {
    r.trend = r.hs_norms.empty() ? HsTrend::kInconclusive : HsTrend::kBounded;
    return r;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < r.ns.size(); ++k) {
    if (r.hs_norms[k] <= 1e-12 * top || r.ns[k] == 0) continue;
    lx.push_back(std::log(static_cast<double>(r.ns[k])));
    ly.push_back(std::log(r.hs_norms[k]));
  }
  if (lx.size() < 2) return r;
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  if (sxx <= 0.0) return r;
  r.slope = sxy / sxx;
  if (r.slope >= 0.4) {
    r.trend = HsTrend::kDivergent;
  } else if (r.slope <= 0.1) {
    r.trend = HsTrend::kBounded;
  }
  return r;
}

MatrixXd random_symplectic(std::size_t modes, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  auto n = static_cast<Eigen::Index>(2 * modes);
  MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) h(i, j) = h(j, i) = g(rng);
  MatrixXd gen = standard_tau(modes) * h;
  return gen.exp();
}

MatrixXd random_covariance(std::size_t modes, std::mt19937_64& rng, bool pure) {
  MatrixXd s = random_symplectic(modes, rng);
  std::uniform_real_distribution<double> u(1.0, 3.0);
  auto n = static_cast<Eigen::Index>(2 * modes);
  VectorXd nu(n);
  for (Eigen::Index k = 0; k < n; k += 2) nu(k) = nu(k + 1) = pure ? 1.0 : u(rng);
  MatrixXd mu = 0.5 * s.transpose() * nu.asDiagonal() * s;
  return 0.5 * (mu + mu.transpose());
}

MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_array()) throw Error(ErrorCode::kInvalidConfig, pointer + ": expected an array of rows");
  auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    std::string at = pointer + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kInvalidConfig, at + ": rows must be arrays of equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorCode::kInvalidConfig, at + "/" + std::to_string(c) + ": expected a number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

}  // namespace ccrlab
