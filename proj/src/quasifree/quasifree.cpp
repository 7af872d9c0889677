#include "ccrlab/quasifree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace ccrlab {

namespace {

void check_guard(std::size_t n, std::size_t guard) {
  if (n > guard) {
    throw Error(ErrorCode::kDegreeGuard,
                "pairing order " + std::to_string(n) + " exceeds guard " + std::to_string(guard));
  }
}

void enumerate_rec(std::uint32_t open_mask, std::size_t n, Pairing& current, std::vector<Pairing>& out) {
  if (open_mask == 0) {
    out.push_back(current);
    return;
  }
  auto first = static_cast<std::uint32_t>(__builtin_ctz(open_mask));
  std::uint32_t rest = open_mask & ~(1u << first);
  for (std::uint32_t j = first + 1; j < n; ++j) {
    if (!(rest & (1u << j))) continue;
    current.emplace_back(first + 1, j + 1);
    enumerate_rec(rest & ~(1u << j), n, current, out);
    current.pop_back();
  }
}

bool real_nonnegative(const Scalar& v, double tol) {
  if (v.is_exact()) return sgn(v.exact_value().im()) == 0 && sgn(v.exact_value().re()) >= 0;
  auto z = v.to_complex();
  return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z)) && z.real() >= -tol;
}

}  // namespace

std::vector<Pairing> enumerate_pairings(std::size_t n, std::size_t guard) {
  if (n % 2 != 0) throw Error(ErrorCode::kParity, "no perfect matching of an odd set (n=" + std::to_string(n) + ")");
  check_guard(n, guard);
  if (n > 30) throw Error(ErrorCode::kDegreeGuard, "pairing enumeration supports n <= 30");
  std::vector<Pairing> out;
  out.reserve(double_factorial_pairings(n));
  Pairing current;
  auto mask = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  enumerate_rec(mask, n, current, out);
  return out;
}

std::uint64_t double_factorial_pairings(std::size_t n) {
  if (n % 2 != 0) return 0;
  std::uint64_t r = 1;
  for (std::size_t k = n; k > 1; k -= 2) r *= k - 1;
  return r;
}

TwoPointKernel::TwoPointKernel(std::size_t n, ScalarMode mode) : n_(n), mode_(mode), table_(n * n) {}

void TwoPointKernel::set(std::uint32_t i, std::uint32_t j, const Scalar& v) {
  if (i < 1 || j < 1 || i > n_ || j > n_) throw Error(ErrorCode::kInvalidInput, "kernel index outside 1..n");
  if (v.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "kernel entry of a different scalar mode");
  table_[(i - 1) * n_ + (j - 1)] = v;
}

bool TwoPointKernel::has(std::uint32_t i, std::uint32_t j) const {
  return i >= 1 && j >= 1 && i <= n_ && j <= n_ && table_[(i - 1) * n_ + (j - 1)].has_value();
}

const Scalar& TwoPointKernel::operator()(std::uint32_t i, std::uint32_t j) const {
  if (!has(i, j)) {
    throw Error(ErrorCode::kIncompleteKernel,
                "two-point kernel has no entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return *table_[(i - 1) * n_ + (j - 1)];
}

PairingForm TwoPointKernel::commutator_form() const {
  PairingForm e(n_, mode_);
  Scalar two = Scalar::from_int(2, mode_);
  for (std::uint32_t i = 1; i <= n_; ++i)
    for (std::uint32_t j = i + 1; j <= n_; ++j) e.set(i, j, two * (*this)(i, j).imag_part());
  return e;
}

void TwoPointKernel::check_consistency(double tol) const {
  bool exact = mode_ == ScalarMode::kExact;
  for (std::uint32_t i = 1; i <= n_; ++i) {
    for (std::uint32_t j = i + 1; j <= n_; ++j) {
      const Scalar& a = (*this)(i, j);
      const Scalar& b = (*this)(j, i);
      // Re symmetric and Im antisymmetric <=> omega_ji = conj(omega_ij).
      bool ok = exact ? a.conj() == b : a.conj().near(b, tol * std::max(1.0, std::abs(a.to_complex())));
      if (!ok) {
        throw Error(ErrorCode::kKernelInconsistency, "omega(" + std::to_string(j) + "," + std::to_string(i) +
                                                         ") is not conj(omega(" + std::to_string(i) + "," +
                                                         std::to_string(j) + "))");
      }
    }
    if (!real_nonnegative((*this)(i, i), tol)) {
      throw Error(ErrorCode::kKernelInconsistency,
                  "diagonal omega(" + std::to_string(i) + "," + std::to_string(i) + ") must be real and >= 0");
    }
  }
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> TwoPointKernel::cauchy_schwarz_violations(double tol) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> bad;
  for (std::uint32_t i = 1; i <= n_; ++i) {
    for (std::uint32_t j = i + 1; j <= n_; ++j) {
      // |E|^2/4 = (Im omega_ij)^2.
      if (mode_ == ScalarMode::kExact) {
        mpq_class im = (*this)(i, j).exact_value().im();
        mpq_class lhs = im * im;
        mpq_class rhs = (*this)(i, i).exact_value().re() * (*this)(j, j).exact_value().re();
        if (lhs > rhs) bad.emplace_back(i, j);
      } else {
        double im = (*this)(i, j).to_complex().imag();
        double rhs = (*this)(i, i).real_double() * (*this)(j, j).real_double();
        if (im * im > rhs + tol * std::max(1.0, rhs)) bad.emplace_back(i, j);
      }
    }
  }
  return bad;
}

TwoPointKernel TwoPointKernel::from_covariance(const std::vector<std::vector<Scalar>>& mu, const PairingForm& e) {
  std::size_t n = e.size();
  if (mu.size() != n) throw Error(ErrorCode::kInvalidInput, "covariance and pairing form sizes differ");
  ScalarMode mode = e.mode();
  TwoPointKernel k(n, mode);
  Scalar half_i = Scalar::imag_unit(mode) / Scalar::from_int(2, mode);
  for (std::uint32_t i = 1; i <= n; ++i) {
    if (mu[i - 1].size() != n) throw Error(ErrorCode::kInvalidInput, "covariance must be square");
    for (std::uint32_t j = 1; j <= n; ++j) k.set(i, j, mu[i - 1][j - 1] + half_i * e.at(i, j));
  }
  return k;
}

nlohmann::json TwoPointKernel::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::uint32_t i = 1; i <= n_; ++i) {
    for (std::uint32_t j = 1; j <= n_; ++j) {
      if (!has(i, j)) continue;
      const Scalar& v = (*this)(i, j);
      if (mode_ == ScalarMode::kExact) {
        entries.push_back({i, j, v.to_string()});
      } else {
        auto z = v.to_complex();
        entries.push_back({i, j, {z.real(), z.imag()}});
      }
    }
  }
  return {{"n", n_}, {"mode", std::string(ccrlab::to_string(mode_))}, {"entries", entries}};
}

TwoPointKernel TwoPointKernel::from_json(const nlohmann::json& j) {
  try {
    std::size_t n = j.at("n").get<std::size_t>();
    std::string mode_text = j.value("mode", std::string("exact"));
    if (mode_text != "exact" && mode_text != "float") throw Error(ErrorCode::kParse, "/mode must be exact or float");
    ScalarMode mode = mode_text == "exact" ? ScalarMode::kExact : ScalarMode::kFloat;
    TwoPointKernel k(n, mode);
    const auto& entries = j.at("entries");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& row = entries[e];
      std::string where = "/entries/" + std::to_string(e);
      if (!row.is_array() || row.size() != 3) throw Error(ErrorCode::kParse, where + " must be [i, j, value]");
      auto i = row[0].get<std::uint32_t>();
      auto jj = row[1].get<std::uint32_t>();
      const auto& v = row[2];
      Scalar s;
      if (v.is_string()) {
        s = Scalar::parse(v.get<std::string>(), mode);
      } else if (v.is_array() && v.size() == 2) {
        if (mode == ScalarMode::kExact) {
          s = Scalar::exact(mpq_class(v[0].get<double>()), mpq_class(v[1].get<double>()));
        } else {
          s = Scalar::floating(v[0].get<double>(), v[1].get<double>());
        }
      } else if (v.is_number()) {
        s = Scalar::from_double(v.get<double>(), mode);
      } else {
        throw Error(ErrorCode::kParse, where + "/2 must be a string, number or [re, im]");
      }
      if (i < 1 || jj < 1 || i > n || jj > n) throw Error(ErrorCode::kParse, where + " index outside 1..n");
      k.set(i, jj, s);
    }
    return k;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("two-point kernel JSON: ") + ex.what());
  }
}

QuasifreeState::QuasifreeState(TwoPointKernel kernel, double tol) : kernel_(std::move(kernel)) {
  kernel_.check_consistency(tol);
}

Scalar QuasifreeState::npoint(const Word& indices, std::size_t guard) const {
  std::size_t n = indices.size();
  ScalarMode mode = kernel_.mode();
  if (n == 0) return Scalar::one(mode);
  if (n % 2 != 0) return Scalar::zero(mode);
  check_guard(n, guard);
  if (n > 30) throw Error(ErrorCode::kDegreeGuard, "npoint supports n <= 30");
  // Pairing sum by memoized recursion over the set of open positions:
  // S(mask) = sum_{j in mask, j > first} omega(first, j) S(mask \ {first, j}).
  std::vector<std::optional<Scalar>> memo(std::size_t{1} << n);
  memo[0] = Scalar::one(mode);
  auto rec = [&](auto&& self, std::uint32_t mask) -> const Scalar& {
    auto& slot = memo[mask];
    if (slot) return *slot;
    auto first = static_cast<std::uint32_t>(__builtin_ctz(mask));
    std::uint32_t rest = mask & ~(1u << first);
    Scalar sum = Scalar::zero(mode);
    for (std::uint32_t j = first + 1; j < n; ++j) {
      if (!(rest & (1u << j))) continue;
      const Scalar& w = kernel_(indices[first].value, indices[j].value);
      if (w.is_zero()) continue;
      sum += w * self(self, rest & ~(1u << j));
    }
    memo[mask] = std::move(sum);
    return *memo[mask];
  };
  return rec(rec, static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1));
}

Scalar QuasifreeState::evaluate(const AlgebraElement& a, std::size_t guard) const {
  if (a.mode() != kernel_.mode()) throw Error(ErrorCode::kModeMismatch, "element and state use different scalar modes");
  Scalar out = Scalar::zero(a.mode());
  for (const auto& [w, c] : a.terms()) {
    if (w.size() % 2 != 0) continue;
    out += c * npoint(w, guard);
  }
  return out;
}

nlohmann::json GramReport::to_json() const {
  return {{"verdict", psd ? "psd" : "not-psd"},
          {"min_eigenvalue", min_eigenvalue},
          {"trace", trace},
          {"tolerance", tolerance},
          {"size", matrix.size()}};
}

GramReport gram_positivity(const QuasifreeState& state, const std::vector<AlgebraElement>& elements,
                           std::size_t degree_guard) {
  std::size_t m = elements.size();
  for (const auto& a : elements) {
    if (a.degree() > degree_guard) {
      throw Error(ErrorCode::kDegreeGuard, "Gram element of degree " + std::to_string(a.degree()) +
                                               " exceeds guard " + std::to_string(degree_guard));
    }
  }
  std::vector<AlgebraElement> starred;
  starred.reserve(m);
  for (const auto& a : elements) starred.push_back(star(a));
  Eigen::MatrixXcd g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          state.evaluate(multiply(starred[i], elements[j])).to_complex();

  GramReport r;
  r.trace = g.trace().real();
  double scale = std::max(1.0, std::abs(r.trace));
  double herm = (g - g.adjoint()).cwiseAbs().maxCoeff();
  if (m > 0 && herm > 1e-10 * scale) {
    throw Error(ErrorCode::kKernelInconsistency,
                "Gram matrix is not hermitian (defect " + std::to_string(herm) + "); the kernel violates omega(f,g) - omega(g,f) = iE(f,g)");
  }
  r.matrix.assign(m, std::vector<std::complex<double>>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r.matrix[i][j] = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  if (m == 0) {
    r.psd = true;
    return r;
  }
  Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.tolerance = 1e-10 * std::abs(r.trace);
  r.psd = r.min_eigenvalue >= -r.tolerance;
  return r;
}

}  // namespace ccrlab
