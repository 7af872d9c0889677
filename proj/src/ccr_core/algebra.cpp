#include "ccrlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace ccrlab {

Word make_word(std::initializer_list<std::uint32_t> indices) {
  Word w;
  w.reserve(indices.size());
  for (auto i : indices) w.push_back(GeneratorIndex{i});
  return w;
}

bool is_nondecreasing(const Word& w) { return std::is_sorted(w.begin(), w.end()); }

AlgebraElement AlgebraElement::unit(ScalarMode mode) { return scalar(Scalar::one(mode)); }

AlgebraElement AlgebraElement::scalar(const Scalar& c) { return monomial({}, c); }

AlgebraElement AlgebraElement::generator(std::uint32_t index, ScalarMode mode) {
  return monomial({GeneratorIndex{index}}, Scalar::one(mode));
}

AlgebraElement AlgebraElement::monomial(const Word& word, const Scalar& coeff) {
  AlgebraElement a(coeff.mode());
  a.add_term(word, coeff);
  return a;
}

std::size_t AlgebraElement::degree() const {
  // Map order is graded, so the last word has maximal length.
  return terms_.empty() ? 0 : terms_.rbegin()->first.size();
}

Scalar AlgebraElement::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

void AlgebraElement::add_term(const Word& w, const Scalar& c) {
  if (c.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "term mode differs from element mode");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (o.mode_ != mode_) throw Error(ErrorCode::kModeMismatch, "adding elements of different scalar modes");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (o.mode_ != mode_) throw Error(ErrorCode::kModeMismatch, "subtracting elements of different scalar modes");
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Scalar& c) {
  if (c.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "scaling by a scalar of a different mode");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.mode() != b.mode()) throw Error(ErrorCode::kModeMismatch, "multiplying elements of different scalar modes");
  AlgebraElement out(a.mode());
  Word w;
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      w.assign(wa.begin(), wa.end());
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  }
  return out;
}

AlgebraElement star(const AlgebraElement& a) {
  AlgebraElement out(a.mode());
  for (const auto& [w, c] : a.terms()) {
    Word r(w.rbegin(), w.rend());
    out.add_term(r, c.conj());
  }
  return out;
}

AlgebraElement AlgebraElement::pruned(double tol) const {
  if (mode_ == ScalarMode::kExact) return *this;
  AlgebraElement out(mode_);
  for (const auto& [w, c] : terms_) {
    if (std::abs(c.to_complex()) > tol) out.terms_.emplace(w, c);
  }
  return out;
}

double AlgebraElement::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

std::string AlgebraElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += c.to_string();
    if (!w.empty()) {
      out += "*";
      for (auto g : w) out += "phi(" + std::to_string(g.value) + ")";
    }
  }
  return out;
}

AlgebraElement AlgebraElement::parse(std::string_view text, ScalarMode mode) {
  AlgebraElement out(mode);
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "0" || text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(" + ", pos);
    std::string_view term = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    std::size_t phi = term.find("phi(");
    Word w;
    std::string_view coeff_text = term;
    if (phi != std::string_view::npos) {
      coeff_text = phi == 0 ? std::string_view("1") : term.substr(0, phi);
      if (phi > 0) {
        if (coeff_text.back() != '*') throw Error(ErrorCode::kParse, "expected '*' before phi in '" + std::string(term) + "'");
        coeff_text.remove_suffix(1);
      }
      std::string_view rest = term.substr(phi);
      while (!rest.empty()) {
        if (rest.substr(0, 4) != "phi(") throw Error(ErrorCode::kParse, "expected phi( in '" + std::string(term) + "'");
        auto close = rest.find(')');
        if (close == std::string_view::npos) throw Error(ErrorCode::kParse, "unterminated phi(");
        std::string idx(rest.substr(4, close - 4));
        char* end = nullptr;
        unsigned long v = std::strtoul(idx.c_str(), &end, 10);
        if (idx.empty() || *end != '\0' || v == 0) throw Error(ErrorCode::kParse, "bad generator index '" + idx + "'");
        w.push_back(GeneratorIndex{static_cast<std::uint32_t>(v)});
        rest.remove_prefix(close + 1);
      }
    }
    out.add_term(w, Scalar::parse(coeff_text, mode));
    if (next == std::string_view::npos) break;
    pos = next + 3;
  }
  return out;
}

PairingForm::PairingForm(std::size_t n, ScalarMode mode)
    : n_(n), mode_(mode), upper_(n * (n > 0 ? n - 1 : 0) / 2, Scalar::zero(mode)) {}

PairingForm PairingForm::standard_symplectic(std::size_t pairs, ScalarMode mode) {
  PairingForm e(2 * pairs, mode);
  for (std::uint32_t k = 1; k <= pairs; ++k) e.set(2 * k - 1, 2 * k, Scalar::one(mode));
  return e;
}

std::size_t PairingForm::index(std::uint32_t i, std::uint32_t j) const {
  // i < j, both 1-based.
  std::size_t r = i - 1, c = j - 1;
  return r * n_ - r * (r + 1) / 2 + (c - r - 1);
}

Scalar PairingForm::operator()(GeneratorIndex gi, GeneratorIndex gj) const {
  std::uint32_t i = gi.value, j = gj.value;
  if (i < 1 || j < 1 || i > n_ || j > n_) {
    throw Error(ErrorCode::kInvalidInput, "generator index outside pairing form of size " + std::to_string(n_));
  }
  if (i == j) return Scalar::zero(mode_);
  if (i < j) return upper_[index(i, j)];
  return -upper_[index(j, i)];
}

void PairingForm::set(std::uint32_t i, std::uint32_t j, const Scalar& v) {
  if (i < 1 || j < 1 || i > n_ || j > n_ || i == j) {
    throw Error(ErrorCode::kInvalidInput, "invalid pairing-form entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  if (v.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "pairing-form entry of different mode");
  if (!v.imag_part().is_zero()) throw Error(ErrorCode::kInvalidInput, "pairing-form entries must be real");
  if (i < j) {
    upper_[index(i, j)] = v;
  } else {
    upper_[index(j, i)] = -v;
  }
}

std::size_t PairingForm::rank() const {
  if (n_ == 0) return 0;
  Eigen::MatrixXd m(n_, n_);
  for (std::uint32_t i = 1; i <= n_; ++i) {
    for (std::uint32_t j = 1; j <= n_; ++j) m(i - 1, j - 1) = at(i, j).real_double();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  double tol = 1e-12 * std::max(1.0, s(0));
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) > tol ? 1 : 0;
  return r;
}

nlohmann::json PairingForm::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint32_t i = 1; i < n_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::uint32_t j = i + 1; j <= n_; ++j) {
      const Scalar& v = upper_[index(i, j)];
      if (mode_ == ScalarMode::kExact) {
        row.push_back(rational_to_string(v.exact_value().re()));
      } else {
        row.push_back(v.real_double());
      }
    }
    rows.push_back(row);
  }
  return {{"n", n_}, {"mode", std::string(ccrlab::to_string(mode_))}, {"upper", rows}};
}

PairingForm PairingForm::from_json(const nlohmann::json& j) {
  try {
    std::size_t n = j.at("n").get<std::size_t>();
    std::string mode_text = j.value("mode", std::string("exact"));
    if (mode_text != "exact" && mode_text != "float") throw Error(ErrorCode::kParse, "/mode must be exact or float");
    ScalarMode mode = mode_text == "exact" ? ScalarMode::kExact : ScalarMode::kFloat;
    PairingForm e(n, mode);
    const auto& rows = j.at("upper");
    if (n > 0 && rows.size() != n - 1) throw Error(ErrorCode::kParse, "/upper must have n-1 rows");
    for (std::uint32_t i = 1; i < n; ++i) {
      const auto& row = rows.at(i - 1);
      if (row.size() != n - i) throw Error(ErrorCode::kParse, "/upper/" + std::to_string(i - 1) + " has wrong length");
      for (std::uint32_t jj = i + 1; jj <= n; ++jj) {
        const auto& v = row.at(jj - i - 1);
        Scalar s = v.is_string() ? Scalar::parse(v.get<std::string>(), mode) : Scalar::from_double(v.get<double>(), mode);
        e.set(i, jj, s);
      }
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("pairing form JSON: ") + ex.what());
  }
}

void NormalFormEngine::insert_letter(const Word& sorted, GeneratorIndex g, const Scalar& coeff, AlgebraElement& out) {
  // sorted = s' h with h > g: s' h g = (s' g) h - i E(g,h) s'.
  std::size_t len = sorted.size();
  std::size_t k = len;
  while (k > 0 && sorted[k - 1] > g) --k;
  Word w(sorted.begin(), sorted.begin() + k);
  w.push_back(g);
  w.insert(w.end(), sorted.begin() + k, sorted.end());
  out.add_term(w, coeff);
  // Contractions: g passes each h = sorted[p], p >= k (moving right to left).
  // Passing sorted[p] produces -i E(g, sorted[p]) times (sorted without p) with g
  // still to be inserted into the prefix sorted[0..p), followed by sorted(p, len).
  Scalar minus_i = -Scalar::imag_unit(coeff.mode());
  for (std::size_t p = len; p-- > k;) {
    Scalar e = form_(g, sorted[p]);
    if (e.is_zero()) continue;
    Word prefix(sorted.begin(), sorted.begin() + p);
    Word tail(sorted.begin() + p + 1, sorted.end());
    // The contraction removes both g and sorted[p]; the remaining word prefix+tail is sorted.
    Word rest = prefix;
    rest.insert(rest.end(), tail.begin(), tail.end());
    out.add_term(rest, coeff * minus_i * e);
  }
}

const AlgebraElement& NormalFormEngine::reduce_word(const Word& w) {
  if (auto it = cache_.find(w); it != cache_.end()) return it->second;
  ScalarMode mode = form_.mode();
  AlgebraElement acc = AlgebraElement::unit(mode);
  for (GeneratorIndex g : w) {
    AlgebraElement next(mode);
    for (const auto& [s, c] : acc.terms()) insert_letter(s, g, c, next);
    acc = std::move(next);
  }
  return cache_.emplace(w, std::move(acc)).first->second;
}

AlgebraElement NormalFormEngine::reduce(const AlgebraElement& a) {
  if (a.mode() != form_.mode()) throw Error(ErrorCode::kModeMismatch, "element and pairing form use different scalar modes");
  AlgebraElement out(a.mode());
  for (const auto& [w, c] : a.terms()) {
    if (is_nondecreasing(w)) {
      out.add_term(w, c);
      continue;
    }
    for (const auto& [s, d] : reduce_word(w).terms()) out.add_term(s, c * d);
  }
  return out;
}

AlgebraElement normal_form(const AlgebraElement& a, const PairingForm& form) {
  NormalFormEngine engine(form);
  return engine.reduce(a);
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b, const PairingForm& form) {
  return normal_form(multiply(a, b) - multiply(b, a), form);
}

std::optional<Parity> detect_parity(const std::vector<std::vector<Scalar>>& sigma, const PairingForm& form, double tol) {
  std::size_t n = form.size();
  if (sigma.size() != n) throw Error(ErrorCode::kInvalidInput, "sigma must be n x n");
  for (const auto& row : sigma) {
    if (row.size() != n) throw Error(ErrorCode::kInvalidInput, "sigma must be n x n");
  }
  ScalarMode mode = form.mode();
  bool preserves = true, flips = true;
  for (std::uint32_t a = 1; a <= n; ++a) {
    for (std::uint32_t b = a + 1; b <= n; ++b) {
      // (sigma^T E sigma)_ab = sum_ij sigma_ia E_ij sigma_jb.
      Scalar s = Scalar::zero(mode);
      for (std::uint32_t i = 1; i <= n; ++i) {
        if (sigma[i - 1][a - 1].is_zero()) continue;
        for (std::uint32_t j = 1; j <= n; ++j) {
          if (i == j || sigma[j - 1][b - 1].is_zero()) continue;
          s += sigma[i - 1][a - 1] * form.at(i, j) * sigma[j - 1][b - 1];
        }
      }
      Scalar e = form.at(a, b);
      if (mode == ScalarMode::kExact) {
        preserves = preserves && (s == e);
        flips = flips && (s == -e);
      } else {
        preserves = preserves && s.near(e, tol);
        flips = flips && s.near(-e, tol);
      }
    }
  }
  if (preserves) return Parity::kPreserving;
  if (flips) return Parity::kReversing;
  return std::nullopt;
}

InducedMap::InducedMap(std::vector<std::vector<Scalar>> sigma, Parity parity, const PairingForm& form, double tol)
    : sigma_(std::move(sigma)), parity_(parity), mode_(form.mode()) {
  for (const auto& row : sigma_) {
    for (const auto& v : row) {
      if (v.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "sigma entries must match the pairing-form mode");
      if (!v.imag_part().is_zero()) throw Error(ErrorCode::kInvalidInput, "sigma must be real");
    }
  }
  auto detected = detect_parity(sigma_, form, tol);
  // With E = 0 both parities hold; accept whichever was requested.
  bool ok = detected.has_value() && (*detected == parity || form.rank() == 0);
  if (!ok) {
    throw Error(ErrorCode::kInvalidSymmetry, "sigma does not act on E with the requested parity");
  }
}

AlgebraElement InducedMap::image_of_generator(GeneratorIndex j) const {
  std::size_t n = sigma_.size();
  if (j.value < 1 || j.value > n) throw Error(ErrorCode::kInvalidInput, "generator outside sigma's span");
  AlgebraElement out(mode_);
  for (std::uint32_t i = 1; i <= n; ++i) out.add_term({GeneratorIndex{i}}, sigma_[i - 1][j.value - 1]);
  return out;
}

AlgebraElement InducedMap::operator()(const AlgebraElement& a) const {
  if (a.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "element mode differs from induced map mode");
  std::size_t n = sigma_.size();
  std::vector<AlgebraElement> images;
  images.reserve(n);
  for (std::uint32_t j = 1; j <= n; ++j) images.push_back(image_of_generator({j}));
  AlgebraElement out(mode_);
  for (const auto& [w, c] : a.terms()) {
    AlgebraElement term = AlgebraElement::scalar(parity_ == Parity::kReversing ? c.conj() : c);
    for (GeneratorIndex g : w) {
      if (g.value < 1 || g.value > n) throw Error(ErrorCode::kInvalidInput, "generator outside sigma's span");
      term = multiply(term, images[g.value - 1]);
    }
    out += term;
  }
  return out;
}

AlgebraElement field(const SpanVector& u) {
  if (u.empty()) throw Error(ErrorCode::kInvalidInput, "empty span vector");
  AlgebraElement out(u.front().mode());
  for (std::uint32_t j = 0; j < u.size(); ++j) out.add_term({GeneratorIndex{j + 1}}, u[j]);
  return out;
}

Scalar simplicity_probe(const AlgebraElement& a, const std::vector<SpanVector>& probes, const PairingForm& form) {
  NormalFormEngine engine(form);
  AlgebraElement acc = engine.reduce(a);
  if (acc.degree() != probes.size()) {
    throw Error(ErrorCode::kArity, "element has top degree " + std::to_string(acc.degree()) + " but " +
                                       std::to_string(probes.size()) + " probes were given");
  }
  for (const auto& u : probes) {
    AlgebraElement f = field(u);
    acc = engine.reduce(multiply(acc, f) - multiply(f, acc));
  }
  return acc.unit_coefficient();
}

std::optional<std::vector<SpanVector>> find_simplicity_witness(const AlgebraElement& a, const PairingForm& form) {
  std::size_t k = normal_form(a, form).degree();
  if (k == 0) return std::nullopt;
  std::size_t n = form.size();
  ScalarMode mode = form.mode();
  auto basis = [&](std::size_t j) {
    SpanVector u(n, Scalar::zero(mode));
    u[j] = Scalar::one(mode);
    return u;
  };
  // Iterate non-decreasing index tuples (multisets) of length k.
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    std::vector<SpanVector> probes;
    probes.reserve(k);
    for (auto j : idx) probes.push_back(basis(j));
    Scalar v = simplicity_probe(a, probes, form);
    bool nonzero = mode == ScalarMode::kExact ? !v.is_zero() : std::abs(v.to_complex()) > 1e-12;
    if (nonzero) return probes;
    std::size_t p = k;
    while (p > 0 && idx[p - 1] == n - 1) --p;
    if (p == 0) break;
    ++idx[p - 1];
    for (std::size_t q = p; q < k; ++q) idx[q] = idx[p - 1];
  }
  return std::nullopt;
}

}  // namespace ccrlab
