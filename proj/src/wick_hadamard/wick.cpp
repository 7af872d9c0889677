#include "ccrlab/wick.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccrlab/parallel.hpp"

namespace ccrlab::wick {

namespace {

Scalar half(ScalarMode mode) { return Scalar::one(mode) / Scalar::from_int(2, mode); }

bool scalars_match(const Scalar& a, const Scalar& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return a.near(b, tol);
}

Word remove_at(const Word& w, std::size_t pos) {
  Word out;
  out.reserve(w.size() - 1);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (i != pos) out.push_back(w[i]);
  return out;
}

void require_kernel_covers(const OrderingKernel& kappa, const Word& w) {
  for (auto g : w) {
    if (g.value < 1 || g.value > kappa.size()) {
      throw Error(ErrorCode::kInvalidInput, "generator " + std::to_string(g.value) + " outside the ordering kernel");
    }
  }
}

std::size_t ipow(std::size_t b, std::size_t n) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= b;
  return out;
}

std::vector<std::size_t> unflatten(std::size_t k, std::size_t degree, std::size_t basis) {
  std::vector<std::size_t> idx(degree);
  for (std::size_t s = degree; s-- > 0;) {
    idx[s] = k % basis;
    k /= basis;
  }
  return idx;
}

}  // namespace

OrderingKernel::OrderingKernel(std::size_t n, ScalarMode mode, KernelTag tag)
    : n_(n), mode_(mode), tag_(tag), table_(n * n, Scalar::zero(mode)) {}

OrderingKernel OrderingKernel::from_two_point(const TwoPointKernel& omega) {
  OrderingKernel k(omega.size(), omega.mode(), KernelTag::kState);
  for (std::uint32_t i = 1; i <= omega.size(); ++i)
    for (std::uint32_t j = 1; j <= omega.size(); ++j) k.set(i, j, omega(i, j));
  return k;
}

OrderingKernel OrderingKernel::from_symmetric(const std::vector<std::vector<Scalar>>& s, const PairingForm& e,
                                              KernelTag tag) {
  std::size_t n = e.size();
  if (s.size() != n) throw Error(ErrorCode::kInvalidInput, "symmetric part and E differ in size");
  OrderingKernel k(n, e.mode(), tag);
  Scalar i_half = Scalar::imag_unit(e.mode()) * half(e.mode());
  for (std::uint32_t i = 1; i <= n; ++i) {
    if (s[i - 1].size() != n) throw Error(ErrorCode::kInvalidInput, "symmetric part is not square");
    for (std::uint32_t j = 1; j <= n; ++j) k.set(i, j, s[i - 1][j - 1] + i_half * e.at(i, j));
  }
  return k;
}

Scalar OrderingKernel::operator()(GeneratorIndex i, GeneratorIndex j) const {
  if (i.value < 1 || j.value < 1 || i.value > n_ || j.value > n_) {
    throw Error(ErrorCode::kInvalidInput, "generator index outside ordering kernel of size " + std::to_string(n_));
  }
  return table_[(i.value - 1) * n_ + (j.value - 1)];
}

void OrderingKernel::set(std::uint32_t i, std::uint32_t j, const Scalar& v) {
  if (i < 1 || j < 1 || i > n_ || j > n_) {
    throw Error(ErrorCode::kInvalidInput, "ordering kernel entry (" + std::to_string(i) + "," + std::to_string(j) +
                                              ") outside 1.." + std::to_string(n_));
  }
  if (v.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "ordering kernel entry has the wrong scalar mode");
  table_[(i - 1) * n_ + (j - 1)] = v;
}

void OrderingKernel::validate(const PairingForm& e, double tol) const {
  if (e.size() != n_) {
    throw Error(ErrorCode::kOrderingKernelInvalid,
                "kernel on " + std::to_string(n_) + " generators, E on " + std::to_string(e.size()));
  }
  Scalar iu = Scalar::imag_unit(mode_);
  for (std::uint32_t i = 1; i <= n_; ++i)
    for (std::uint32_t j = i + 1; j <= n_; ++j) {
      Scalar anti = at(i, j) - at(j, i);
      Scalar want = e.mode() == mode_ ? iu * e.at(i, j) : Scalar(std::complex<double>(0.0, e.at(i, j).real_double()));
      if (!scalars_match(anti, want, tol)) {
        throw Error(ErrorCode::kOrderingKernelInvalid, "kappa(" + std::to_string(i) + "," + std::to_string(j) +
                                                           ") - kappa(" + std::to_string(j) + "," + std::to_string(i) +
                                                           ") = " + anti.to_string() + " but i E = " + want.to_string());
      }
    }
}

WickElement WickElement::monomial(Word w, const Scalar& c) {
  WickElement out(c.mode());
  out.add_term(std::move(w), c);
  return out;
}

std::size_t WickElement::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.size(); }

Scalar WickElement::coefficient(Word w) const {
  std::sort(w.begin(), w.end());
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

void WickElement::add_term(Word w, const Scalar& c) {
  if (c.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "term mode differs from element mode");
  if (c.is_zero()) return;
  std::sort(w.begin(), w.end());
  auto [it, inserted] = terms_.try_emplace(std::move(w), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WickElement& WickElement::operator+=(const WickElement& o) {
  if (o.mode_ != mode_) throw Error(ErrorCode::kModeMismatch, "adding elements of different scalar modes");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

WickElement& WickElement::operator-=(const WickElement& o) {
  if (o.mode_ != mode_) throw Error(ErrorCode::kModeMismatch, "subtracting elements of different scalar modes");
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

WickElement& WickElement::operator*=(const Scalar& c) {
  if (c.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "scaling by a scalar of a different mode");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

WickElement WickElement::pruned(double tol) const {
  if (mode_ == ScalarMode::kExact) return *this;
  WickElement out(mode_);
  for (const auto& [w, c] : terms_)
    if (std::abs(c.to_complex()) > tol) out.terms_.emplace(w, c);
  return out;
}

double WickElement::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

std::string WickElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += c.to_string();
    if (!w.empty()) {
      out += "*:";
      for (auto g : w) out += "phi(" + std::to_string(g.value) + ")";
      out += ":";
    }
  }
  return out;
}

WickElement normal_order(const AlgebraElement& a, const OrderingKernel& kappa, const PairingForm& e) {
  if (a.mode() != kappa.mode()) throw Error(ErrorCode::kModeMismatch, "element and ordering kernel modes differ");
  kappa.validate(e);
  std::map<Word, WickElement> cache;
  WickElement out(a.mode());
  for (const auto& [word, coeff] : a.terms()) {
    require_kernel_covers(kappa, word);
    WickElement cur = WickElement::monomial({}, Scalar::one(a.mode()));
    Word prefix;
    for (auto g : word) {
      prefix.push_back(g);
      if (auto it = cache.find(prefix); it != cache.end()) {
        cur = it->second;
        continue;
      }
      WickElement next(a.mode());
      for (const auto& [s, c] : cur.terms()) {
        Word grown = s;
        grown.push_back(g);
        next.add_term(grown, c);
        for (std::size_t l = 0; l < s.size(); ++l) next.add_term(remove_at(s, l), c * kappa(s[l], g));
      }
      cur = std::move(next);
      cache.emplace(prefix, cur);
    }
    cur *= coeff;
    out += cur;
  }
  return out;
}

AlgebraElement to_algebra(const WickElement& w, const OrderingKernel& kappa, const PairingForm& e) {
  if (w.mode() != kappa.mode()) throw Error(ErrorCode::kModeMismatch, "element and ordering kernel modes differ");
  kappa.validate(e);
  NormalFormEngine engine(e);
  std::map<Word, AlgebraElement, WordOrder> cache;
  ScalarMode mode = w.mode();
  std::function<const AlgebraElement&(const Word&)> expand = [&](const Word& s) -> const AlgebraElement& {
    if (auto it = cache.find(s); it != cache.end()) return it->second;
    AlgebraElement val = AlgebraElement::unit(mode);
    if (!s.empty()) {
      Word rest(s.begin(), s.end() - 1);
      GeneratorIndex g = s.back();
      AlgebraElement acc = multiply(expand(rest), AlgebraElement::monomial({g}, Scalar::one(mode)));
      for (std::size_t l = 0; l < rest.size(); ++l) acc -= expand(remove_at(rest, l)) * kappa(rest[l], g);
      val = engine.reduce(acc);
    }
    return cache.emplace(s, std::move(val)).first->second;
  };
  AlgebraElement out(mode);
  for (const auto& [s, c] : w.terms()) {
    require_kernel_covers(kappa, s);
    out += expand(s) * c;
  }
  return out;
}

WickElement wick_product(const WickElement& a, const WickElement& b, const OrderingKernel& kappa) {
  if (a.mode() != b.mode() || a.mode() != kappa.mode()) {
    throw Error(ErrorCode::kModeMismatch, "wick_product needs one scalar mode");
  }
  for (const auto* x : {&a, &b}) {
    if (x->degree() > kMaxWickProductDegree) {
      throw Error(ErrorCode::kDegreeGuard, "factor of degree " + std::to_string(x->degree()) + " exceeds " +
                                               std::to_string(kMaxWickProductDegree));
    }
  }
  WickElement out(a.mode());
  for (const auto& [s, cs] : a.terms()) {
    require_kernel_covers(kappa, s);
    for (const auto& [t, ct] : b.terms()) {
      require_kernel_covers(kappa, t);
      std::vector<bool> used(t.size(), false);
      Word left;
      // Each position of s is either left open or contracted with an unused position of t.
      std::function<void(std::size_t, const Scalar&)> walk = [&](std::size_t i, const Scalar& weight) {
        if (i == s.size()) {
          Word merged = left;
          for (std::size_t j = 0; j < t.size(); ++j)
            if (!used[j]) merged.push_back(t[j]);
          out.add_term(std::move(merged), weight);
          return;
        }
        left.push_back(s[i]);
        walk(i + 1, weight);
        left.pop_back();
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (used[j]) continue;
          used[j] = true;
          walk(i + 1, weight * kappa(s[i], t[j]));
          used[j] = false;
        }
      };
      walk(0, cs * ct);
    }
  }
  return out;
}

DifferenceKernel::DifferenceKernel(std::vector<std::vector<Scalar>> d, double tol) : d_(std::move(d)) {
  std::size_t n = d_.size();
  if (n == 0) throw Error(ErrorCode::kInvalidDifference, "difference kernel is empty");
  mode_ = d_[0][0].mode();
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i].size() != n) throw Error(ErrorCode::kInvalidDifference, "difference kernel is not square");
    for (const auto& v : d_[i])
      if (v.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "difference kernel mixes scalar modes");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!scalars_match(d_[i][j], d_[j][i], tol)) {
        throw Error(ErrorCode::kInvalidDifference, "d(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                       ") != d(" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                                                       ")");
      }
}

DifferenceKernel DifferenceKernel::between(const OrderingKernel& from, const OrderingKernel& to) {
  if (from.size() != to.size() || from.mode() != to.mode()) {
    throw Error(ErrorCode::kInvalidDifference, "ordering kernels differ in size or mode");
  }
  std::size_t n = from.size();
  std::vector<std::vector<Scalar>> d(n, std::vector<Scalar>(n));
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = 1; j <= n; ++j) d[i - 1][j - 1] = to.at(i, j) - from.at(i, j);
  return DifferenceKernel(std::move(d));
}

DifferenceKernel DifferenceKernel::operator+(const DifferenceKernel& o) const {
  if (o.size() != size()) throw Error(ErrorCode::kInvalidDifference, "difference kernels differ in size");
  auto d = d_;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) d[i][j] += o.d_[i][j];
  return DifferenceKernel(std::move(d));
}

WickTensor::WickTensor(std::size_t degree, std::size_t basis, ScalarMode mode)
    : degree_(degree), basis_(basis), mode_(mode) {
  if (basis == 0 || basis > kMaxTensorBasis) {
    throw Error(ErrorCode::kDegreeGuard, "tensor basis size " + std::to_string(basis) + " outside 1.." +
                                             std::to_string(kMaxTensorBasis));
  }
  if (degree > kMaxAlphaDegree) {
    throw Error(ErrorCode::kDegreeGuard, "tensor degree " + std::to_string(degree) + " exceeds " +
                                             std::to_string(kMaxAlphaDegree));
  }
  entries_.assign(ipow(basis, degree), Scalar::zero(mode));
}

WickTensor WickTensor::power(const std::vector<Scalar>& f, std::size_t degree) {
  if (f.empty()) throw Error(ErrorCode::kInvalidInput, "empty coefficient vector");
  WickTensor t(degree, f.size(), f[0].mode());
  for (std::size_t k = 0; k < t.entries_.size(); ++k) {
    Scalar v = Scalar::one(t.mode_);
    for (auto i : unflatten(k, degree, f.size())) v *= f[i];
    t.entries_[k] = v;
  }
  return t;
}

std::size_t WickTensor::offset(const std::vector<std::size_t>& idx) const {
  if (idx.size() != degree_) throw Error(ErrorCode::kArity, "tensor index of wrong length");
  std::size_t k = 0;
  for (auto i : idx) {
    if (i >= basis_) throw Error(ErrorCode::kInvalidInput, "tensor index outside the basis");
    k = k * basis_ + i;
  }
  return k;
}

WickTensor WickTensor::symmetrized() const {
  std::map<std::vector<std::size_t>, std::pair<Scalar, long>> groups;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    auto idx = unflatten(k, degree_, basis_);
    std::sort(idx.begin(), idx.end());
    auto [it, inserted] = groups.try_emplace(idx, entries_[k], 1);
    if (!inserted) {
      it->second.first += entries_[k];
      ++it->second.second;
    }
  }
  WickTensor out(degree_, basis_, mode_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    auto idx = unflatten(k, degree_, basis_);
    std::sort(idx.begin(), idx.end());
    const auto& [sum, count] = groups.at(idx);
    out.entries_[k] = sum / Scalar::from_int(count, mode_);
  }
  return out;
}

bool WickTensor::is_symmetric(double tol) const {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    auto idx = unflatten(k, degree_, basis_);
    std::sort(idx.begin(), idx.end());
    if (!scalars_match(entries_[k], at(idx), tol)) return false;
  }
  return true;
}

WickTensor WickTensor::contract(const DifferenceKernel& d) const {
  if (degree_ < 2) throw Error(ErrorCode::kArity, "contraction needs degree >= 2");
  if (d.size() != basis_) throw Error(ErrorCode::kInvalidDifference, "difference kernel and tensor basis differ");
  if (d.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "difference kernel and tensor modes differ");
  WickTensor out(degree_ - 2, basis_, mode_);
  std::size_t rest = out.entries_.size();
  parallel_for(rest, [&](std::size_t r) {
    Scalar acc = Scalar::zero(mode_);
    for (std::size_t i = 0; i < basis_; ++i)
      for (std::size_t j = 0; j < basis_; ++j) {
        const Scalar& v = entries_[(i * basis_ + j) * rest + r];
        if (!v.is_zero() && !d(i, j).is_zero()) acc += v * d(i, j);
      }
    out.entries_[r] = std::move(acc);
  });
  return out;
}

WickTensor WickTensor::conj() const {
  WickTensor out = *this;
  for (auto& v : out.entries_) v = v.conj();
  return out;
}

WickTensor& WickTensor::operator+=(const WickTensor& o) {
  if (o.degree_ != degree_ || o.basis_ != basis_) throw Error(ErrorCode::kArity, "adding tensors of different shape");
  if (o.mode_ != mode_) throw Error(ErrorCode::kModeMismatch, "adding tensors of different scalar modes");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

WickTensor& WickTensor::operator*=(const Scalar& c) {
  if (c.mode() != mode_) throw Error(ErrorCode::kModeMismatch, "scaling by a scalar of a different mode");
  for (auto& v : entries_) v *= c;
  return *this;
}

WickElement WickTensor::to_element() const {
  WickElement out(mode_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].is_zero()) continue;
    Word w;
    for (auto i : unflatten(k, degree_, basis_)) w.push_back(GeneratorIndex{static_cast<std::uint32_t>(i + 1)});
    out.add_term(std::move(w), entries_[k]);
  }
  return out;
}

nlohmann::json WickTensor::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& v : entries_) entries.push_back(v.to_string());
  return {{"degree", degree_}, {"basis", basis_}, {"entries", entries}};
}

WickTensor WickTensor::from_json(const nlohmann::json& j, ScalarMode mode, const std::string& pointer) {
  auto fail = [&](const std::string& key, const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, pointer + "/" + key + ": " + why);
  };
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, pointer + ": tensor must be an object");
  for (const auto& [key, v] : j.items())
    if (key != "degree" && key != "basis" && key != "entries") fail(key, "unknown key");
  for (const char* key : {"degree", "basis", "entries"})
    if (!j.contains(key)) fail(key, "missing");
  if (!j["degree"].is_number_integer() || j["degree"].get<long>() < 0) fail("degree", "must be a non-negative integer");
  if (!j["basis"].is_number_integer() || j["basis"].get<long>() < 1) fail("basis", "must be a positive integer");
  auto degree = j["degree"].get<std::size_t>(), basis = j["basis"].get<std::size_t>();
  if (degree > kMaxAlphaDegree) fail("degree", "exceeds " + std::to_string(kMaxAlphaDegree));
  if (basis == 0 || basis > kMaxTensorBasis) fail("basis", "outside 1.." + std::to_string(kMaxTensorBasis));
  WickTensor t(degree, basis, mode);
  const auto& e = j["entries"];
  if (!e.is_array() || e.size() != t.entries_.size()) {
    fail("entries", "must be an array of " + std::to_string(t.entries_.size()) + " values");
  }
  for (std::size_t k = 0; k < e.size(); ++k) {
    try {
      if (e[k].is_string()) {
        t.entries_[k] = Scalar::parse(e[k].get<std::string>(), mode);
      } else if (e[k].is_number()) {
        t.entries_[k] = Scalar::from_double(e[k].get<double>(), mode);
      } else {
        fail("entries/" + std::to_string(k), "must be a number or a scalar string");
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::kInvalidConfig) throw;
      fail("entries/" + std::to_string(k), err.what());
    }
  }
  return t;
}

Scalar alpha_coefficient(std::size_t n, std::size_t k, ScalarMode mode) {
  if (2 * k > n) return Scalar::zero(mode);
  // n! / (2^k k! (n - 2k)!) = C(n, 2k) (2k - 1)!!
  long c = 1;
  for (std::size_t i = 0; i < 2 * k; ++i) c = c * static_cast<long>(n - i) / static_cast<long>(i + 1);
  for (std::size_t i = 1; i < 2 * k; i += 2) c *= static_cast<long>(i);
  return Scalar::from_int(c, mode);
}

WickSeries alpha_map(const DifferenceKernel& d, const WickSeries& w) {
  WickSeries out;
  for (const auto& [n, t] : w) {
    if (t.degree() != n) throw Error(ErrorCode::kArity, "series key and tensor degree differ");
    if (n > kMaxAlphaDegree) {
      throw Error(ErrorCode::kDegreeGuard, "degree " + std::to_string(n) + " exceeds " + std::to_string(kMaxAlphaDegree));
    }
    WickTensor cur = t.symmetrized();
    for (std::size_t k = 0; 2 * k <= n; ++k) {
      if (k > 0) cur = cur.contract(d);
      WickTensor term = cur;
      term *= alpha_coefficient(n, k, t.mode());
      auto [it, inserted] = out.try_emplace(n - 2 * k, term);
      if (!inserted) it->second += term;
    }
  }
  return out;
}

WickSeries star(const WickSeries& w) {
  WickSeries out;
  for (const auto& [n, t] : w) out.emplace(n, t.conj());
  return out;
}

WickElement to_element(const WickSeries& w) {
  if (w.empty()) return WickElement();
  WickElement out(w.begin()->second.mode());
  for (const auto& [n, t] : w) out += t.to_element();
  return out;
}

bool series_equal(const WickSeries& a, const WickSeries& b) {
  auto is_zero = [](const WickTensor& t) {
    return std::all_of(t.entries().begin(), t.entries().end(), [](const Scalar& v) { return v.is_zero(); });
  };
  for (const auto& [n, t] : a) {
    auto it = b.find(n);
    if (it == b.end() ? !is_zero(t) : !(t == it->second)) return false;
  }
  for (const auto& [n, t] : b)
    if (!a.count(n) && !is_zero(t)) return false;
  return true;
}

double phi2_H_expectation(const minkowski::KernelParams& params, double perturbation) {
  params.validate(true);
  if (params.eps != 0.0) throw Error(ErrorCode::kInvalidInput, "the coincidence limit is taken at eps = 0");
  double scale = std::min(params.length_scale(), 1.0 / params.m);
  std::vector<double> xs;
  std::vector<minkowski::cplx> ys;
  for (int j = 3; j <= 8; ++j) {
    double r = std::ldexp(scale, -j);
    xs.push_back(r * r);
    ys.push_back(minkowski::remainder_w({0.0, r}, params).real());
  }
  return minkowski::extrapolate_to_zero(xs, ys).real() + perturbation;
}

namespace {

constexpr std::array<int, 4> kD1Off{-2, -1, 1, 2};

// Fourth-order stencils grouped as differences, so constants cancel exactly.
template <typename F>
double first_difference(F&& f, double h) {
  return ((f(-2 * h) - f(2 * h)) + 8.0 * (f(h) - f(-h))) / (12.0 * h);
}

template <typename F>
double second_difference(F&& f, double h) {
  return (16.0 * (f(h) + f(-h)) - (f(2 * h) + f(-2 * h)) - 30.0 * f(0.0)) / (12.0 * h * h);
}

Event shifted(const Event& x, std::size_t a, double s) {
  Event y = x;
  y[a] += s;
  return y;
}

struct Derivatives {
  Tensor4 mixed{};  // d_a d_b' w
  Tensor4 xx{};     // d_a d_b w in the first argument
  double w = 0.0;
};

Derivatives point_split(const TwoPointFunction& w, const Event& x, double h) {
  Derivatives d;
  d.w = w(x, x);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      d.mixed[a][b] = first_difference(
          [&](double s) {
            Event xs = shifted(x, a, s);
            return first_difference([&](double t) { return w(xs, shifted(x, b, t)); }, h);
          },
          h);
    }
  for (std::size_t a = 0; a < 4; ++a) {
    d.xx[a][a] = second_difference([&](double s) { return w(shifted(x, a, s), x); }, h);
    for (std::size_t b = a + 1; b < 4; ++b) {
      d.xx[a][b] = d.xx[b][a] = first_difference(
          [&](double s) {
            Event xs = shifted(x, a, s);
            return first_difference([&](double t) { return w(shifted(xs, b, t), x); }, h);
          },
          h);
    }
  }
  return d;
}

StressEnergy assemble(const Derivatives& d, const StressEnergyOptions& opts) {
  const auto& g = kMetricDiag;
  double xi = opts.xi, m2 = opts.m * opts.m;
  double box = 0.0, mixed_trace = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    box += g[c] * d.xx[c][c];
    mixed_trace += g[c] * d.mixed[c][c];
  }
  StressEnergy out;
  out.p_w = -box + m2 * d.w;
  double scalar_part = 2.0 * xi * box + (2.0 * xi - 0.5) * mixed_trace + 0.5 * m2 * d.w;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      double v = (1.0 - 2.0 * xi) * 0.5 * (d.mixed[a][b] + d.mixed[b][a]) - 2.0 * xi * d.xx[a][b];
      if (a == b) v += g[a] * scalar_part;
      out.canonical[a][b] = v;
      out.t[a][b] = v - (a == b ? g[a] * out.p_w / 3.0 : 0.0);
    }
  return out;
}

}  // namespace

double StressEnergy::trace() const {
  double s = 0.0;
  for (std::size_t a = 0; a < 4; ++a) s += kMetricDiag[a] * t[a][a];
  return s;
}

double StressEnergy::canonical_trace() const {
  double s = 0.0;
  for (std::size_t a = 0; a < 4; ++a) s += kMetricDiag[a] * canonical[a][a];
  return s;
}

StressEnergy stress_energy(const TwoPointFunction& w, const Event& x, const StressEnergyOptions& opts) {
  if (!(opts.h > 0.0) || !std::isfinite(opts.h)) throw Error(ErrorCode::kInvalidInput, "point-split step must be > 0");
  if (!(opts.m >= 0.0)) throw Error(ErrorCode::kInvalidInput, "m must be >= 0");
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::kInvalidInput, "tolerance must be > 0");
  StressEnergy coarse = assemble(point_split(w, x, opts.h), opts);
  StressEnergy fine = assemble(point_split(w, x, 0.5 * opts.h), opts);
  StressEnergy out;
  double err = 0.0, size = 1.0;
  auto combine = [](double c, double f) { return (16.0 * f - c) / 15.0; };
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      out.t[a][b] = combine(coarse.t[a][b], fine.t[a][b]);
      out.canonical[a][b] = combine(coarse.canonical[a][b], fine.canonical[a][b]);
      err = std::max(err, std::abs(fine.t[a][b] - coarse.t[a][b]) / 15.0);
      size = std::max(size, std::abs(out.t[a][b]));
    }
  out.p_w = combine(coarse.p_w, fine.p_w);
  err = std::max(err, std::abs(fine.p_w - coarse.p_w) / 15.0);
  out.error_estimate = err;
  if (!std::isfinite(err) || err > opts.tol * size) {
    throw Error(ErrorCode::kResolution, "point-split step " + std::to_string(opts.h) + " leaves error estimate " +
                                            std::to_string(err) + " above " + std::to_string(opts.tol * size));
  }
  return out;
}

double divergence_residual(const TwoPointFunction& w, const Event& x, const StressEnergyOptions& opts, double hx) {
  if (!(hx > 0.0)) throw Error(ErrorCode::kInvalidInput, "divergence step must be > 0");
  std::array<double, 4> div{};
  for (std::size_t a = 0; a < 4; ++a) {
    std::map<int, Tensor4> ts;
    for (int i : kD1Off) ts[i] = stress_energy(w, shifted(x, a, i * hx), opts).t;
    for (std::size_t b = 0; b < 4; ++b) {
      auto component = [&](double s) { return ts.at(static_cast<int>(std::lround(s / hx)))[a][b]; };
      div[b] += kMetricDiag[a] * first_difference(component, hx);
    }
  }
  double worst = 0.0;
  for (double v : div) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace ccrlab::wick
