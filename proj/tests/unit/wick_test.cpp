#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"

#include "ccrlab/wick.hpp"
#include "../support/oracles.hpp"
#include "../support/random_elements.hpp"

using namespace ccrlab;
using namespace ccrlab::wick;
using ccrlab::testing::random_element;
using ccrlab::testing::random_form;
using ccrlab::testing::random_rational;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kParse;
}

Scalar q(long p, long r = 1) { return Scalar::exact(mpq_class(p, r)); }

std::vector<std::vector<Scalar>> random_symmetric(std::mt19937& rng, std::size_t n, bool real = false) {
  std::vector<std::vector<Scalar>> s(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Scalar v = random_rational(rng);
      if (real) v = v.real_part();
      s[i][j] = s[j][i] = v;
    }
  return s;
}

// Symmetric part of kappa as a table.
Scalar sym(const OrderingKernel& k, GeneratorIndex i, GeneratorIndex j) { return (k(i, j) + k(j, i)) / q(2); }

// (1/n!) sum over orderings of the letters of w, in normal form.
AlgebraElement symmetrized_product(const Word& w, const PairingForm& e) {
  std::vector<std::size_t> p(w.size());
  std::iota(p.begin(), p.end(), 0);
  AlgebraElement acc(ScalarMode::kExact);
  long count = 0;
  do {
    Word v;
    for (auto i : p) v.push_back(w[i]);
    acc.add_term(v, q(1));
    ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return normal_form(acc, e) * q(1, count);
}

// Coefficient of f_1...f_n in (1/i^n) exp(i phi(f) + kappa^S(f, f)/2) for distinct labels:
// sum over partial pairings P of (-1)^|P| prod kappa^S * Sym(unpaired).
AlgebraElement exponential_oracle(const Word& w, const OrderingKernel& k, const PairingForm& e) {
  std::size_t n = w.size();
  AlgebraElement out(ScalarMode::kExact);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> paired, open;
    for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? paired : open).push_back(i);
    if (paired.size() % 2) continue;
    Word rest;
    for (auto i : open) rest.push_back(w[i]);
    AlgebraElement sym_rest = symmetrized_product(rest, e);
    auto pairings = paired.empty() ? std::set<Pairing>{Pairing{}} : ccrlab::testing::brute_force_matchings(paired.size());
    for (const auto& pr : pairings) {
      Scalar c = paired.size() / 2 % 2 ? q(-1) : q(1);
      for (auto [a, b] : pr) c *= sym(k, w[paired[a - 1]], w[paired[b - 1]]);
      out += sym_rest * c;
    }
  }
  return out;
}

WickElement random_wick(std::mt19937& rng, std::size_t n_gen, std::size_t max_degree, std::size_t terms = 4) {
  std::uniform_int_distribution<std::size_t> deg(0, max_degree);
  WickElement w(ScalarMode::kExact);
  for (std::size_t t = 0; t < terms; ++t) w.add_term(ccrlab::testing::random_word(rng, n_gen, deg(rng)), random_rational(rng));
  return w;
}

WickTensor random_tensor(std::mt19937& rng, std::size_t degree, std::size_t basis) {
  WickTensor t(degree, basis);
  for (std::size_t k = 0; k < t.entries().size(); ++k) t.at_flat(k) = random_rational(rng);
  return t.symmetrized();
}

}  // namespace

TEST_CASE("ordering kernel validation") {
  std::mt19937 rng(1);
  PairingForm e = random_form(rng, 4);
  auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 4), e);
  CHECK_NOTHROW(k.validate(e));
  k.set(1, 2, k.at(1, 2) + q(1, 3));
  CHECK(code_of([&] { k.validate(e); }) == ErrorCode::kOrderingKernelInvalid);
  CHECK(code_of([&] { k.validate(PairingForm(3)); }) == ErrorCode::kOrderingKernelInvalid);
  CHECK(code_of([&] { normal_order(AlgebraElement::generator(1), k, e); }) == ErrorCode::kOrderingKernelInvalid);

  TwoPointKernel omega = TwoPointKernel::from_covariance({{q(2), q(1, 2)}, {q(1, 2), q(1)}}, [] {
    PairingForm f(2);
    f.set(1, 2, q(1));
    return f;
  }());
  auto ks = OrderingKernel::from_two_point(omega);
  CHECK(ks.tag() == KernelTag::kState);
  CHECK_NOTHROW(ks.validate(omega.commutator_form()));
}

TEST_CASE("low-degree normal-ordered products") {
  std::mt19937 rng(2);
  PairingForm e = random_form(rng, 3);
  auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 3), e);
  CHECK(to_algebra(WickElement::monomial(make_word({2}), q(1)), k, e) == AlgebraElement::generator(2));
  AlgebraElement expect = AlgebraElement::monomial(make_word({1, 3}), q(1)) - AlgebraElement::scalar(k.at(1, 3));
  CHECK(to_algebra(WickElement::monomial(make_word({1, 3}), q(1)), k, e) == expect);
  // The labels are symmetric: both orders of a word give the same normal-ordered product.
  CHECK(normal_order(AlgebraElement::monomial(make_word({3, 1}), q(1)), k, e).coefficient(make_word({1, 3})) == q(1));
  auto rev = normal_order(AlgebraElement::monomial(make_word({3, 1}), q(1)), k, e);
  auto fwd = normal_order(AlgebraElement::monomial(make_word({1, 3}), q(1)), k, e);
  CHECK(fwd - rev == WickElement::monomial({}, k.at(1, 3) - k.at(3, 1)));
  CHECK(WickElement::monomial(make_word({2, 1}), q(3)).to_string() == "3/1+0/1*i*:phi(1)phi(2):");
}

TEST_CASE("normal-ordered products match the exponential generating function") {
  std::mt19937 rng(3);
  for (std::size_t n : {2u, 3u, 4u}) {
    PairingForm e = random_form(rng, 5);
    auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 5), e);
    Word w;
    for (std::uint32_t i = 1; i <= n; ++i) w.push_back(GeneratorIndex{i + 1});
    auto lhs = to_algebra(WickElement::monomial(w, q(1)), k, e);
    CHECK(lhs == exponential_oracle(w, k, e));
  }
}

TEST_CASE("normal ordering round trip") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    PairingForm e = random_form(rng, 4);
    auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 4), e);
    auto a = random_element(rng, 4, 6);
    CHECK(to_algebra(normal_order(a, k, e), k, e) == normal_form(a, e));
    auto w = random_wick(rng, 4, 6);
    CHECK(normal_order(to_algebra(w, k, e), k, e) == w);
  }
}

TEST_CASE("state expectation is the unit coefficient") {
  std::mt19937 rng(5);
  PairingForm e(4);
  e.set(1, 2, q(1));
  e.set(3, 4, q(1));
  e.set(1, 3, q(1, 2));
  std::vector<std::vector<Scalar>> mu(4, std::vector<Scalar>(4, q(0)));
  for (std::size_t i = 0; i < 4; ++i) mu[i][i] = q(3);
  mu[0][3] = mu[3][0] = q(1, 2);
  auto omega = TwoPointKernel::from_covariance(mu, e);
  QuasifreeState state(omega);
  auto k = OrderingKernel::from_two_point(omega);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_element(rng, 4, 6);
    CHECK(normal_order(a, k, e).unit_coefficient() == state.evaluate(a));
  }
}

TEST_CASE("Wick product agrees with the algebra product") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    PairingForm e = random_form(rng, 4);
    auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 4), e);
    auto a = random_wick(rng, 4, 4, 3), b = random_wick(rng, 4, 4, 3);
    auto route = normal_order(multiply(to_algebra(a, k, e), to_algebra(b, k, e)), k, e);
    CHECK(wick_product(a, b, k) == route);
  }
  PairingForm e = random_form(rng, 2);
  auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 2), e);
  auto big = WickElement::monomial(make_word({1, 1, 2, 2, 1}), q(1));
  CHECK(code_of([&] { wick_product(big, big, k); }) == ErrorCode::kDegreeGuard);
}

TEST_CASE("single contractions and commutators") {
  std::mt19937 rng(10);
  PairingForm e = random_form(rng, 3);
  auto f = WickElement::monomial(make_word({1}), q(1)), g = WickElement::monomial(make_word({3}), q(1));
  WickElement first_comm(ScalarMode::kExact);
  for (int trial = 0; trial < 10; ++trial) {
    auto k = OrderingKernel::from_symmetric(random_symmetric(rng, 3), e);
    auto fg = wick_product(f, g, k);
    CHECK(fg == WickElement::monomial(make_word({1, 3}), q(1)) + WickElement::monomial({}, k.at(1, 3)));
    auto comm = wick_product(f, g, k) - wick_product(g, f, k);
    CHECK(comm == WickElement::monomial({}, Scalar::imag_unit(ScalarMode::kExact) * e.at(1, 3)));
    // Higher-degree commutators, mapped back to the algebra, do not depend on kappa.
    auto a = random_wick(rng, 3, 3, 2), b = random_wick(rng, 3, 3, 2);
    auto lhs = to_algebra(wick_product(a, b, k) - wick_product(b, a, k), k, e);
    CHECK(lhs == commutator(to_algebra(a, k, e), to_algebra(b, k, e), e));
  }
  TwoPointKernel omega = TwoPointKernel::from_covariance({{q(2), q(1, 2)}, {q(1, 2), q(1)}}, [] {
    PairingForm p(2);
    p.set(1, 2, q(1));
    return p;
  }());
  auto ks = OrderingKernel::from_two_point(omega);
  auto prod = wick_product(WickElement::monomial(make_word({1}), q(1)), WickElement::monomial(make_word({2}), q(1)), ks);
  CHECK(prod.unit_coefficient() == omega(1, 2));
}

TEST_CASE("alpha coefficients count disjoint pairs") {
  CHECK(alpha_coefficient(2, 1, ScalarMode::kExact) == q(1));
  CHECK(alpha_coefficient(4, 1, ScalarMode::kExact) == q(6));
  CHECK(alpha_coefficient(4, 2, ScalarMode::kExact) == q(3));
  CHECK(alpha_coefficient(6, 3, ScalarMode::kExact) == q(15));
  CHECK(alpha_coefficient(5, 2, ScalarMode::kExact) == q(15));
  CHECK(alpha_coefficient(3, 2, ScalarMode::kExact) == q(0));
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t k = 0; 2 * k <= n; ++k)
      CHECK(alpha_coefficient(n, k, ScalarMode::kExact) ==
            q(static_cast<long>(ccrlab::testing::brute_force_matchings(2 * k).size()) *
              [&] {
                long c = 1;
                for (std::size_t i = 0; i < 2 * k; ++i) c = c * static_cast<long>(n - i) / static_cast<long>(i + 1);
                return c;
              }()));
}

TEST_CASE("alpha on the square of a field") {
  std::vector<Scalar> f{q(1), q(-2), q(1, 3)};
  std::vector<std::vector<Scalar>> dm{{q(1), q(2), q(0)}, {q(2), q(-1), q(1, 2)}, {q(0), q(1, 2), q(5)}};
  DifferenceKernel d(dm);
  WickSeries w{{2, WickTensor::power(f, 2)}};
  auto out = alpha_map(d, w);
  Scalar dff = q(0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) dff += f[i] * dm[i][j] * f[j];
  CHECK(out.at(2) == w.at(2));
  CHECK(out.at(0).at({}) == dff);
}

TEST_CASE("alpha laws on degree four over six basis elements") {
  std::mt19937 rng(7);
  PairingForm e = random_form(rng, 6);
  auto k1 = OrderingKernel::from_symmetric(random_symmetric(rng, 6, true), e);
  auto k2 = OrderingKernel::from_symmetric(random_symmetric(rng, 6, true), e);
  auto k3 = OrderingKernel::from_symmetric(random_symmetric(rng, 6, true), e);
  auto d12 = DifferenceKernel::between(k1, k2), d23 = DifferenceKernel::between(k2, k3);
  auto d13 = DifferenceKernel::between(k1, k3);
  WickSeries w{{4, random_tensor(rng, 4, 6)}, {3, random_tensor(rng, 3, 6)}, {1, random_tensor(rng, 1, 6)}};

  DifferenceKernel zero(std::vector<std::vector<Scalar>>(6, std::vector<Scalar>(6, q(0))));
  CHECK(series_equal(alpha_map(zero, w), w));
  CHECK(series_equal(alpha_map(d23, alpha_map(d12, w)), alpha_map(d13, w)));
  CHECK(series_equal(alpha_map(d12, star(w)), star(alpha_map(d12, w))));

  // Re-expressing k1-ordered products in the k2-ordered basis.
  auto reexpressed = normal_order(to_algebra(to_element(w), k1, e), k2, e);
  CHECK(reexpressed == to_element(alpha_map(d12, w)));
}

TEST_CASE("alpha at degree six and guards") {
  std::mt19937 rng(8);
  PairingForm e = random_form(rng, 3);
  auto k1 = OrderingKernel::from_symmetric(random_symmetric(rng, 3, true), e);
  auto k2 = OrderingKernel::from_symmetric(random_symmetric(rng, 3, true), e);
  WickSeries w{{6, random_tensor(rng, 6, 3)}};
  auto reexpressed = normal_order(to_algebra(to_element(w), k1, e), k2, e);
  CHECK(reexpressed == to_element(alpha_map(DifferenceKernel::between(k1, k2), w)));

  CHECK(code_of([] { WickTensor(7, 2); }) == ErrorCode::kDegreeGuard);
  CHECK(code_of([] { WickTensor(2, 9); }) == ErrorCode::kDegreeGuard);
  CHECK(code_of([] { DifferenceKernel({{q(1), q(2)}, {q(3), q(1)}}); }) == ErrorCode::kInvalidDifference);
  auto bad = OrderingKernel(3);
  bad.set(1, 2, q(1));
  CHECK(code_of([&] { DifferenceKernel::between(k1, bad); }) == ErrorCode::kInvalidDifference);
}

TEST_CASE("tensor json") {
  std::mt19937 rng(9);
  auto t = random_tensor(rng, 2, 3);
  CHECK(WickTensor::from_json(t.to_json(), ScalarMode::kExact) == t);
  try {
    WickTensor::from_json({{"degree", 2}, {"basis", 3}, {"entries", {1, 2}}}, ScalarMode::kExact, "/tensor");
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kInvalidConfig);
    CHECK(std::string(err.what()).find("/tensor/entries") != std::string::npos);
  }
  CHECK(!WickTensor::from_json({{"degree", 2}, {"basis", 2}, {"entries", {1, 2, 3, 4}}}, ScalarMode::kExact)
             .is_symmetric());
}

TEST_CASE("Wick square expectation in the Hadamard scheme") {
  minkowski::KernelParams kp;
  double g = std::numbers::egamma;
  for (double m : {0.5, 1.0, 2.0}) {
    kp.m = m;
    kp.lambda = 0.0;
    double v0 = m * m / (16 * kPi * kPi);
    double lam = 1.0 / m;
    double closed = v0 * (std::log(m * m * lam * lam / 4) + 2 * g - 1);
    CHECK(std::abs(phi2_H_expectation(kp) - closed) <= 1e-12 * std::abs(closed));
    CHECK(std::abs(phi2_H_expectation(kp) - minkowski::remainder_w({0.0, 0.0}, kp).real()) <= 1e-12 * std::abs(closed));
    CHECK(phi2_H_expectation(kp, 0.25) == doctest::Approx(closed + 0.25).epsilon(1e-12));
    minkowski::KernelParams shifted = kp;
    shifted.lambda = 3.0 / m;
    double shift = phi2_H_expectation(shifted) - phi2_H_expectation(kp);
    CHECK(std::abs(shift - v0 * std::log(9.0)) <= 1e-12 * v0);
  }
  kp.eps = 0.1;
  CHECK(code_of([&] { phi2_H_expectation(kp); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("stress tensor of a constant kernel") {
  for (double m : {0.0, 1.0, 2.5})
    for (double xi : {0.0, 1.0 / 6.0, 0.4}) {
      double c = 0.7;
      StressEnergyOptions opts;
      opts.m = m;
      opts.xi = xi;
      auto se = stress_energy([c](const Event&, const Event&) { return c; }, {0.1, 0.2, -0.3, 0.4}, opts);
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
          double expect = a == b ? kMetricDiag[a] * m * m * c / 6.0 : 0.0;
          CHECK(std::abs(se.t[a][b] - expect) <= 1e-12);
        }
      auto zero = stress_energy([](const Event&, const Event&) { return 0.0; }, {0, 0, 0, 0}, opts);
      for (const auto& row : zero.t)
        for (double v : row) CHECK(v == 0.0);
    }
}

TEST_CASE("stress tensor of a Gaussian kernel") {
  // w = c exp(-sum_k s_k (x_k - y_k)^2): at coincidence d_a d_b' w = 2 c s_a delta_ab, d_a d_b w = -2 c s_a delta_ab.
  std::array<double, 4> s{0.3, 0.5, 0.2, 0.7};
  double c = 1.3;
  TwoPointFunction w = [&](const Event& x, const Event& y) {
    double e = 0.0;
    for (std::size_t k = 0; k < 4; ++k) e += s[k] * (x[k] - y[k]) * (x[k] - y[k]);
    return c * std::exp(-e);
  };
  for (double xi : {0.0, 0.25}) {
    StressEnergyOptions opts;
    opts.m = 1.5;
    opts.xi = xi;
    auto se = stress_energy(w, {0.3, -0.1, 0.2, 0.0}, opts);
    double box = 0.0, mixed = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      box += kMetricDiag[k] * (-2 * c * s[k]);
      mixed += kMetricDiag[k] * (2 * c * s[k]);
    }
    double pw = -box + opts.m * opts.m * c;
    CHECK(std::abs(se.p_w - pw) <= 1e-9);
    double scalar = 2 * xi * box + (2 * xi - 0.5) * mixed + 0.5 * opts.m * opts.m * c;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        double can = a == b ? (1 - 2 * xi) * 2 * c * s[a] + 2 * xi * 2 * c * s[a] + kMetricDiag[a] * scalar : 0.0;
        CHECK(std::abs(se.canonical[a][b] - can) <= 1e-9);
        double shift = a == b ? -kMetricDiag[a] * se.p_w / 3.0 : 0.0;
        CHECK(std::abs(se.t[a][b] - se.canonical[a][b] - shift) <= 1e-12);
      }
    CHECK(std::abs(se.trace() - se.canonical_trace() + 4.0 * se.p_w / 3.0) <= 1e-12);
    CHECK(divergence_residual(w, {0.0, 0.0, 0.0, 0.0}, opts, 0.05) <= 1e-8);
  }
}

TEST_CASE("renormalized vacuum stress tensor is proportional to the metric") {
  minkowski::KernelParams kp;
  TwoPointFunction w = [&](const Event& x, const Event& y) {
    double r = std::sqrt((x[1] - y[1]) * (x[1] - y[1]) + (x[2] - y[2]) * (x[2] - y[2]) + (x[3] - y[3]) * (x[3] - y[3]));
    return minkowski::remainder_w({x[0] - y[0], r}, kp).real();
  };
  StressEnergyOptions opts;
  auto se = stress_energy(w, {0.0, 0.0, 0.0, 0.0}, opts);
  double scale = std::abs(se.t[0][0]);
  MESSAGE("T_00 = " << se.t[0][0] << ", error estimate " << se.error_estimate);
  CHECK(scale > 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      double expect = a == b ? -kMetricDiag[a] * se.t[0][0] : 0.0;
      CHECK(std::abs(se.t[a][b] - expect) <= 1e-8);
    }
  CHECK(divergence_residual(w, {0.1, 0.0, 0.2, 0.0}, opts, 0.05) <= 1e-8);
}

TEST_CASE("coarse point splitting is rejected") {
  TwoPointFunction w = [](const Event& x, const Event& y) { return std::cos(40.0 * (x[0] - y[0])); };
  StressEnergyOptions opts;
  opts.h = 0.1;
  CHECK(code_of([&] { stress_energy(w, {0, 0, 0, 0}, opts); }) == ErrorCode::kResolution);
  opts.h = 1e-3;
  opts.tol = 1e-6;
  CHECK_NOTHROW(stress_energy(w, {0, 0, 0, 0}, opts));
}
