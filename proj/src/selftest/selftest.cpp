#include "ccrlab/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <set>

#include "ccrlab/algebra.hpp"
#include "ccrlab/check.hpp"
#include "ccrlab/lattice.hpp"
#include "ccrlab/microlocal.hpp"
#include "ccrlab/minkowski.hpp"
#include "ccrlab/phase_space.hpp"
#include "ccrlab/quasifree.hpp"
#include "ccrlab/wick.hpp"
#include "oracles.hpp"
#include "random_elements.hpp"

namespace ccrlab::selftest {
namespace {

using nlohmann::json;
using testing::random_element;
using testing::random_rational;

struct Outcome {
  bool passed = true;
  std::string detail;
  json metrics = json::object();
  double time_limit = 0.0;  // seconds, 0 for none

  void require(bool ok) { passed = passed && ok; }
  void note(const std::string& s) { detail += detail.empty() ? s : "; " + s; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <class Rng>
Rng make_rng(std::uint64_t seed, int id) {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(id)};
  return Rng(s);
}

Scalar q(long p, long r = 1) { return Scalar::exact(mpq_class(p, r)); }

// 1. Rewriting soundness.
Outcome rewriting_soundness(std::uint64_t seed) {
  Outcome o;
  o.time_limit = 30.0;
  auto rng = make_rng<std::mt19937>(seed, 1);
  constexpr int kElements = 1000, kPerForm = 100;
  std::size_t idempotence = 0, product = 0, commutation = 0, max_terms = 0;
  std::optional<NormalFormEngine> engine;
  std::uniform_int_distribution<std::size_t> gens(1, 6);
  for (int i = 0; i < kElements; ++i) {
    if (i % kPerForm == 0) engine.emplace(testing::random_form(rng, 6));
    std::size_t n = gens(rng);
    auto a = random_element(rng, n, 6), b = random_element(rng, n, 6);
    auto na = engine->reduce(a), nb = engine->reduce(b);
    if (!(engine->reduce(na) == na)) ++idempotence;
    auto nab = engine->reduce(a * b);
    max_terms = std::max(max_terms, nab.size());
    if (!(nab == engine->reduce(na * nb))) ++product;

    SpanVector f(n), g(n);
    for (auto& v : f) v = random_rational(rng);
    for (auto& v : g) v = random_rational(rng);
    Scalar efg = q(0);
    for (std::uint32_t r = 1; r <= n; ++r)
      for (std::uint32_t s = 1; s <= n; ++s) efg += f[r - 1] * g[s - 1] * engine->form().at(r, s);
    auto c = field(f) * field(g) - field(g) * field(f) -
             AlgebraElement::scalar(Scalar::imag_unit(ScalarMode::kExact) * efg);
    if (!engine->reduce(c).is_zero()) ++commutation;
  }
  o.metrics = {{"elements", kElements},
               {"idempotence_failures", idempotence},
               {"product_failures", product},
               {"commutator_failures", commutation},
               {"largest_product_terms", max_terms}};
  o.require(idempotence == 0 && product == 0 && commutation == 0);
  o.note(std::to_string(kElements) + " elements, failures idempotence " + std::to_string(idempotence) +
         ", product " + std::to_string(product) + ", commutator " + std::to_string(commutation));
  return o;
}

// 2. Pairing-sum evaluation against the vacuum coefficient of the normal-ordered form.
Outcome wick_equivalence(std::uint64_t seed) {
  Outcome o;
  auto rng = make_rng<std::mt19937>(seed, 2);
  constexpr int kTrials = 200;
  std::size_t mismatches = 0, oracle_mismatches = 0, round_trip = 0;
  for (int t = 0; t < kTrials; ++t) {
    std::size_t n = 2 + t % 5;
    auto k = testing::random_exact_kernel(rng, n);
    QuasifreeState state(k);
    PairingForm e = k.commutator_form();
    auto kappa = wick::OrderingKernel::from_two_point(k);
    auto a = random_element(rng, n, 8);
    a.add_term(testing::random_word(rng, n, 8), random_rational(rng));

    Scalar direct = state.evaluate(a);
    auto w = wick::normal_order(a, kappa, e);
    if (!(direct == w.unit_coefficient())) ++mismatches;
    Scalar oracle = q(0);
    for (const auto& [word, c] : a.terms()) oracle += c * testing::pairing_sum(k, word);
    if (!(direct == oracle)) ++oracle_mismatches;
    if (!(wick::to_algebra(w, kappa, e) == normal_form(a, e))) ++round_trip;
  }
  o.metrics = {{"trials", kTrials},
               {"max_degree", 8},
               {"expectation_mismatches", mismatches},
               {"oracle_mismatches", oracle_mismatches},
               {"round_trip_failures", round_trip}};
  o.require(mismatches == 0 && oracle_mismatches == 0 && round_trip == 0);
  o.note(std::to_string(kTrials) + " elements up to degree 8, exact; mismatches " + std::to_string(mismatches) +
         ", oracle " + std::to_string(oracle_mismatches) + ", round trip " + std::to_string(round_trip));
  return o;
}

// 3. Pairing counts.
Outcome pairing_counts(std::uint64_t) {
  Outcome o;
  json counts = json::object();
  for (std::size_t n = 2; n <= 10; ++n) {
    std::uint64_t expected = 0;
    if (n % 2 == 0) {
      expected = 1;
      for (std::size_t k = n - 1; k > 1; k -= 2) expected *= k;
    }
    std::vector<Pairing> listed;
    if (n % 2 == 0) {
      listed = enumerate_pairings(n);
    } else {
      try {
        enumerate_pairings(n);
        o.require(false);
      } catch (const Error& e) {
        o.require(e.code() == ErrorCode::kParity);
      }
    }
    std::set<Pairing> listed_set(listed.begin(), listed.end());
    std::set<Pairing> oracle = n % 2 == 0 ? testing::brute_force_matchings(n) : std::set<Pairing>{};
    bool ok = listed.size() == expected && listed_set.size() == listed.size() && listed_set == oracle &&
              double_factorial_pairings(n) == expected;
    o.require(ok);
    counts[std::to_string(n)] = listed.size();
  }
  o.metrics = {{"counts", counts}};
  o.note("n = 2..10 match (n-1)!! and the brute-force matching sets (odd n rejected: no perfect matching); n = 10 gives " +
         std::to_string(counts["10"].get<std::size_t>()));
  return o;
}

// 4. One-particle reconstruction and purity routes.
Outcome one_particle_reconstruction(std::uint64_t seed) {
  Outcome o;
  auto rng = make_rng<std::mt19937_64>(seed, 4);
  std::normal_distribution<double> gauss;
  constexpr int kStates = 100;
  double worst = 0.0;
  std::size_t disagreements = 0, misclassified = 0;
  for (int t = 0; t < kStates; ++t) {
    std::size_t modes = 1 + t % 5;
    bool pure = (t / 5) % 2 == 0;
    MatrixXd mu = random_covariance(modes, rng, pure);
    MatrixXd tau = standard_tau(modes);
    double scale = mu.norm();
    for (auto method : {OneParticleMethod::kSpectral, OneParticleMethod::kSquareRoot}) {
      auto ops = one_particle(mu, tau, method);
      for (int s = 0; s < 10; ++s) {
        VectorXd x(2 * modes), y(2 * modes);
        for (auto& v : x) v = gauss(rng);
        for (auto& v : y) v = gauss(rng);
        worst = nan_max(worst, ops.reconstruction_defect(x, y) / (scale * x.norm() * y.norm()));
      }
    }
    try {
      auto p = purity(mu, tau);
      if (p.j_route_pure != p.sup_route_pure) ++disagreements;
      if (p.pure != pure) ++misclassified;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInternalInconsistency) throw;
      ++disagreements;
    }
  }
  o.metrics = {{"states", kStates},
               {"max_relative_defect", worst},
               {"purity_disagreements", disagreements},
               {"purity_misclassified", misclassified}};
  o.require(worst <= 1e-12 && disagreements == 0 && misclassified == 0);
  o.note(std::to_string(kStates) + " states, N <= 5, max defect / (|mu| |x| |y|) " + num(worst) +
         "; purity disagreements " + std::to_string(disagreements) + ", misclassified " +
         std::to_string(misclassified));
  return o;
}

// 5. Truncated Fock witness.
Outcome fock_witness(std::uint64_t seed) {
  Outcome o;
  auto rng = make_rng<std::mt19937_64>(seed, 5);
  std::normal_distribution<double> gauss;
  constexpr std::size_t kCutoff = 4, kVectors = 4;
  double worst_npoint = 0.0, worst_ccr = 0.0, worst_field = 0.0;
  std::size_t compared = 0;
  struct Case {
    std::size_t modes;
    bool pure;
  };
  for (Case c : {Case{1, true}, Case{2, true}, Case{3, true}, Case{4, true}, Case{1, false}, Case{2, false}}) {
    MatrixXd mu = random_covariance(c.modes, rng, c.pure);
    MatrixXd tau = standard_tau(c.modes);
    FockRepresentation fock(one_particle(mu, tau), kCutoff);
    std::vector<VectorXd> v(kVectors);
    for (auto& x : v) {
      x.resize(static_cast<Eigen::Index>(2 * c.modes));
      for (auto& e : x) e = gauss(rng);
      x /= std::sqrt(x.dot(mu * x));
    }
    TwoPointKernel k(kVectors, ScalarMode::kFloat);
    for (std::uint32_t i = 1; i <= kVectors; ++i)
      for (std::uint32_t j = 1; j <= kVectors; ++j)
        k.set(i, j, Scalar::floating(v[i - 1].dot(mu * v[j - 1]), 0.5 * v[i - 1].dot(tau * v[j - 1])));
    QuasifreeState state(k);
    // Every word of length 1..4 over the four vectors.
    for (std::size_t n = 1; n <= 4; ++n) {
      std::size_t total = 1;
      for (std::size_t p = 0; p < n; ++p) total *= kVectors;
      for (std::size_t code = 0; code < total; ++code) {
        Word w;
        std::vector<VectorXd> xs;
        for (std::size_t p = 0, r = code; p < n; ++p, r /= kVectors) {
          w.push_back(GeneratorIndex{static_cast<std::uint32_t>(r % kVectors + 1)});
          xs.push_back(v[r % kVectors]);
        }
        worst_npoint = nan_max(worst_npoint, std::abs(fock.vacuum_npoint(xs) - state.npoint(w).to_complex()));
        ++compared;
      }
    }
    worst_ccr = nan_max(worst_ccr, fock.ccr_defect(kCutoff - 1));
    worst_field = nan_max(worst_field, fock.field_commutator_defect(v[0], v[1], kCutoff - 1));
  }
  o.metrics = {{"npoints_compared", compared},
               {"max_npoint_difference", worst_npoint},
               {"ccr_defect", worst_ccr},
               {"field_commutator_defect", worst_field}};
  o.require(worst_npoint <= 1e-10 && worst_ccr <= 1e-12 && worst_field <= 1e-10);
  o.note(std::to_string(compared) + " vacuum n-points (n <= 4) max difference " + num(worst_npoint) +
         "; [a, a^dagger] defect " + num(worst_ccr) + ", [phi, phi] defect " + num(worst_field) +
         " on sectors <= " + std::to_string(kCutoff - 1));
  return o;
}

// 6. Lattice propagator.
lattice::LatticeConfig small_lattice(double a, double m = 1.0) {
  lattice::LatticeConfig c;
  c.a = a;
  c.dt = a / 2;
  c.m = m;
  c.steps = static_cast<std::size_t>(std::lround(3.0 / c.dt));
  c.pad = static_cast<std::size_t>(std::lround(3.0 / a)) + 2;
  c.nx = 2 * c.pad + static_cast<std::size_t>(std::lround(4.0 / a));
  return c;
}

Outcome lattice_checks(std::uint64_t) {
  using namespace lattice;
  Outcome o;
  o.time_limit = 120.0;
  double vol[3], sur[3];
  double agreement = 0.0;
  const double spacings[3] = {0.04, 0.02, 0.01};
  for (int i = 0; i < 3; ++i) {
    auto cfg = small_lattice(spacings[i]);
    auto f = bump(cfg, {1.2, -0.4, 0.8, 0.9, 10.0});
    auto g = bump(cfg, {1.8, 0.3, 0.8, 1.0, 10.0});
    vol[i] = pair_E(f, g, PairMethod::kVolume);
    sur[i] = pair_E(f, g, PairMethod::kSurface);
    agreement = nan_max(agreement, std::abs(vol[i] - sur[i]) / std::abs(vol[i]));
  }
  double order_vol = std::log2(std::abs((vol[0] - vol[1]) / (vol[1] - vol[2])));
  double order_sur = std::log2(std::abs((sur[0] - sur[1]) / (sur[1] - sur[2])));

  auto cfg = small_lattice(0.02);
  auto fl = bump(cfg, {1.5, -1.2, 0.3, 0.3, 1.0});
  auto fr = bump(cfg, {1.5, 1.2, 0.3, 0.3, 1.0});
  double causal = nan_max(std::abs(pair_E(fl, fr, PairMethod::kVolume)), std::abs(pair_E(fl, fr, PairMethod::kSurface)));

  double kernel = 0.0;
  for (double m : {0.0, 1.0, 2.5}) {
    cfg.m = m;
    auto g = bump(cfg, {1.5, 0.2, 0.6, 0.7, 2.0});
    kernel = nan_max(kernel, causal_E(apply_kg(g)).l2_norm() / g.l2_norm());
  }

  LatticeConfig def;
  def.boundary = Boundary::kPeriodic;
  double k = 2.0 * std::numbers::pi * 3 / (static_cast<double>(def.nx) * def.a);
  CauchyData d{std::vector<double>(def.nx), std::vector<double>(def.nx, 0.0)};
  for (std::size_t j = 0; j < def.nx; ++j) d.psi[j] = std::cos(k * def.x(j));
  double compress = slice_compress(def, d, 240, 1.0, 2.0).relative_error;

  o.metrics = {{"volume_pairings", {vol[0], vol[1], vol[2]}},
               {"surface_pairings", {sur[0], sur[1], sur[2]}},
               {"order_volume", order_vol},
               {"order_surface", order_sur},
               {"volume_surface_relative_difference", agreement},
               {"spacelike_pairing", causal},
               {"kernel_ratio", kernel},
               {"slice_compress_error", compress}};
  o.require(order_vol >= 1.9 && order_sur >= 1.9 && agreement <= 1e-3 && causal <= 1e-10 && kernel <= 1e-8 &&
            compress <= 1e-3);
  o.note("order volume " + num(order_vol) + ", surface " + num(order_sur) + ", volume/surface difference " +
         num(agreement) + "; spacelike pairing " + num(causal) + "; |E(Pg)|/|g| " + num(kernel) +
         "; slice_compress error " + num(compress));
  return o;
}

// 7. Bessel against Fourier.
Outcome kernel_cross_validation(std::uint64_t seed) {
  using namespace minkowski;
  Outcome o;
  o.time_limit = 120.0;
  auto rng = make_rng<std::mt19937_64>(seed, 7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  KernelParams kp;
  constexpr int kPoints = 100;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    double r = 0.05 + 3.0 * u(rng);
    double frac = 0.1 + 0.8 * u(rng);
    double dt = (i % 2 ? 1 : -1) * (i < kPoints / 2 ? frac * r : r / frac);
    SeparationPoint p{dt, r};
    cplx b = omega2_bessel(p, kp);
    worst = nan_max(worst, std::abs(omega2_fourier(p, kp) - b) / std::abs(b));
  }
  o.metrics = {{"points", kPoints}, {"max_relative_difference", worst}};
  o.require(worst <= 1e-6);
  o.note(std::to_string(kPoints) + " off-cone points (half spacelike, half timelike), m = 1, max relative difference " +
         num(worst));
  return o;
}

// 8. Hadamard remainder on the ladder and the lambda shift.
Outcome hadamard_subtraction(std::uint64_t) {
  using namespace minkowski;
  Outcome o;
  KernelParams kp;
  kp.order = 3;
  auto w = [&](double r) { return remainder_w({0.0, r}, kp).real(); };
  auto derivative = [&](int j, double r) {
    double h = r / 8;
    if (j == 0) return w(r);
    if (j == 1) return (-w(r + 2 * h) + 8 * w(r + h) - 8 * w(r - h) + w(r - 2 * h)) / (12 * h);
    return (-w(r + 2 * h) + 16 * w(r + h) - 30 * w(r) + 16 * w(r - h) - w(r - 2 * h)) / (12 * h * h);
  };
  double len = kp.length_scale();
  double ratios[3];
  for (int j = 0; j < 3; ++j) {
    double reference = std::abs(derivative(j, len));
    double top = 0.0;
    for (int k = 0; k <= 12; ++k) top = nan_max(top, std::abs(derivative(j, len * std::pow(10.0, -3.0 + k / 4.0))));
    ratios[j] = top / reference;
  }
  double shift = 0.0;
  for (double lam2 : {0.5, 2.0, 3.0})
    for (auto p : {SeparationPoint{0.0, 0.3}, SeparationPoint{0.4, 0.1}, SeparationPoint{0.2, 0.7},
                   SeparationPoint{0.0, 1e-3}}) {
      KernelParams moved = kp;
      moved.lambda = lam2 * len;
      cplx diff = remainder_w(p, moved) - remainder_w(p, kp);
      shift = nan_max(shift, std::abs(diff - lambda_shift(p, kp, moved.lambda)));
    }
  o.metrics = {{"growth_ratios", {ratios[0], ratios[1], ratios[2]}}, {"lambda_shift_error", shift}};
  o.require(ratios[0] <= 2.0 && ratios[1] <= 2.0 && ratios[2] <= 2.0 && shift <= 1e-10);
  o.note("N = 3, ladder r in [1e-3, 1]/m: max |w|, |w'|, |w''| over the value at r = 1/m " + num(ratios[0]) + ", " +
         num(ratios[1]) + ", " + num(ratios[2]) + "; lambda shift error " + num(shift));
  return o;
}

// 9. Alpha laws.
std::vector<std::vector<Scalar>> random_symmetric_real(std::mt19937& rng, std::size_t n) {
  std::vector<std::vector<Scalar>> s(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s[i][j] = s[j][i] = random_rational(rng).real_part();
  return s;
}

wick::WickTensor random_tensor(std::mt19937& rng, std::size_t degree, std::size_t basis) {
  wick::WickTensor t(degree, basis);
  for (std::size_t k = 0; k < t.entries().size(); ++k) t.at_flat(k) = random_rational(rng);
  return t.symmetrized();
}

Outcome alpha_laws(std::uint64_t seed) {
  using namespace wick;
  Outcome o;
  auto rng = make_rng<std::mt19937>(seed, 9);
  constexpr std::size_t kBasis = 6;
  constexpr int kTrials = 3;
  std::size_t identity = 0, composition = 0, star_law = 0, ordering = 0;
  for (int t = 0; t < kTrials; ++t) {
    PairingForm e = testing::random_form(rng, kBasis);
    auto k1 = OrderingKernel::from_symmetric(random_symmetric_real(rng, kBasis), e);
    auto k2 = OrderingKernel::from_symmetric(random_symmetric_real(rng, kBasis), e);
    auto k3 = OrderingKernel::from_symmetric(random_symmetric_real(rng, kBasis), e);
    auto d12 = DifferenceKernel::between(k1, k2), d23 = DifferenceKernel::between(k2, k3);
    auto d13 = DifferenceKernel::between(k1, k3);
    WickSeries w;
    for (std::size_t n = 0; n <= 4; ++n) w.emplace(n, random_tensor(rng, n, kBasis));
    DifferenceKernel zero(std::vector<std::vector<Scalar>>(kBasis, std::vector<Scalar>(kBasis, q(0))));
    if (!series_equal(alpha_map(zero, w), w)) ++identity;
    if (!series_equal(alpha_map(d23, alpha_map(d12, w)), alpha_map(d13, w))) ++composition;
    if (!series_equal(alpha_map(d12, star(w)), star(alpha_map(d12, w)))) ++star_law;
    if (!(normal_order(to_algebra(to_element(w), k1, e), k2, e) == to_element(alpha_map(d12, w)))) ++ordering;
  }
  o.metrics = {{"trials", kTrials},
               {"identity_failures", identity},
               {"composition_failures", composition},
               {"star_failures", star_law},
               {"ordering_change_failures", ordering}};
  o.require(identity == 0 && composition == 0 && star_law == 0 && ordering == 0);
  o.note(std::to_string(kTrials) + " exact series of degree <= 4 over 6 basis elements; failures identity " +
         std::to_string(identity) + ", composition " + std::to_string(composition) + ", star " +
         std::to_string(star_law) + ", ordering change " + std::to_string(ordering));
  return o;
}

// 10. Stress-energy.
Outcome stress_energy_checks(std::uint64_t) {
  using namespace wick;
  Outcome o;
  double constant = 0.0;
  for (double m : {0.0, 1.0, 2.5})
    for (double xi : {0.0, 1.0 / 6.0, 0.4})
      for (double c : {0.7, -1.3}) {
        StressEnergyOptions opts;
        opts.m = m;
        opts.xi = xi;
        auto se = stress_energy([c](const Event&, const Event&) { return c; }, {0.1, 0.2, -0.3, 0.4}, opts);
        for (std::size_t a = 0; a < 4; ++a)
          for (std::size_t b = 0; b < 4; ++b) {
            double expect = a == b ? kMetricDiag[a] * m * m * c / 6.0 : 0.0;
            constant = nan_max(constant, std::abs(se.t[a][b] - expect));
          }
      }

  std::array<double, 4> s{0.3, 0.5, 0.2, 0.7};
  double c = 1.3;
  TwoPointFunction gaussian = [&](const Event& x, const Event& y) {
    double e = 0.0;
    for (std::size_t k = 0; k < 4; ++k) e += s[k] * (x[k] - y[k]) * (x[k] - y[k]);
    return c * std::exp(-e);
  };
  minkowski::KernelParams kp;
  TwoPointFunction vacuum = [&](const Event& x, const Event& y) {
    double r = std::hypot(x[1] - y[1], x[2] - y[2], x[3] - y[3]);
    return minkowski::remainder_w({x[0] - y[0], r}, kp).real();
  };

  double divergence = 0.0, component_shift = 0.0, trace_shift = 0.0, pw_error = 0.0;
  for (double xi : {0.0, 0.25}) {
    StressEnergyOptions opts;
    opts.m = 1.5;
    opts.xi = xi;
    divergence = nan_max(divergence, divergence_residual(gaussian, {0.0, 0.0, 0.0, 0.0}, opts, 0.05));
    auto se = stress_energy(gaussian, {0.3, -0.1, 0.2, 0.0}, opts);
    double box = 0.0;
    for (std::size_t k = 0; k < 4; ++k) box += kMetricDiag[k] * (-2 * c * s[k]);
    pw_error = nan_max(pw_error, std::abs(se.p_w - (-box + opts.m * opts.m * c)));
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        double shift = a == b ? -kMetricDiag[a] * se.p_w / 3.0 : 0.0;
        component_shift = nan_max(component_shift, std::abs(se.t[a][b] - se.canonical[a][b] - shift));
      }
    trace_shift = nan_max(trace_shift, std::abs(se.trace() - se.canonical_trace() + 4.0 * se.p_w / 3.0));
  }
  StressEnergyOptions vopts;
  for (Event x : {Event{0.1, 0.0, 0.2, 0.0}, Event{-0.4, 0.3, 0.0, 0.5}})
    divergence = nan_max(divergence, divergence_residual(vacuum, x, vopts, 0.05));
  // Control: a kernel that is not translation invariant must show a residual.
  TwoPointFunction drifting = [](const Event& x, const Event& y) {
    return std::exp(-0.3 * (x[0] * x[0] + y[0] * y[0]) - 0.2 * (x[1] - y[1]) * (x[1] - y[1]));
  };
  StressEnergyOptions copts;
  copts.m = 1.5;
  double control = divergence_residual(drifting, {0.1, 0.2, 0.0, 0.0}, copts, 0.05);

  o.metrics = {{"constant_kernel_error", constant},
               {"max_divergence_residual", divergence},
               {"control_divergence_residual", control},
               {"gaussian_p_w_error", pw_error},
               {"component_shift_error", component_shift},
               {"trace_shift_error", trace_shift}};
  o.require(constant <= 1e-10 && divergence <= 1e-8 && control > 1e-3 && pw_error <= 1e-8 && component_shift <= 1e-12 &&
            trace_shift <= 1e-12);
  o.note("constant kernel error " + num(constant) + "; divergence residual " + num(divergence) +
         " (Gaussian and vacuum remainder), control " + num(control) + "; P_w error " + num(pw_error) +
         "; removing -(1/3) g_ab P_w shifts components to " + num(component_shift) + " and the trace by -(4/3) P_w to " +
         num(trace_shift));
  return o;
}

// 11. Microlocal composition.
Outcome microlocal_composition(std::uint64_t seed) {
  using namespace microlocal;
  Outcome o;
  o.time_limit = 30.0;
  auto rng = make_rng<std::mt19937_64>(seed, 11);
  constexpr int kPerRelation = 5000, kControls = 500;
  std::size_t composites = 0, violations = 0, rejected = 0, controls = 0, flagged = 0;
  bool vacuous = false;
  for (auto f : {Relation::kFPlus, Relation::kFMinus}) {
    std::vector<WFRelationPoint> as, bs;
    for (int i = 0; i < kPerRelation; ++i) {
      as.push_back(sample_relation(Relation::kHadamard, rng));
      bs.push_back(sample_continuation(as.back(), f, rng));
    }
    auto rep = compose_check(as, Relation::kHadamard, bs, f, Relation::kHadamard);
    composites += rep.composable_pairs;
    violations += rep.violations;
    rejected += rep.rejected_sources;
    vacuous = vacuous || rep.vacuous;

    std::vector<WFRelationPoint> past, cont;
    for (int i = 0; i < kControls; ++i) {
      past.push_back(sample_relation(Relation::kHadamardPast, rng));
      cont.push_back(sample_continuation(past.back(), f, rng));
    }
    auto neg = compose_check(past, Relation::kHadamardPast, cont, f, Relation::kHadamard);
    controls += neg.composable_pairs;
    flagged += neg.violations;
  }
  o.metrics = {{"composites", composites},
               {"violations", violations},
               {"rejected_sources", rejected},
               {"negative_controls", controls},
               {"controls_flagged", flagged}};
  o.require(!vacuous && composites >= 2 * kPerRelation && violations == 0 && rejected == 0 &&
            controls >= 2 * kControls && flagged == controls);
  o.note(std::to_string(composites) + " composites H o F+/- with " + std::to_string(violations) +
         " outside H; negative controls flagged " + std::to_string(flagged) + "/" + std::to_string(controls));
  return o;
}

// 12. Equivalence probe.
Outcome equivalence_checks(std::uint64_t) {
  Outcome o;
  std::vector<TruncationInput> doubled, rank1;
  for (std::size_t n : {2, 4, 8, 16, 32}) {
    MatrixXd tau = standard_tau(n);
    MatrixXd mu = ground_state_mu(periodic_kg_energy(n, 1.0, 0.5), tau);
    doubled.push_back({n, mu, 2.0 * mu, tau});
    MatrixXd bumped = mu;
    bumped(0, 0) += 0.3;
    rank1.push_back({n, mu, bumped, tau});
  }
  auto r2 = equivalence_probe(doubled);
  double hs_error = 0.0;
  for (std::size_t k = 0; k < r2.ns.size(); ++k) {
    double target = 2.0 * static_cast<double>(r2.ns[k]);
    hs_error = nan_max(hs_error, std::abs(r2.hs_norms[k] * r2.hs_norms[k] - target) / target);
  }
  auto r1 = equivalence_probe(rank1);
  o.metrics = {{"doubled", r2.to_json()}, {"rank_one", r1.to_json()}, {"hs_squared_relative_error", hs_error}};
  o.require(hs_error <= 1e-12 && r2.trend == HsTrend::kDivergent && r1.trend == HsTrend::kBounded);
  o.note("mu2 = 2 mu over N = 2..32: |hs^2 / 2N - 1| <= " + num(hs_error) + ", trend " + std::string(to_string(r2.trend)) +
         " (slope " + num(r2.slope) + "); rank-1 perturbation trend " + std::string(to_string(r1.trend)) +
         " (slope " + num(r1.slope) + ")");
  return o;
}

using CriterionFn = Outcome (*)(std::uint64_t);

struct Entry {
  std::string_view name;
  CriterionFn run;
};

constexpr Entry kCriteria[kCriterionCount] = {
    {"rewriting soundness", rewriting_soundness},
    {"Wick theorem equivalence", wick_equivalence},
    {"pairing counts", pairing_counts},
    {"one-particle reconstruction", one_particle_reconstruction},
    {"truncated Fock witness", fock_witness},
    {"lattice propagator", lattice_checks},
    {"kernel cross-validation", kernel_cross_validation},
    {"Hadamard subtraction", hadamard_subtraction},
    {"alpha-isomorphism laws", alpha_laws},
    {"stress-energy", stress_energy_checks},
    {"microlocal composition", microlocal_composition},
    {"equivalence probe", equivalence_checks},
};

const Entry& entry(int id) {
  if (id < 1 || id > kCriterionCount)
    throw Error(ErrorCode::kInvalidInput, "criterion id " + std::to_string(id) + " outside 1.." +
                                              std::to_string(kCriterionCount));
  return kCriteria[id - 1];
}

}  // namespace

json CriterionResult::to_json() const {
  return {{"id", id}, {"name", name}, {"passed", passed}, {"detail", detail}, {"metrics", metrics}};
}

std::string_view criterion_name(int id) { return entry(id).name; }

CriterionResult run_criterion(int id, std::uint64_t seed) {
  const Entry& e = entry(id);
  CriterionResult r;
  r.id = id;
  r.name = std::string(e.name);
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = e.run(seed);
  } catch (const std::exception& ex) {
    o.passed = false;
    o.detail = std::string("error: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = o.passed;
  r.detail = o.detail;
  r.metrics = o.metrics;
  if (o.time_limit > 0.0) {
    r.metrics["time_limit_seconds"] = o.time_limit;
    if (r.seconds >= o.time_limit) {
      r.passed = false;
      r.detail += "; exceeded the " + num(o.time_limit) + " s limit";
    }
  }
  return r;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace ccrlab::selftest
