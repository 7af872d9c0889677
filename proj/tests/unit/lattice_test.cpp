#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "ccrlab/lattice.hpp"
#include "ccrlab/phase_space.hpp"

using namespace ccrlab;
using namespace ccrlab::lattice;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kParse;
}

// A small absorbing-pad lattice: interior [-2, 2], 3 time units.
LatticeConfig small_config(double a = 0.02, double m = 1.0) {
  LatticeConfig c;
  c.a = a;
  c.dt = a / 2;
  c.m = m;
  c.steps = static_cast<std::size_t>(std::lround(3.0 / c.dt));
  c.pad = static_cast<std::size_t>(std::lround(3.0 / a)) + 2;
  c.nx = 2 * c.pad + static_cast<std::size_t>(std::lround(4.0 / a));
  return c;
}

LatticeField time_reversed(const LatticeField& f) {
  LatticeField out(f.config());
  for (std::size_t n = 0; n < f.nt(); ++n)
    for (std::size_t j = 0; j < f.nx(); ++j) out(n, j) = f(f.nt() - 1 - n, j);
  return out;
}

double pairing_at(double a, PairMethod method) {
  auto cfg = small_config(a);
  auto f = bump(cfg, {1.2, -0.4, 0.8, 0.9, 10.0});
  auto g = bump(cfg, {1.8, 0.3, 0.8, 1.0, 10.0});
  return pair_E(f, g, method);
}

}  // namespace

TEST_CASE("config validation") {
  LatticeConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 1.5 * c.a;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kInvalidConfig);
  c = LatticeConfig{};
  c.m = -1.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kInvalidConfig);
  c = LatticeConfig{};
  c.pad = 100;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kInvalidConfig);
  c = LatticeConfig{};
  c.dt = c.a;  // stable for m = 0 only
  c.steps = 240;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kInvalidConfig);
  c.m = 0.0;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config json") {
  LatticeConfig c = small_config();
  auto back = LatticeConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  try {
    LatticeConfig::from_json({{"dt", 0.1}, {"a", 0.05}}, "/lattice");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidConfig);
    CHECK(std::string(e.what()).find("/lattice/dt") != std::string::npos);
  }
  CHECK(code_of([] { LatticeConfig::from_json({{"nx", -3}}); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { LatticeConfig::from_json({{"colour", 1}}); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { Bump::from_json({{"wt", 0.0}}); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("zero source gives zero field") {
  auto cfg = small_config();
  LatticeField f(cfg);
  CHECK(causal_E(f).max_abs() == 0.0);
}

TEST_CASE("kernel of E contains P g") {
  auto cfg = small_config();
  for (double m : {0.0, 1.0, 2.5}) {
    cfg.m = m;
    auto g = bump(cfg, {1.5, 0.2, 0.6, 0.7, 2.0});
    auto e = causal_E(apply_kg(g));
    double ratio = e.l2_norm() / g.l2_norm();
    CHECK(ratio <= 1e-8);
  }
}

TEST_CASE("sources must stay clear of the pad and the end levels") {
  auto cfg = small_config();
  auto near_edge = bump(cfg, {1.5, cfg.x(cfg.pad - 5), 0.3, 0.3, 1.0});
  CHECK(code_of([&] { causal_E(near_edge); }) == ErrorCode::kCausalContamination);
  LatticeField early(cfg);
  early(0, cfg.nx / 2) = 1.0;
  CHECK(code_of([&] { causal_E(early); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("advanced is the time reflection of retarded") {
  auto cfg = small_config();
  auto f = bump(cfg, {1.1, 0.1, 0.5, 0.3, 1.0});
  auto adv = fundamental(f, Which::kAdvanced);
  auto ret_reflected = time_reversed(fundamental(time_reversed(f), Which::kRetarded));
  adv -= ret_reflected;
  CHECK(adv.max_abs() <= 1e-14 * ret_reflected.max_abs());
}

TEST_CASE("massless retarded solution against d'Alembert") {
  auto cfg = small_config(0.02, 0.0);
  auto f = bump(cfg, {0.5, 0.0, 0.1, 0.1, 1.0});
  auto ret = fundamental(f, Which::kRetarded);
  auto e = causal_E(f);
  // Oracle: (1/2) sum over the source of theta(t - t' - |x - x'|) a dt.
  auto oracle = [&](std::size_t n, std::size_t j) {
    double s = 0.0;
    for (std::size_t np = 0; np < n; ++np)
      for (std::size_t jp = 0; jp < cfg.nx; ++jp) {
        double v = f(np, jp);
        if (v != 0.0 && cfg.t(n) - cfg.t(np) >= std::abs(cfg.x(j) - cfg.x(jp))) s += v;
      }
    return 0.5 * s * cfg.a * cfg.dt;
  };
  double total = 0.0;
  for (double v : f.values()) total += v;
  total *= 0.5 * cfg.a * cfg.dt;
  double worst = 0.0;
  std::size_t centre = cfg.nx / 2;
  for (double t : {1.0, 1.5, 2.5})
    for (double x : {-0.3, 0.0, 0.2, 1.0, 1.4}) {
      auto n = static_cast<std::size_t>(std::lround(t / cfg.dt));
      auto j = centre + static_cast<std::ptrdiff_t>(std::lround(x / cfg.a));
      double o = oracle(n, j);
      worst = std::max(worst, std::abs(ret(n, j) - o));
      // Advanced minus retarded: -1/2 inside the future cone.
      CHECK(e(n, j) == doctest::Approx(-ret(n, j)).epsilon(1e-12));
    }
  MESSAGE("max |ret - oracle| / (sum/2) = " << worst / total);
  CHECK(worst <= 5.0 * cfg.a * total);
  // Far outside the cone the solution vanishes.
  auto n = static_cast<std::size_t>(std::lround(1.0 / cfg.dt));
  auto j = centre + static_cast<std::size_t>(std::lround(1.6 / cfg.a));
  CHECK(std::abs(ret(n, j)) <= 1e-10 * total);
}

TEST_CASE("spacelike separated pairing vanishes") {
  auto cfg = small_config();
  auto f = bump(cfg, {1.5, -1.2, 0.3, 0.3, 1.0});
  auto g = bump(cfg, {1.5, 1.2, 0.3, 0.3, 1.0});
  double v = pair_E(f, g, PairMethod::kVolume);
  double s = pair_E(f, g, PairMethod::kSurface);
  MESSAGE("spacelike pairing volume " << v << " surface " << s);
  CHECK(std::abs(v) <= 1e-10);
  CHECK(std::abs(s) <= 1e-10);
}

TEST_CASE("pairing antisymmetry and surface form") {
  auto cfg = small_config();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    auto f = bump(cfg, {1.0 + 0.3 * u(rng), 0.5 * u(rng), 0.4, 0.6, 10.0 + u(rng)});
    auto g = bump(cfg, {1.6 + 0.3 * u(rng), 0.5 * u(rng), 0.35, 0.6, 10.0 + u(rng)});
    CHECK(pair_E(f, f, PairMethod::kVolume) == 0.0);
    double fg = pair_E(f, g, PairMethod::kVolume);
    CHECK(pair_E(g, f, PairMethod::kVolume) == -fg);
    double sfg = pair_E(f, g, PairMethod::kSurface);
    double sgf = pair_E(g, f, PairMethod::kSurface);
    CHECK(std::abs(fg) > 1e-4);
    CHECK(std::abs(sfg - fg) <= 1e-10 * std::abs(fg));
    CHECK(std::abs(sgf + fg) <= 1e-10 * std::abs(fg));
  }
}

TEST_CASE("surface form is slice independent") {
  auto cfg = small_config();
  auto f = bump(cfg, {1.0, -0.2, 0.3, 0.4, 1.0});
  auto g = bump(cfg, {1.2, 0.4, 0.3, 0.4, 1.0});
  double before = pair_E(f, g, PairMethod::kSurface, std::size_t{20});
  double after1 = pair_E(f, g, PairMethod::kSurface, std::size_t{170});
  double after2 = pair_E(f, g, PairMethod::kSurface, cfg.steps - 3);
  CHECK(std::abs(before - after1) <= 1e-10 * std::abs(after1));
  CHECK(std::abs(after2 - after1) <= 1e-10 * std::abs(after1));
  CHECK(code_of([&] { pair_E(f, g, PairMethod::kSurface, std::size_t{100}); }) == ErrorCode::kInvalidSlice);
  CHECK(code_of([&] { pair_E(f, g, PairMethod::kSurface, std::size_t{0}); }) == ErrorCode::kInvalidSlice);
}

TEST_CASE("pairing converges at second order") {
  double p1 = pairing_at(0.04, PairMethod::kVolume);
  double p2 = pairing_at(0.02, PairMethod::kVolume);
  double p4 = pairing_at(0.01, PairMethod::kVolume);
  double order = std::log2(std::abs((p1 - p2) / (p2 - p4)));
  MESSAGE("pairings " << p1 << " " << p2 << " " << p4 << " order " << order);
  CHECK(order >= 1.9);
  CHECK(std::abs(p2 - p4) <= 1e-3 * std::abs(p4));
  double s2 = pairing_at(0.02, PairMethod::kSurface);
  CHECK(std::abs(s2 - p2) <= 1e-3 * std::abs(p2));
}

TEST_CASE("dispersion relation") {
  LatticeConfig cfg;
  cfg.boundary = Boundary::kPeriodic;
  cfg.nx = 256;
  cfg.a = 0.05;
  cfg.dt = 0.02;
  cfg.steps = 400;
  cfg.m = 1.5;
  double len = static_cast<double>(cfg.nx) * cfg.a;
  for (int mode : {1, 8, 40}) {
    double k = 2.0 * std::numbers::pi * mode / len;
    double measured = measure_frequency(cfg, mode);
    double discrete = discrete_frequency(k, cfg);
    double semi = semi_discrete_frequency(k, cfg.a, cfg.m);
    MESSAGE("mode " << mode << " measured " << measured << " discrete " << discrete << " semi " << semi);
    CHECK(std::abs(measured - discrete) <= 1e-5 * discrete);
    CHECK(std::abs(measured - semi) <= cfg.dt * cfg.dt * semi * semi * semi);
  }
}

TEST_CASE("slice compression of a standing wave") {
  LatticeConfig cfg;
  cfg.boundary = Boundary::kPeriodic;
  double len = static_cast<double>(cfg.nx) * cfg.a;
  double k = 2.0 * std::numbers::pi * 3 / len;
  CauchyData d{std::vector<double>(cfg.nx), std::vector<double>(cfg.nx, 0.0)};
  for (std::size_t j = 0; j < cfg.nx; ++j) d.psi[j] = std::cos(k * cfg.x(j));
  auto full = slice_compress(cfg, d, 240, 1.0, 2.0);
  MESSAGE("reconstruction error " << full.relative_error);
  CHECK(full.relative_error <= 1e-3);
  CHECK(cfg.t(full.source_support.n_min) >= 1.0);
  CHECK(cfg.t(full.source_support.n_max) <= 2.0);

  auto half = slice_compress(cfg, d, 240, 1.25, 1.75);
  CHECK(half.relative_error <= 1e-3);
  CHECK(cfg.t(half.source_support.n_min) >= 1.25);
  CHECK(cfg.t(half.source_support.n_max) <= 1.75);
  std::size_t span_full = full.source_support.n_max - full.source_support.n_min;
  std::size_t span_half = half.source_support.n_max - half.source_support.n_min;
  CHECK(span_half * 2 <= span_full + 2);

  CauchyData zero{std::vector<double>(cfg.nx, 0.0), std::vector<double>(cfg.nx, 0.0)};
  CHECK(slice_compress(cfg, zero, 240, 1.0, 2.0).source.max_abs() == 0.0);
  CHECK(code_of([&] { slice_compress(cfg, d, 240, 1.0, 1.0 + 3 * cfg.dt); }) == ErrorCode::kWindowTooThin);
}

TEST_CASE("two-point bridge on lattice modes") {
  // Cauchy data of E f as a phase-space vector x = sqrt(a) (psi_j, pi_j).
  LatticeConfig cfg;
  cfg.boundary = Boundary::kPeriodic;
  cfg.nx = 96;
  cfg.a = 0.05;
  cfg.dt = 0.025;
  cfg.steps = 160;
  cfg.m = 1.0;
  auto f = bump(cfg, {1.0, -0.3, 0.4, 0.6, 1.0});
  auto g = bump(cfg, {1.4, 0.5, 0.5, 0.5, 1.0});
  std::size_t slice = 120;
  auto vec = [&](const LatticeField& src) {
    auto d = cauchy_data(causal_E(src), slice);
    VectorXd x(2 * cfg.nx);
    for (std::size_t j = 0; j < cfg.nx; ++j) {
      x(2 * j) = std::sqrt(cfg.a) * d.psi[j];
      x(2 * j + 1) = std::sqrt(cfg.a) * d.pi[j];
    }
    return x;
  };
  VectorXd x = vec(f), y = vec(g);
  MatrixXd tau = standard_tau(cfg.nx);
  MatrixXd mu = ground_state_mu(periodic_kg_energy(cfg.nx, cfg.m, cfg.a), tau);
  std::complex<double> omega(x.dot(mu * y), 0.5 * x.dot(tau * y));
  double e = pair_E(f, g, PairMethod::kVolume);
  CHECK(std::abs(2.0 * omega.imag() - e) <= 1e-6);
  CHECK(purity(mu, tau).pure);
}
