#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ccrlab/algebra.hpp"
#include "ccrlab/check.hpp"
#include "ccrlab/lattice.hpp"
#include "ccrlab/phase_space.hpp"
#include "ccrlab/quasifree.hpp"
#include "context.hpp"

namespace ccrlab::cli {
namespace {

std::uint32_t max_generator(const AlgebraElement& a) {
  std::uint32_t top = 0;
  for (const auto& [w, c] : a.terms())
    for (auto g : w) top = std::max(top, g.value);
  return top;
}

AlgebraElement parse_element(const Section& s, std::string_view key, ScalarMode mode, std::size_t generators) {
  std::string text = s.text(key, "");
  s.require(!text.empty(), key, "missing");
  auto a = at_key(s.at(key), ErrorCode::kParse, [&] { return AlgebraElement::parse(text, mode); });
  if (max_generator(a) > generators) {
    schema_error(s.at(key), "generator index " + std::to_string(max_generator(a)) + " exceeds " + std::to_string(generators));
  }
  return a;
}

json scalar_json(const Scalar& v) {
  auto z = v.to_complex();
  return {{"text", v.to_string()}, {"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

int run_algebra(const Context& ctx) {
  Section s(ctx.section, ctx.pointer(), {"form", "symplectic", "mode", "expr", "with", "op"});
  ScalarMode mode = s.choice("mode", "exact", {"exact", "float"}) == "exact" ? ScalarMode::kExact : ScalarMode::kFloat;
  s.require(!(s.has("form") && s.has("symplectic")), "symplectic", "give either form or symplectic, not both");
  std::optional<PairingForm> form;
  if (s.has("form")) {
    json j = s.object_or_file("form");
    form = at_key(s.at("form"), ErrorCode::kParse, [&] { return PairingForm::from_json(j); });
    mode = form->mode();
  } else if (s.has("symplectic")) {
    form = PairingForm::standard_symplectic(static_cast<std::size_t>(s.integer("symplectic", 1, 1, 64)), mode);
  } else {
    schema_error(s.at("form"), "missing (give form or symplectic)");
  }
  std::string op = s.choice("op", "normal_form", {"normal_form", "product", "commutator"});
  AlgebraElement a = parse_element(s, "expr", mode, form->size());

  json rep = ctx.report();
  rep["generators"] = form->size();
  rep["input"] = a.to_string();
  rep["normal_form"] = normal_form(a, *form).to_string();
  if (op != "normal_form") {
    AlgebraElement b = parse_element(s, "with", mode, form->size());
    rep["with"] = b.to_string();
    rep[op] = (op == "product" ? normal_form(a * b, *form) : commutator(a, b, *form)).to_string();
  } else {
    s.require(!s.has("with"), "with", "only used with op product or commutator");
  }
  ctx.emit_json("algebra.json", rep, true);
  return 0;
}

int run_npoint(const Context& ctx) {
  Section s(ctx.section, ctx.pointer(), {"kernel", "word", "expr", "gram"});
  s.require(s.has("kernel"), "kernel", "missing");
  json kj = s.object_or_file("kernel");
  auto kernel = at_key(s.at("kernel"), ErrorCode::kParse, [&] { return TwoPointKernel::from_json(kj); });
  QuasifreeState state(kernel);
  s.require(s.has("word") || s.has("expr") || s.has("gram"), "word", "nothing to evaluate (give word, expr or gram)");

  json rep = ctx.report();
  if (s.has("word")) {
    const json& wj = s.get("word");
    std::vector<long> idx;
    if (wj.is_string()) {
      std::string text = wj.get<std::string>();
      std::replace(text.begin(), text.end(), ',', ' ');
      std::istringstream in(text);
      long v;
      while (in >> v) idx.push_back(v);
      s.require(in.eof(), "word", "expected generator indices separated by spaces or commas");
    } else if (wj.is_array()) {
      for (std::size_t i = 0; i < wj.size(); ++i) {
        if (!wj[i].is_number_integer()) schema_error(s.at("word") + "/" + std::to_string(i), "expected an integer");
        idx.push_back(wj[i].get<long>());
      }
    } else {
      schema_error(s.at("word"), "expected a string or an array of indices");
    }
    Word w;
    for (long v : idx) {
      s.require(v >= 1 && static_cast<std::size_t>(v) <= kernel.size(), "word",
                "index " + std::to_string(v) + " outside 1.." + std::to_string(kernel.size()));
      w.push_back(GeneratorIndex{static_cast<std::uint32_t>(v)});
    }
    rep["word"] = idx;
    rep["npoint"] = scalar_json(at_key(s.at("word"), ErrorCode::kDegreeGuard, [&] { return state.npoint(w); }));
  }
  if (s.has("expr")) {
    AlgebraElement a = parse_element(s, "expr", kernel.mode(), kernel.size());
    rep["expr"] = a.to_string();
    rep["expectation"] = scalar_json(at_key(s.at("expr"), ErrorCode::kDegreeGuard, [&] { return state.evaluate(a); }));
  }
  bool psd = true;
  if (s.has("gram")) {
    const json& g = s.get("gram");
    if (!g.is_array() || g.empty()) schema_error(s.at("gram"), "expected a non-empty array of elements");
    std::vector<AlgebraElement> elements;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::string where = s.at("gram") + "/" + std::to_string(i);
      if (!g[i].is_string()) schema_error(where, "expected an element string");
      auto a = at_key(where, ErrorCode::kParse, [&] { return AlgebraElement::parse(g[i].get<std::string>(), kernel.mode()); });
      if (max_generator(a) > kernel.size()) schema_error(where, "generator index exceeds the kernel size");
      elements.push_back(a);
    }
    auto gram = at_key(s.at("gram"), ErrorCode::kDegreeGuard, [&] { return gram_positivity(state, elements); });
    rep["gram"] = gram.to_json();
    psd = gram.psd;
  }
  ctx.emit_json("npoint.json", rep, true);
  if (!psd) return ctx.numerical_failure("Gram matrix is not positive semidefinite");
  return 0;
}

int run_phase(const Context& ctx) {
  Section s(ctx.section, ctx.pointer(),
            {"mu", "tau", "mu2", "check", "method", "cutoff", "samples", "random_modes", "mixed", "tol"});
  std::string check = s.choice("check", "purity", {"purity", "one-particle", "fock", "equivalence"});
  auto samples = static_cast<std::size_t>(s.integer("samples", 20, 1, 100000));
  std::mt19937_64 rng(ctx.seed);

  MatrixXd mu;
  if (s.has("random_modes")) {
    s.require(!s.has("mu"), "random_modes", "give either mu or random_modes, not both");
    auto modes = static_cast<std::size_t>(s.integer("random_modes", 1, 1, 64));
    mu = random_covariance(modes, rng, !s.boolean("mixed", false));
  } else {
    s.require(s.has("mu"), "mu", "missing (give mu or random_modes)");
    s.require(!s.has("mixed"), "mixed", "only used with random_modes");
    mu = matrix_from_json(s.object_or_file("mu"), s.at("mu"));
  }
  s.require(mu.rows() > 0 && mu.rows() == mu.cols() && mu.rows() % 2 == 0, "mu", "expected a square matrix of even size");
  auto modes = static_cast<std::size_t>(mu.rows() / 2);
  MatrixXd tau = standard_tau(modes);
  if (s.has("tau") && s.get("tau") != "standard") tau = matrix_from_json(s.object_or_file("tau"), s.at("tau"));
  s.require(tau.rows() == mu.rows() && tau.cols() == mu.cols(), "tau", "shape differs from mu");
  at_key(s.at("mu"), ErrorCode::kInvalidCovariance, [&] { return validate_mu_tau(mu, tau); });

  json rep = ctx.report();
  rep["modes"] = modes;
  rep["check"] = check;
  if (s.has("random_modes")) rep["mu"] = matrix_to_json(mu);
  bool passed = true;
  std::string failure;
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    VectorXd x(mu.rows());
    for (auto& v : x) v = gauss(rng);
    return x;
  };

  if (check == "purity") {
    s.require(!s.has("tol"), "tol", "purity uses fixed tolerances");
    rep["purity"] = purity(mu, tau).to_json();
  } else if (check == "one-particle") {
    auto method = s.choice("method", "spectral", {"spectral", "square-root"}) == "spectral"
                      ? OneParticleMethod::kSpectral
                      : OneParticleMethod::kSquareRoot;
    double tol = s.number("tol", 1e-12);
    auto ops = one_particle(mu, tau, method);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      VectorXd x = random_vector(), y = random_vector();
      worst = nan_max(worst, ops.reconstruction_defect(x, y) / (mu.norm() * x.norm() * y.norm()));
    }
    rep["one_particle"] = {{"hilbert_dim", ops.hilbert_dim()},
                           {"spans", ops.spans()},
                           {"samples", samples},
                           {"max_relative_reconstruction_defect", worst},
                           {"tol", tol}};
    passed = worst <= tol && ops.spans();
    failure = "one-particle reconstruction defect " + fmt17(worst);
  } else if (check == "fock") {
    double tol = s.number("tol", 1e-10);
    auto cutoff = static_cast<std::size_t>(s.integer("cutoff", 4, 2, static_cast<long>(kMaxFockCutoff)));
    FockRepresentation fock(one_particle(mu, tau), cutoff);
    TwoPointKernel k(mu.rows(), ScalarMode::kFloat);
    for (std::uint32_t i = 1; i <= mu.rows(); ++i)
      for (std::uint32_t j = 1; j <= mu.rows(); ++j) k.set(i, j, Scalar::floating(mu(i - 1, j - 1), 0.5 * tau(i - 1, j - 1)));
    QuasifreeState state(k);
    std::uniform_int_distribution<std::uint32_t> idx(1, static_cast<std::uint32_t>(mu.rows()));
    double worst = 0.0;
    for (std::size_t t = 0; t < samples; ++t) {
      std::size_t n = 1 + t % 4;
      Word w;
      std::vector<VectorXd> xs;
      for (std::size_t p = 0; p < n; ++p) {
        w.push_back(GeneratorIndex{idx(rng)});
        xs.push_back(VectorXd::Unit(mu.rows(), w.back().value - 1));
      }
      worst = nan_max(worst, std::abs(fock.vacuum_npoint(xs) - state.npoint(w).to_complex()));
    }
    double ccr = fock.ccr_defect(cutoff - 1);
    rep["fock"] = {{"one_particle_modes", fock.modes()}, {"cutoff", cutoff},       {"dim", fock.dim()},
                   {"words", samples},                   {"max_npoint_difference", worst},
                   {"ccr_defect", ccr},                  {"tol", tol}};
    passed = worst <= tol && ccr <= tol;
    failure = "Fock n-point difference " + fmt17(worst) + ", CCR defect " + fmt17(ccr);
  } else {
    s.require(s.has("mu2"), "mu2", "missing (needed for check equivalence)");
    MatrixXd mu2 = matrix_from_json(s.object_or_file("mu2"), s.at("mu2"));
    s.require(mu2.rows() == mu.rows() && mu2.cols() == mu.cols(), "mu2", "shape differs from mu");
    at_key(s.at("mu2"), ErrorCode::kInvalidCovariance, [&] { return validate_mu_tau(mu2, tau); });
    auto e = equivalence_sample(mu, mu2);
    rep["equivalence"] = {{"c_min", e.c_min}, {"c_max", e.c_max}, {"hs_norm", e.hs_norm}};
  }
  ctx.emit_json("phase.json", rep, true);
  return passed ? 0 : ctx.numerical_failure(failure);
}

int run_lattice(const Context& ctx) {
  using namespace lattice;
  Section s(ctx.section, ctx.pointer(), {"grid", "f", "g", "slice", "tol", "write_field"});
  json grid = s.object_or_file("grid");
  LatticeConfig cfg = LatticeConfig::from_json(grid.is_null() ? json::object() : grid, s.at("grid"));
  double tol = s.number("tol", 1e-8);
  bool write_field = s.boolean("write_field", false);
  s.require(!write_field || ctx.out_dir.has_value(), "write_field", "needs an output directory (--out)");

  // Default sources sit in the interior, overlapping in time.
  double span = cfg.t(cfg.steps);
  double half = 0.5 * static_cast<double>(cfg.nx - 1) * cfg.a;
  if (cfg.boundary == Boundary::kAbsorbingPad) half -= static_cast<double>(cfg.pad) * cfg.a;
  Bump f{0.35 * span, -0.1 * half, 0.12 * span, 0.15 * half, 10.0};
  Bump g{0.45 * span, 0.1 * half, 0.12 * span, 0.15 * half, 10.0};
  if (s.has("f")) f = Bump::from_json(s.get("f"), s.at("f"));
  if (s.has("g")) g = Bump::from_json(s.get("g"), s.at("g"));
  std::optional<std::size_t> slice;
  if (s.has("slice")) slice = static_cast<std::size_t>(s.integer("slice", 0, 1, static_cast<long>(cfg.steps) - 1));

  auto ff = bump(cfg, f), gf = bump(cfg, g);
  double volume = pair_E(ff, gf, PairMethod::kVolume);
  double surface = at_key(s.at("slice"), ErrorCode::kInvalidSlice, [&] { return pair_E(ff, gf, PairMethod::kSurface, slice); });
  double difference = std::abs(volume - surface) / std::max(std::abs(volume), 1e-300);
  double kernel = causal_E(apply_kg(ff)).l2_norm() / ff.l2_norm();

  std::string csv = "method,value\nvolume," + fmt17(volume) + "\nsurface," + fmt17(surface) + "\n";
  ctx.emit("lattice.csv", csv, true);
  json rep = ctx.report();
  rep["grid"] = cfg.to_json();
  rep["f"] = f.to_json();
  rep["g"] = g.to_json();
  rep["pair_volume"] = volume;
  rep["pair_surface"] = surface;
  rep["relative_difference"] = difference;
  rep["kernel_ratio"] = kernel;
  rep["tol"] = tol;
  bool passed = difference <= tol && kernel <= tol;
  rep["passed"] = passed;
  ctx.emit_json("lattice.json", rep, false);
  if (write_field) {
    auto path = *ctx.out_dir / "lattice_Ef.bin";
    causal_E(ff).write_binary(path.string());
    ctx.out << "wrote " << path.string() << "\n";
  }
  if (!passed) {
    return ctx.numerical_failure("volume/surface difference " + fmt17(difference) + ", |E(Pf)|/|f| " + fmt17(kernel));
  }
  return 0;
}

}  // namespace ccrlab::cli
