#include "ccrlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace ccrlab::lattice {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::kInvalidConfig, key + ": " + msg);
}

void require_same_grid(const LatticeField& f, const LatticeField& g) {
  const auto& a = f.config();
  const auto& b = g.config();
  if (a.nx != b.nx || a.steps != b.steps || a.a != b.a || a.dt != b.dt || a.m != b.m || a.boundary != b.boundary) {
    throw Error(ErrorCode::kInvalidInput, "fields live on different lattices");
  }
}

// out = (u[j+1] - 2u[j] + u[j-1]) / a^2 with the configured boundary.
void laplacian(const LatticeConfig& cfg, const double* u, double* out) {
  std::size_t nx = cfg.nx;
  double inv_a2 = 1.0 / (cfg.a * cfg.a);
  bool periodic = cfg.boundary == Boundary::kPeriodic;
  for (std::size_t j = 0; j < nx; ++j) {
    double left = j > 0 ? u[j - 1] : (periodic ? u[nx - 1] : 0.0);
    double right = j + 1 < nx ? u[j + 1] : (periodic ? u[0] : 0.0);
    out[j] = (left - 2.0 * u[j] + right) * inv_a2;
  }
}

// next = 2 cur - other + dt^2 (lap cur - m^2 cur + src); works in both time directions.
void leapfrog(const LatticeConfig& cfg, const double* cur, const double* other, const double* src, double* next,
              std::vector<double>& scratch) {
  scratch.resize(cfg.nx);
  laplacian(cfg, cur, scratch.data());
  double dt2 = cfg.dt * cfg.dt, m2 = cfg.m * cfg.m;
  for (std::size_t j = 0; j < cfg.nx; ++j) {
    double rhs = scratch[j] - m2 * cur[j] + (src ? src[j] : 0.0);
    next[j] = 2.0 * cur[j] - other[j] + dt2 * rhs;
  }
}

void check_source(const LatticeField& f) {
  const auto& cfg = f.config();
  Support s = f.support();
  if (s.empty) return;
  if (s.n_min < 1 || s.n_max + 1 > cfg.steps) {
    throw Error(ErrorCode::kInvalidInput, "source must vanish on the first and last time level");
  }
  if (cfg.boundary == Boundary::kAbsorbingPad && (s.j_min < cfg.pad || s.j_max + cfg.pad >= cfg.nx)) {
    throw Error(ErrorCode::kCausalContamination,
                "source support reaches the " + std::to_string(cfg.pad) + "-site boundary pad");
  }
}

}  // namespace

void LatticeConfig::validate() const {
  if (nx < 3) config_error("nx", "need at least 3 sites");
  if (steps < 4) config_error("steps", "need at least 4 time steps");
  if (!(a > 0.0)) config_error("a", "spacing must be positive");
  if (!(dt > 0.0)) config_error("dt", "time step must be positive");
  if (!(m >= 0.0)) config_error("m", "mass must be non-negative");
  if (dt > a) config_error("dt", "CFL rule dt/a <= 1 violated (dt = " + std::to_string(dt) + ", a = " + std::to_string(a) + ")");
  // Leapfrog with a mass term is stable only for (dt/2)^2 (4/a^2 + m^2) <= 1.
  if (0.25 * dt * dt * (4.0 / (a * a) + m * m) > 1.0) {
    config_error("dt", "CFL rule with mass term violated: need (dt/2)^2 (4/a^2 + m^2) <= 1");
  }
  if (boundary == Boundary::kAbsorbingPad) {
    if (2 * pad >= nx) config_error("pad", "pads leave no interior");
    if (static_cast<double>(pad) * a < static_cast<double>(steps) * dt) {
      config_error("pad", "pad width pad*a must be >= steps*dt so boundaries cannot reach the interior");
    }
  }
}

nlohmann::json LatticeConfig::to_json() const {
  return {{"nx", nx},
          {"steps", steps},
          {"a", a},
          {"dt", dt},
          {"m", m},
          {"boundary", boundary == Boundary::kPeriodic ? "periodic" : "absorbing-pad"},
          {"pad", pad}};
}

LatticeConfig LatticeConfig::from_json(const nlohmann::json& j, const std::string& pointer) {
  LatticeConfig c;
  if (!j.is_object()) config_error(pointer.empty() ? "/" : pointer, "expected an object");
  auto key = [&](const char* k) { return pointer + "/" + k; };
  for (const auto& [k, v] : j.items()) {
    if (k == "nx" || k == "steps" || k == "pad") {
      if (!v.is_number_unsigned()) config_error(key(k.c_str()), "expected a non-negative integer");
    } else if (k == "a" || k == "dt" || k == "m") {
      if (!v.is_number()) config_error(key(k.c_str()), "expected a number");
    } else if (k == "boundary") {
      if (!v.is_string() || (v != "periodic" && v != "absorbing-pad")) {
        config_error(key("boundary"), "expected \"periodic\" or \"absorbing-pad\"");
      }
    } else {
      config_error(key(k.c_str()), "unknown key");
    }
  }
  c.nx = j.value("nx", c.nx);
  c.steps = j.value("steps", c.steps);
  c.pad = j.value("pad", c.pad);
  c.a = j.value("a", c.a);
  c.dt = j.value("dt", c.dt);
  c.m = j.value("m", c.m);
  if (j.contains("boundary")) c.boundary = j["boundary"] == "periodic" ? Boundary::kPeriodic : Boundary::kAbsorbingPad;
  try {
    c.validate();
  } catch (const Error& e) {
    std::string what = e.what();
    auto colon = what.find(": ");
    throw Error(ErrorCode::kInvalidConfig, pointer + "/" + (colon == std::string::npos ? what : what.substr(colon + 2)));
  }
  return c;
}

LatticeField::LatticeField(const LatticeConfig& cfg) : cfg_(cfg), values_((cfg.steps + 1) * cfg.nx, 0.0) {}

LatticeField LatticeField::sample(const LatticeConfig& cfg, const std::function<double(double, double)>& f) {
  LatticeField out(cfg);
  for (std::size_t n = 0; n <= cfg.steps; ++n)
    for (std::size_t j = 0; j < cfg.nx; ++j) out(n, j) = f(cfg.t(n), cfg.x(j));
  return out;
}

Support LatticeField::support(double tol) const {
  Support s;
  for (std::size_t n = 0; n < nt(); ++n) {
    const double* r = row(n);
    for (std::size_t j = 0; j < cfg_.nx; ++j) {
      if (std::abs(r[j]) <= tol) continue;
      if (s.empty) {
        s = {false, n, n, j, j};
      } else {
        s.n_max = n;
        s.j_min = std::min(s.j_min, j);
        s.j_max = std::max(s.j_max, j);
      }
    }
  }
  return s;
}

double LatticeField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double LatticeField::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(cfg_.a * cfg_.dt * s);
}

LatticeField& LatticeField::operator-=(const LatticeField& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

LatticeField& LatticeField::operator+=(const LatticeField& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

void LatticeField::write_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot open " + path);
  out << "ccrlab-field " << nt() << " " << nx() << "\n";
  out.write(reinterpret_cast<const char*>(values_.data()), static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

nlohmann::json Bump::to_json() const {
  return {{"tc", tc}, {"xc", xc}, {"wt", wt}, {"wx", wx}, {"amp", amp}};
}

Bump Bump::from_json(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_object()) config_error(pointer.empty() ? "/" : pointer, "expected an object");
  Bump b;
  for (const auto& [k, v] : j.items()) {
    double* slot = k == "tc" ? &b.tc : k == "xc" ? &b.xc : k == "wt" ? &b.wt : k == "wx" ? &b.wx : k == "amp" ? &b.amp : nullptr;
    if (!slot) config_error(pointer + "/" + k, "unknown key");
    if (!v.is_number()) config_error(pointer + "/" + k, "expected a number");
    *slot = v.get<double>();
  }
  if (!(b.wt > 0.0)) config_error(pointer + "/wt", "half-width must be positive");
  if (!(b.wx > 0.0)) config_error(pointer + "/wx", "half-width must be positive");
  return b;
}

LatticeField bump(const LatticeConfig& cfg, const Bump& b) {
  auto shape = [](double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; };
  return LatticeField::sample(cfg, [&](double t, double x) { return b.amp * shape((t - b.tc) / b.wt) * shape((x - b.xc) / b.wx); });
}

LatticeField apply_kg(const LatticeField& g) {
  const auto& cfg = g.config();
  LatticeField out(cfg);
  std::vector<double> lap(cfg.nx);
  double inv_dt2 = 1.0 / (cfg.dt * cfg.dt), m2 = cfg.m * cfg.m;
  for (std::size_t n = 1; n < cfg.steps; ++n) {
    laplacian(cfg, g.row(n), lap.data());
    const double *prev = g.row(n - 1), *cur = g.row(n), *next = g.row(n + 1);
    double* o = out.row(n);
    for (std::size_t j = 0; j < cfg.nx; ++j) o[j] = (next[j] - 2.0 * cur[j] + prev[j]) * inv_dt2 - lap[j] + m2 * cur[j];
  }
  return out;
}

LatticeField fundamental(const LatticeField& f, Which which) {
  check_source(f);
  const auto& cfg = f.config();
  LatticeField u(cfg);
  std::vector<double> scratch;
  std::size_t steps = cfg.steps;
  if (which == Which::kRetarded) {
    for (std::size_t n = 1; n < steps; ++n) leapfrog(cfg, u.row(n), u.row(n - 1), f.row(n), u.row(n + 1), scratch);
  } else {
    for (std::size_t n = steps - 1; n >= 1; --n) leapfrog(cfg, u.row(n), u.row(n + 1), f.row(n), u.row(n - 1), scratch);
  }
  return u;
}

LatticeField causal_E(const LatticeField& f) {
  LatticeField e = fundamental(f, Which::kAdvanced);
  e -= fundamental(f, Which::kRetarded);
  return e;
}

double wronskian(const LatticeField& psi_f, const LatticeField& psi_g, std::size_t slice) {
  require_same_grid(psi_f, psi_g);
  const auto& cfg = psi_f.config();
  if (slice < 1 || slice + 1 > cfg.steps) {
    throw Error(ErrorCode::kInvalidSlice, "slice " + std::to_string(slice) + " is not an interior time level");
  }
  double s = 0.0;
  const double *f0 = psi_f.row(slice), *fp = psi_f.row(slice + 1), *fm = psi_f.row(slice - 1);
  const double *g0 = psi_g.row(slice), *gp = psi_g.row(slice + 1), *gm = psi_g.row(slice - 1);
  for (std::size_t j = 0; j < cfg.nx; ++j) s += f0[j] * (gp[j] - gm[j]) - g0[j] * (fp[j] - fm[j]);
  return cfg.a * s / (2.0 * cfg.dt);
}

double pair_E(const LatticeField& f, const LatticeField& g, PairMethod method, std::optional<std::size_t> slice) {
  require_same_grid(f, g);
  const auto& cfg = f.config();
  if (method == PairMethod::kVolume) {
    LatticeField ef = causal_E(f), eg = causal_E(g);
    double fg = 0.0, gf = 0.0;
    const auto& fv = f.values();
    const auto& gv = g.values();
    for (std::size_t k = 0; k < fv.size(); ++k) {
      fg += fv[k] * eg.values()[k];
      gf += gv[k] * ef.values()[k];
    }
    return 0.5 * cfg.a * cfg.dt * (fg - gf);
  }
  Support sf = f.support(), sg = g.support();
  auto hits = [](const Support& s, std::size_t n) { return !s.empty && n + 1 >= s.n_min && n <= s.n_max + 1; };
  std::size_t n;
  if (slice) {
    n = *slice;
    if (hits(sf, n) || hits(sg, n)) {
      throw Error(ErrorCode::kInvalidSlice, "slice " + std::to_string(n) + " intersects a source support");
    }
  } else {
    std::size_t after = std::max(sf.empty ? 0 : sf.n_max, sg.empty ? 0 : sg.n_max) + 2;
    n = std::min(after, cfg.steps - 1);
    if (hits(sf, n) || hits(sg, n)) {
      std::size_t before = std::min(sf.empty ? cfg.steps : sf.n_min, sg.empty ? cfg.steps : sg.n_min);
      if (before < 3) throw Error(ErrorCode::kInvalidSlice, "no time level clear of both supports");
      n = before - 2;
    }
  }
  return wronskian(causal_E(f), causal_E(g), n);
}

CauchyData cauchy_data(const LatticeField& solution, std::size_t n) {
  const auto& cfg = solution.config();
  if (n < 1 || n + 1 > cfg.steps) throw Error(ErrorCode::kInvalidSlice, "Cauchy level must be interior");
  CauchyData d{std::vector<double>(solution.row(n), solution.row(n) + cfg.nx), std::vector<double>(cfg.nx)};
  for (std::size_t j = 0; j < cfg.nx; ++j) d.pi[j] = (solution(n + 1, j) - solution(n - 1, j)) / (2.0 * cfg.dt);
  return d;
}

LatticeField evolve(const LatticeConfig& cfg, const CauchyData& data, std::size_t n0) {
  cfg.validate();
  if (data.psi.size() != cfg.nx || data.pi.size() != cfg.nx) throw Error(ErrorCode::kInvalidInput, "Cauchy data size mismatch");
  if (n0 + 1 > cfg.steps) throw Error(ErrorCode::kInvalidSlice, "Cauchy level outside the grid");
  LatticeField u(cfg);
  std::vector<double> lap(cfg.nx), scratch;
  laplacian(cfg, data.psi.data(), lap.data());
  double dt = cfg.dt, m2 = cfg.m * cfg.m;
  for (std::size_t j = 0; j < cfg.nx; ++j) {
    u(n0, j) = data.psi[j];
    u(n0 + 1, j) = data.psi[j] + dt * data.pi[j] + 0.5 * dt * dt * (lap[j] - m2 * data.psi[j]);
  }
  for (std::size_t n = n0 + 1; n < cfg.steps; ++n) leapfrog(cfg, u.row(n), u.row(n - 1), nullptr, u.row(n + 1), scratch);
  for (std::size_t n = n0; n >= 1; --n) leapfrog(cfg, u.row(n), u.row(n + 1), nullptr, u.row(n - 1), scratch);
  return u;
}

SliceCompression slice_compress(const LatticeConfig& base, const CauchyData& data, std::size_t n0, double t0,
                                double t1) {
  // The compressed source fills the whole slice, so there is no room for an absorbing pad.
  LatticeConfig cfg = base;
  cfg.boundary = Boundary::kPeriodic;
  cfg.validate();
  if (!(t1 > t0)) throw Error(ErrorCode::kInvalidInput, "window needs t0 < t1");
  auto i0 = static_cast<long>(std::ceil(t0 / cfg.dt - 1e-9));
  auto i1 = static_cast<long>(std::floor(t1 / cfg.dt + 1e-9));
  if (i1 - i0 < 4) {
    throw Error(ErrorCode::kWindowTooThin, "window spans " + std::to_string(std::max(0L, i1 - i0)) + " steps, need >= 4");
  }
  if (i0 < 1 || i1 + 1 > static_cast<long>(cfg.steps)) throw Error(ErrorCode::kInvalidInput, "window must lie inside the grid");
  SliceCompression out{LatticeField(cfg), evolve(cfg, data, n0), LatticeField(cfg), 0.0, {}};
  LatticeField chi_psi(cfg);
  double lo = static_cast<double>(i0 + 1), hi = static_cast<double>(i1 - 1);
  for (std::size_t n = 0; n <= cfg.steps; ++n) {
    double s = std::clamp((static_cast<double>(n) - lo) / (hi - lo), 0.0, 1.0);
    double chi = 1.0 - s * s * s * (s * (6.0 * s - 15.0) + 10.0);
    for (std::size_t j = 0; j < cfg.nx; ++j) chi_psi(n, j) = chi * out.solution(n, j);
  }
  // P(chi psi) vanishes identically where chi is constant; drop the rounding there.
  out.source = apply_kg(chi_psi);
  for (std::size_t n = 0; n <= cfg.steps; ++n) {
    auto ln = static_cast<long>(n);
    if (ln >= i0 + 1 && ln <= i1 - 1) continue;
    std::fill(out.source.row(n), out.source.row(n) + cfg.nx, 0.0);
  }
  out.source_support = out.source.support();
  out.reconstructed = causal_E(out.source);
  LatticeField diff = out.reconstructed;
  diff -= out.solution;
  double scale = out.solution.max_abs();
  out.relative_error = scale > 0.0 ? diff.max_abs() / scale : diff.max_abs();
  return out;
}

double discrete_frequency(double k, const LatticeConfig& cfg) {
  double s = std::sin(0.5 * k * cfg.a) * 2.0 / cfg.a;
  double rhs = s * s + cfg.m * cfg.m;
  double arg = 0.5 * cfg.dt * std::sqrt(rhs);
  if (arg > 1.0) throw Error(ErrorCode::kInvalidConfig, "dt: unstable for this wavenumber");
  return 2.0 / cfg.dt * std::asin(arg);
}

double semi_discrete_frequency(double k, double a, double m) {
  double s = std::sin(0.5 * k * a) * 2.0 / a;
  return std::sqrt(m * m + s * s);
}

double measure_frequency(const LatticeConfig& base, int mode) {
  LatticeConfig cfg = base;
  cfg.boundary = Boundary::kPeriodic;
  cfg.validate();
  double len = static_cast<double>(cfg.nx) * cfg.a;
  double k = 2.0 * std::numbers::pi * mode / len;
  double w = semi_discrete_frequency(k, cfg.a, cfg.m);
  CauchyData d{std::vector<double>(cfg.nx), std::vector<double>(cfg.nx)};
  for (std::size_t j = 0; j < cfg.nx; ++j) {
    d.psi[j] = std::cos(k * cfg.x(j));
    d.pi[j] = w * std::sin(k * cfg.x(j));
  }
  LatticeField u = evolve(cfg, d, 0);
  // Phase of the projection onto exp(ikx), unwrapped, fitted linearly in t.
  double prev = 0.0, offset = 0.0;
  double st = 0, sp = 0, stt = 0, stp = 0;
  for (std::size_t n = 0; n <= cfg.steps; ++n) {
    double c = 0.0, s = 0.0;
    for (std::size_t j = 0; j < cfg.nx; ++j) {
      c += u(n, j) * std::cos(k * cfg.x(j));
      s += u(n, j) * std::sin(k * cfg.x(j));
    }
    double ph = std::atan2(s, c);
    if (n > 0) {
      while (ph + offset - prev > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
      while (ph + offset - prev < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    }
    prev = ph + offset;
    double t = cfg.t(n);
    st += t;
    sp += prev;
    stt += t * t;
    stp += t * prev;
  }
  double cnt = static_cast<double>(cfg.steps + 1);
  return (cnt * stp - st * sp) / (cnt * stt - st * st);
}

}  // namespace ccrlab::lattice
