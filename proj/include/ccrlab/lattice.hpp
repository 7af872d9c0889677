#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccrlab/error.hpp"

// 1+1 dimensional lattice for P = d_t^2 - d_x^2 + m^2. Grid points are
// t_n = n dt (n = 0..steps) and x_j = (j - (nx-1)/2) a (j = 0..nx-1).
namespace ccrlab::lattice {

enum class Boundary { kPeriodic, kAbsorbingPad };

struct LatticeConfig {
  std::size_t nx = 960;
  std::size_t steps = 480;
  double a = 0.025;
  double dt = 0.0125;
  double m = 1.0;
  Boundary boundary = Boundary::kAbsorbingPad;
  // Sites at each end that sources must avoid (absorbing-pad only).
  std::size_t pad = 260;

  double x(std::size_t j) const { return (static_cast<double>(j) - 0.5 * static_cast<double>(nx - 1)) * a; }
  double t(std::size_t n) const { return static_cast<double>(n) * dt; }

  /// Throws kInvalidConfig naming the offending key.
  void validate() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; `pointer` prefixes error messages.
  static LatticeConfig from_json(const nlohmann::json& j, const std::string& pointer = "");
};

struct Support {
  bool empty = true;
  std::size_t n_min = 0, n_max = 0, j_min = 0, j_max = 0;
};

class LatticeField {
 public:
  explicit LatticeField(const LatticeConfig& cfg);

  static LatticeField sample(const LatticeConfig& cfg, const std::function<double(double t, double x)>& f);

  const LatticeConfig& config() const { return cfg_; }
  std::size_t nt() const { return cfg_.steps + 1; }
  std::size_t nx() const { return cfg_.nx; }

  double& operator()(std::size_t n, std::size_t j) { return values_[n * cfg_.nx + j]; }
  double operator()(std::size_t n, std::size_t j) const { return values_[n * cfg_.nx + j]; }
  double* row(std::size_t n) { return values_.data() + n * cfg_.nx; }
  const double* row(std::size_t n) const { return values_.data() + n * cfg_.nx; }
  const std::vector<double>& values() const { return values_; }

  Support support(double tol = 0.0) const;
  double max_abs() const;
  /// sqrt(a dt sum f^2).
  double l2_norm() const;

  LatticeField& operator-=(const LatticeField& o);
  LatticeField& operator+=(const LatticeField& o);

  /// Header line "ccrlab-field <nt> <nx>\n" followed by row-major binary64 values.
  void write_binary(const std::string& path) const;

 private:
  LatticeConfig cfg_;
  std::vector<double> values_;
};

struct Bump {
  double tc = 0.0, xc = 0.0;  // centre
  double wt = 1.0, wx = 1.0;  // half-widths
  double amp = 1.0;

  nlohmann::json to_json() const;
  static Bump from_json(const nlohmann::json& j, const std::string& pointer = "");
};

/// amp * b((t - tc)/wt) b((x - xc)/wx) with b(s) = exp(-1/(1 - s^2)) on |s| < 1.
LatticeField bump(const LatticeConfig& cfg, const Bump& b);

/// Discrete P g on time levels 1..steps-1 (zero on the first and last level).
LatticeField apply_kg(const LatticeField& g);

enum class Which { kRetarded, kAdvanced };

/// Leapfrog solution of P u = f with zero data on the first two (retarded) or
/// last two (advanced) time levels.
LatticeField fundamental(const LatticeField& f, Which which);

/// Advanced minus retarded.
LatticeField causal_E(const LatticeField& f);

enum class PairMethod { kVolume, kSurface };

/// Volume: a dt sum f (E g), antisymmetrized. Surface: the Wronskian
/// a sum_j (psi_f d_t psi_g - psi_g d_t psi_f) on one time level (centered d_t),
/// psi = E f. The slice defaults to the first level after both supports.
double pair_E(const LatticeField& f, const LatticeField& g, PairMethod method,
              std::optional<std::size_t> slice = std::nullopt);

/// Surface form on an already computed pair of solutions.
double wronskian(const LatticeField& psi_f, const LatticeField& psi_g, std::size_t slice);

struct CauchyData {
  std::vector<double> psi;
  std::vector<double> pi;  // time derivative
};

/// Values and centered time derivative of a solution on level n (1 <= n < steps).
CauchyData cauchy_data(const LatticeField& solution, std::size_t n);

/// Homogeneous solution on the whole grid with the given data on level n0.
LatticeField evolve(const LatticeConfig& cfg, const CauchyData& data, std::size_t n0);

struct SliceCompression {
  LatticeField source;         // f = P(chi psi), chi = 1 before the window, 0 after
  LatticeField solution;       // psi
  LatticeField reconstructed;  // E f
  double relative_error = 0.0;
  Support source_support;
};

/// Compresses the solution with data on level n0 into a source supported in the
/// time window [t0, t1]; the window must span at least 4 steps. Always uses
/// the periodic boundary since the source fills the whole slice.
SliceCompression slice_compress(const LatticeConfig& cfg, const CauchyData& data, std::size_t n0, double t0,
                                double t1);

/// (2/dt)^2 sin^2(w dt/2) = (2/a)^2 sin^2(k a/2) + m^2.
double discrete_frequency(double k, const LatticeConfig& cfg);
/// w^2 = m^2 + (2/a)^2 sin^2(k a/2).
double semi_discrete_frequency(double k, double a, double m);
/// Evolves cos(k x - w t) on a periodic lattice and fits the phase slope.
double measure_frequency(const LatticeConfig& cfg, int mode);

}  // namespace ccrlab::lattice
