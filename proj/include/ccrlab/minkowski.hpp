#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ccrlab/error.hpp"

// Vacuum two-point function of the free scalar field in 3+1 Minkowski space as
// a function of the separation (dt, r), dt = t_x - t_y, r = |x - y|, with
// sigma = r^2 - dt^2 and sigma_eps = sigma + 2 i eps dt + eps^2.
namespace ccrlab::minkowski {

using cplx = std::complex<double>;

struct SeparationPoint {
  double dt = 0.0;
  double r = 0.0;
};

inline constexpr int kMaxHadamardOrder = 8;

struct KernelParams {
  double m = 1.0;
  double eps = 0.0;     // 0 requests the eps -> 0+ limit
  double lambda = 0.0;  // 0 means 1/m
  int order = 3;

  double length_scale() const { return lambda > 0.0 ? lambda : 1.0 / m; }
  /// Throws kInvalidInput for bad values and kOrderGuard for order > 8.
  void validate(bool need_mass) const;
};

/// The imaginary part keeps the sign of dt when eps = 0 (signed zero), which
/// selects the side of the branch cut along the negative real axis.
cplx sigma_eps(const SeparationPoint& p, double eps);

struct BesselK01 {
  cplx k0, k1;
};

/// Modified Bessel functions K_0, K_1 on the principal branch (|arg z| < pi):
/// ascending series for |z| <= 2, Steed's continued fraction beyond.
BesselK01 bessel_k01(cplx z);

/// Extrapolation nodes eps_k = scale * {1e-2, 1e-3, 1e-4, 1e-5} with
/// scale = |sigma| / (r + |dt|); throws kOnLightconeSingular at null points.
std::vector<double> eps_ladder(const SeparationPoint& p);

/// Polynomial (Neville) extrapolation of samples y(x_k) to x = 0.
cplx extrapolate_to_zero(const std::vector<double>& xs, const std::vector<cplx>& ys);

/// (m^2/(4 pi^2)) K_1(m s)/(m s), s = sqrt(sigma_eps), at fixed eps >= 0.
cplx omega2_bessel_at(const SeparationPoint& p, double m, double eps);

/// Fixed eps when params.eps > 0, otherwise the extrapolated eps -> 0+ value.
cplx omega2_bessel(const SeparationPoint& p, const KernelParams& params);

struct QuadratureResult {
  cplx value;
  double error = 0.0;
  std::size_t panels = 0;
};

/// int_0^inf (k/E) sin(k r) exp(-z E) dk, E = sqrt(k^2 + m^2), Re z > 0. The
/// massless part and the 1/k tail are integrated in closed form; the rest is
/// summed over panels with Wynn's epsilon acceleration.
QuadratureResult radial_mode_integral(double r, cplx z, double m, double tol = 1e-11);

/// (1/(4 pi^2 r)) radial_mode_integral(r, eps + i dt, m), fixed eps > 0.
cplx omega2_fourier_at(const SeparationPoint& p, double m, double eps);

cplx omega2_fourier(const SeparationPoint& p, const KernelParams& params);

/// 2 Im omega2: -(1/(2 pi^2 r)) int (k/E) sin(k r) sin(E dt) dk, extrapolated in eps.
double commutator_function(const SeparationPoint& p, double m);

/// v_k = (m^2/(16 pi^2)) (m^2/4)^k / (k! (k+1)!).
double hadamard_v(int k, double m);

/// 1/(4 pi^2 sigma_eps) + sum_{k <= N} v_k sigma^k log(sigma_eps / lambda^2),
/// for |sigma| <= 4 lambda^2.
cplx hadamard_H(const SeparationPoint& p, const KernelParams& params);

/// omega2 - H at the same eps. Near the diagonal the singular terms are
/// cancelled analytically in the ascending series.
cplx remainder_w(const SeparationPoint& p, const KernelParams& params);

/// w_{lambda'} - w_lambda = sum_{k <= N} v_k sigma^k log(lambda'^2 / lambda^2).
cplx lambda_shift(const SeparationPoint& p, const KernelParams& params, double lambda_new);

/// omega2 smeared in y with the Gaussian exp(-(t^2 + |y|^2)/(2 s^2)) centred at
/// the origin, as a function of x = (t, r).
cplx smeared_omega(double t, double r, double m, double s);

/// Bound on |d^n/dt^n smeared_omega| from the momentum integral.
double smeared_derivative_bound(int n, double m, double s);

/// Isotropic momentum profile phi(|k|) on a uniform grid k_j = j dk.
struct MomentumProfile {
  double dk = 0.0;
  std::vector<cplx> phi;
};

/// Re 4 pi int k^2 conj(phi_f) phi_g dk (composite Simpson). Throws
/// kTailTruncation when |phi|^2 k^2 at the grid end exceeds tail_tol of its maximum.
double mu_minkowski(const MomentumProfile& f, const MomentumProfile& g, double tail_tol = 1e-12);

/// 2 Im 4 pi int k^2 conj(phi_f) phi_g dk.
double tau_minkowski(const MomentumProfile& f, const MomentumProfile& g, double tail_tol = 1e-12);

/// phi(k) = sqrt(E/2) psi^(k) + i pi^(k)/sqrt(2E) for radial Cauchy data on a
/// uniform r grid starting at 0, with the 3D radial Fourier transform.
MomentumProfile profile_from_cauchy(double dr, const std::vector<double>& psi, const std::vector<double>& pi, double m,
                                    double dk, std::size_t nk);

/// int (psi_f pi_g - psi_g pi_f) d^3x for radial data.
double radial_symplectic(double dr, const std::vector<double>& psi_f, const std::vector<double>& pi_f,
                         const std::vector<double>& psi_g, const std::vector<double>& pi_g);

}  // namespace ccrlab::minkowski
