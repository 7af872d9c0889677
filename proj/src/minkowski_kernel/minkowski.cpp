#include "ccrlab/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace ccrlab::minkowski {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma = std::numbers::egamma;
constexpr double kFourPi2 = 4.0 * kPi * kPi;

using Gauss = boost::math::quadrature::gauss<double, 20>;

template <typename F>
auto gauss_panel(F&& f, double a, double b) {
  return Gauss::integrate(std::forward<F>(f), a, b);
}

cplx expm1c(cplx w) {
  double a = w.real(), b = w.imag();
  double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

// Wynn's epsilon algorithm on a run of partial sums; returns the last even-column entry.
cplx wynn_epsilon(const std::vector<cplx>& s) {
  std::size_t n = s.size();
  std::vector<cplx> prev(n + 1, cplx(0.0)), cur(s.begin(), s.end());
  cplx best = s.back();
  for (std::size_t col = 1; cur.size() > 1; ++col) {
    std::vector<cplx> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      cplx d = cur[i + 1] - cur[i];
      if (d == cplx(0.0)) return cur[i + 1];
      next[i] = prev[i + 1] + 1.0 / d;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0) best = cur.back();
  }
  return best;
}

double digamma_int(int n) {  // psi(n) for n >= 1
  double h = 0.0;
  for (int j = 1; j < n; ++j) h += 1.0 / j;
  return h - kGamma;
}

void require_point(const SeparationPoint& p) {
  if (!(p.r >= 0.0) || !std::isfinite(p.dt) || !std::isfinite(p.r)) {
    throw Error(ErrorCode::kInvalidInput, "separation needs finite dt and r >= 0");
  }
}

double simpson(const std::vector<double>& y, double h) {
  std::size_t n = y.size();
  if (n < 2) return 0.0;
  double s = 0.0;
  if (n % 2 == 1) {
    s = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
    return s * h / 3.0;
  }
  for (std::size_t i = 0; i < n; ++i) s += (i == 0 || i + 1 == n ? 0.5 : 1.0) * y[i];
  return s * h;
}

cplx profile_overlap(const MomentumProfile& f, const MomentumProfile& g, double tail_tol) {
  if (f.phi.size() != g.phi.size() || f.dk != g.dk || f.phi.size() < 3 || !(f.dk > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "profiles need the same uniform k grid with at least 3 points");
  }
  for (const auto* prof : {&f, &g}) {
    double peak = 0.0;
    for (std::size_t j = 0; j < prof->phi.size(); ++j) {
      double k = static_cast<double>(j) * prof->dk;
      peak = std::max(peak, k * k * std::norm(prof->phi[j]));
    }
    double k_end = static_cast<double>(prof->phi.size() - 1) * prof->dk;
    double tail = k_end * k_end * std::norm(prof->phi.back());
    if (tail > tail_tol * peak) {
      throw Error(ErrorCode::kTailTruncation, "profile has not decayed at k = " + std::to_string(k_end) +
                                                  " (tail/peak = " + std::to_string(peak > 0 ? tail / peak : 0.0) + ")");
    }
  }
  std::vector<double> re(f.phi.size()), im(f.phi.size());
  for (std::size_t j = 0; j < f.phi.size(); ++j) {
    double k = static_cast<double>(j) * f.dk;
    cplx v = 4.0 * kPi * k * k * std::conj(f.phi[j]) * g.phi[j];
    re[j] = v.real();
    im[j] = v.imag();
  }
  return {simpson(re, f.dk), simpson(im, f.dk)};
}

}  // namespace

void KernelParams::validate(bool need_mass) const {
  if (!(m >= 0.0) || !std::isfinite(m)) throw Error(ErrorCode::kInvalidInput, "m must be >= 0");
  if (need_mass && !(m > 0.0)) throw Error(ErrorCode::kInvalidInput, "this evaluation needs m > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::kInvalidInput, "eps must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::kInvalidInput, "lambda must be > 0");
  if (lambda == 0.0 && m == 0.0) throw Error(ErrorCode::kInvalidInput, "lambda must be set when m = 0");
  if (order < 0) throw Error(ErrorCode::kInvalidInput, "order must be >= 0");
  if (order > kMaxHadamardOrder) {
    throw Error(ErrorCode::kOrderGuard, "parametrix order " + std::to_string(order) + " exceeds " +
                                            std::to_string(kMaxHadamardOrder));
  }
}

cplx sigma_eps(const SeparationPoint& p, double eps) {
  return {p.r * p.r - p.dt * p.dt + eps * eps, 2.0 * eps * p.dt};
}

BesselK01 bessel_k01(cplx z) {
  if (z == cplx(0.0)) throw Error(ErrorCode::kInvalidInput, "K_1 is singular at 0");
  if (z.real() < 0.0 && z.imag() == 0.0) throw Error(ErrorCode::kInvalidInput, "argument on the branch cut");
  if (std::abs(z) <= 2.0) {
    cplx t = 0.25 * z * z, lg = std::log(0.5 * z);
    cplx term0 = 1.0, term1 = 1.0;  // t^k/(k!)^2 and t^k/(k!(k+1)!)
    cplx i0 = 0.0, k0_sum = 0.0, i1_over = 0.0, psi_sum = 0.0;
    double harmonic = 0.0;
    for (int k = 0; k < 80; ++k) {
      if (k > 0) {
        term0 *= t / (static_cast<double>(k) * k);
        term1 *= t / (static_cast<double>(k) * (k + 1));
        harmonic += 1.0 / k;
      }
      i0 += term0;
      k0_sum += harmonic * term0;
      i1_over += term1;
      psi_sum += (digamma_int(k + 1) + digamma_int(k + 2)) * term1;
      if (std::abs(term0) < 1e-18 * std::abs(i0) && std::abs(term1) < 1e-18 * std::abs(i1_over)) break;
    }
    cplx k0 = -(lg + kGamma) * i0 + k0_sum;
    cplx k1 = 1.0 / z + lg * 0.5 * z * i1_over - 0.25 * z * psi_sum;
    return {k0, k1};
  }
  // Steed's method with Temme's normalization (nu = 0).
  cplx b = 2.0 * (1.0 + z), d = 1.0 / b, h = d, delh = d;
  cplx q1 = 0.0, q2 = 1.0;
  double a1 = 0.25;
  cplx q = a1, c = a1;
  double a = -a1;
  cplx s = 1.0 + q * delh;
  bool converged = false;
  for (int i = 1; i < 200000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::kQuadratureFailure, "K_1 continued fraction did not converge");
  h *= a1;
  cplx k0 = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
  return {k0, k0 * (z + 0.5 - h) / z};
}

std::vector<double> eps_ladder(const SeparationPoint& p) {
  require_point(p);
  double sigma = p.r * p.r - p.dt * p.dt;
  double size = p.r * p.r + p.dt * p.dt;
  if (size == 0.0 || std::abs(sigma) <= 1e-12 * size) {
    throw Error(ErrorCode::kOnLightconeSingular,
                "null separation (dt = " + std::to_string(p.dt) + ", r = " + std::to_string(p.r) + ") has no pointwise limit");
  }
  double scale = std::abs(sigma) / (p.r + std::abs(p.dt));
  return {1e-2 * scale, 1e-3 * scale, 1e-4 * scale, 1e-5 * scale};
}

cplx extrapolate_to_zero(const std::vector<double>& xs, const std::vector<cplx>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw Error(ErrorCode::kInvalidInput, "extrapolation needs matching samples");
  std::vector<cplx> p(ys);
  for (std::size_t level = 1; level < xs.size(); ++level)
    for (std::size_t i = 0; i + level < xs.size(); ++i) {
      double xi = xs[i], xj = xs[i + level];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  return p[0];
}

cplx omega2_bessel_at(const SeparationPoint& p, double m, double eps) {
  require_point(p);
  cplx se = sigma_eps(p, eps);
  if (se == cplx(0.0)) throw Error(ErrorCode::kOnLightconeSingular, "sigma_eps vanishes");
  if (m == 0.0) return 1.0 / (kFourPi2 * se);
  cplx z = m * std::sqrt(se);
  return m * m / kFourPi2 * bessel_k01(z).k1 / z;
}

cplx omega2_bessel(const SeparationPoint& p, const KernelParams& params) {
  params.validate(false);
  if (params.eps > 0.0) return omega2_bessel_at(p, params.m, params.eps);
  auto ladder = eps_ladder(p);
  std::vector<cplx> ys;
  for (double e : ladder) ys.push_back(omega2_bessel_at(p, params.m, e));
  return extrapolate_to_zero(ladder, ys);
}

QuadratureResult radial_mode_integral(double r, cplx z, double m, double tol) {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidInput, "radial integral needs r > 0");
  if (!(z.real() > 0.0)) throw Error(ErrorCode::kInvalidInput, "radial integral needs Re z > 0");
  cplx a0 = r / (z * z + r * r);
  if (m == 0.0) return {a0, 0.0, 0};
  double m2 = m * m;
  cplx a1 = 0.5 * m2 * z * std::atan(r / z);
  auto integrand = [&](double k) {
    double e = std::hypot(k, m);
    double delta = m2 / (e + k);
    cplx ez = std::exp(-z * k);
    cplx g = ez * ((k / e) * expm1c(-z * delta) - m2 / (e * (e + k)));
    return std::sin(k * r) * (g + 0.5 * m2 * z * ez / k);
  };
  double panel = std::min(kPi / (r + std::abs(z.imag())), 2.0 / m);
  std::vector<cplx> sums;
  cplx sum = 0.0, last_est = 0.0;
  double scale = std::abs(a0) + std::abs(a1);
  int stable = 0;
  constexpr std::size_t kMaxPanels = 20000, kWindow = 21;
  double err = 0.0;
  for (std::size_t n = 0; n < kMaxPanels; ++n) {
    cplx piece = gauss_panel(integrand, n * panel, (n + 1) * panel);
    sum += piece;
    sums.push_back(sum);
    if (sums.size() > kWindow) sums.erase(sums.begin());
    scale = std::max(scale, std::abs(sum));
    cplx est = sums.size() >= 3 ? wynn_epsilon(sums) : sum;
    err = std::abs(est - last_est);
    last_est = est;
    if (n >= 8 && err <= tol * scale) {
      if (++stable >= 3) return {a0 + est - a1, err, n + 1};
    } else {
      stable = 0;
    }
  }
  throw Error(ErrorCode::kQuadratureFailure, "mode integral did not converge (r = " + std::to_string(r) +
                                                 ", residual " + std::to_string(err / scale) + ")");
}

cplx omega2_fourier_at(const SeparationPoint& p, double m, double eps) {
  require_point(p);
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidInput, "Fourier evaluation needs eps > 0");
  if (!(p.r > 0.0)) throw Error(ErrorCode::kInvalidInput, "Fourier evaluation needs r > 0");
  return radial_mode_integral(p.r, cplx(eps, p.dt), m).value / (kFourPi2 * p.r);
}

cplx omega2_fourier(const SeparationPoint& p, const KernelParams& params) {
  params.validate(false);
  if (params.eps > 0.0) return omega2_fourier_at(p, params.m, params.eps);
  auto ladder = eps_ladder(p);
  std::vector<cplx> ys;
  for (double e : ladder) ys.push_back(omega2_fourier_at(p, params.m, e));
  return extrapolate_to_zero(ladder, ys);
}

double commutator_function(const SeparationPoint& p, double m) {
  if (!(m >= 0.0)) throw Error(ErrorCode::kInvalidInput, "m must be >= 0");
  if (!(p.r > 0.0)) throw Error(ErrorCode::kInvalidInput, "commutator evaluation needs r > 0");
  auto ladder = eps_ladder(p);
  std::vector<cplx> ys;
  for (double e : ladder) {
    cplx plus = radial_mode_integral(p.r, cplx(e, p.dt), m).value;
    cplx minus = radial_mode_integral(p.r, cplx(e, -p.dt), m).value;
    // int (k/E) sin(kr) sin(E dt) exp(-eps E) dk
    cplx sine = (minus - plus) / cplx(0.0, 2.0);
    ys.push_back(-sine.real() / (2.0 * kPi * kPi * p.r));
  }
  return extrapolate_to_zero(ladder, ys).real();
}

double hadamard_v(int k, double m) {
  double v = m * m / (16.0 * kPi * kPi);
  for (int j = 1; j <= k; ++j) v *= 0.25 * m * m / (static_cast<double>(j) * (j + 1));
  return v;
}

cplx hadamard_H(const SeparationPoint& p, const KernelParams& params) {
  params.validate(false);
  require_point(p);
  double lambda = params.length_scale();
  double sigma = p.r * p.r - p.dt * p.dt;
  if (std::abs(sigma) > 4.0 * lambda * lambda) {
    throw Error(ErrorCode::kInvalidInput, "parametrix used outside |sigma| <= 4 lambda^2");
  }
  cplx se = sigma_eps(p, params.eps);
  if (se == cplx(0.0)) throw Error(ErrorCode::kOnLightconeSingular, "sigma_eps vanishes");
  cplx out = 1.0 / (kFourPi2 * se);
  if (params.m == 0.0) return out;
  cplx lg = std::log(se / (lambda * lambda));
  double sk = 1.0;
  for (int k = 0; k <= params.order; ++k, sk *= sigma) out += hadamard_v(k, params.m) * sk * lg;
  return out;
}

cplx remainder_w(const SeparationPoint& p, const KernelParams& params) {
  params.validate(true);
  require_point(p);
  double m = params.m, lambda = params.length_scale();
  double sigma = p.r * p.r - p.dt * p.dt;
  cplx se = sigma_eps(p, params.eps);
  if (std::abs(0.25 * m * m * se) > 4.0) return omega2_bessel_at(p, m, params.eps) - hadamard_H(p, params);
  if (std::abs(sigma) > 4.0 * lambda * lambda) {
    throw Error(ErrorCode::kInvalidInput, "parametrix used outside |sigma| <= 4 lambda^2");
  }
  // omega2 = 1/(4 pi^2 se) + sum_k v_k se^k [log(m^2 se/4) - psi(k+1) - psi(k+2)].
  cplx out = hadamard_v(0, m) * (std::log(0.25 * m * m * lambda * lambda) - digamma_int(1) - digamma_int(2));
  bool at_origin = se == cplx(0.0);
  cplx lg_m = at_origin ? 0.0 : std::log(0.25 * m * m * se);
  cplx lg_l = at_origin ? 0.0 : std::log(se / (lambda * lambda));
  cplx sek = 1.0;
  double sk = 1.0;
  for (int k = 1; k < 80; ++k) {
    sek *= se;
    sk *= sigma;
    double v = hadamard_v(k, m);
    cplx term = v * sek * (lg_m - digamma_int(k + 1) - digamma_int(k + 2));
    if (k <= params.order) term -= v * sk * lg_l;
    out += term;
    if (k > params.order && std::abs(term) < 1e-18 * std::abs(out)) break;
  }
  return out;
}

cplx lambda_shift(const SeparationPoint& p, const KernelParams& params, double lambda_new) {
  params.validate(false);
  if (!(lambda_new > 0.0)) throw Error(ErrorCode::kInvalidInput, "lambda must be > 0");
  double sigma = p.r * p.r - p.dt * p.dt;
  double lg = std::log(lambda_new * lambda_new / (params.length_scale() * params.length_scale()));
  double out = 0.0, sk = 1.0;
  for (int k = 0; k <= params.order; ++k, sk *= sigma) out += hadamard_v(k, params.m) * sk * lg;
  return out;
}

cplx smeared_omega(double t, double r, double m, double s) {
  if (!(s > 0.0) || !(r >= 0.0) || !(m >= 0.0)) throw Error(ErrorCode::kInvalidInput, "need s > 0, r >= 0, m >= 0");
  double k_max = std::sqrt(80.0) / s;
  double pref = (2.0 * kPi * s * s) * (2.0 * kPi * s * s) / kFourPi2;
  auto integrand = [&](double k) {
    double e = std::hypot(k, m);
    double sinc = r * k == 0.0 ? k : std::sin(k * r) / r;
    return (k / e) * sinc * std::exp(cplx(-0.5 * s * s * (e * e + k * k), -e * t));
  };
  auto panels = static_cast<std::size_t>(64 + std::ceil(k_max * (r + std::abs(t)) / kPi) * 2);
  double h = k_max / static_cast<double>(panels);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < panels; ++i) sum += gauss_panel(integrand, i * h, (i + 1) * h);
  return pref * sum;
}

double smeared_derivative_bound(int n, double m, double s) {
  double k_max = std::sqrt(80.0) / s;
  double pref = (2.0 * kPi * s * s) * (2.0 * kPi * s * s) / kFourPi2;
  auto integrand = [&](double k) {
    double e = std::hypot(k, m);
    return k * k / e * std::pow(e, n) * std::exp(-0.5 * s * s * (e * e + k * k));
  };
  double sum = 0.0, h = k_max / 64.0;
  for (int i = 0; i < 64; ++i) sum += gauss_panel(integrand, i * h, (i + 1) * h);
  return pref * sum;
}

double mu_minkowski(const MomentumProfile& f, const MomentumProfile& g, double tail_tol) {
  return profile_overlap(f, g, tail_tol).real();
}

double tau_minkowski(const MomentumProfile& f, const MomentumProfile& g, double tail_tol) {
  return 2.0 * profile_overlap(f, g, tail_tol).imag();
}

MomentumProfile profile_from_cauchy(double dr, const std::vector<double>& psi, const std::vector<double>& pi, double m,
                                    double dk, std::size_t nk) {
  if (psi.size() != pi.size() || psi.size() < 3 || !(dr > 0.0) || !(dk > 0.0) || !(m > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "profile needs matching radial data, dr, dk > 0 and m > 0");
  }
  MomentumProfile out{dk, std::vector<cplx>(nk)};
  double norm = 4.0 * kPi / std::pow(2.0 * kPi, 1.5);
  std::vector<double> a(psi.size()), b(psi.size());
  for (std::size_t j = 0; j < nk; ++j) {
    double k = static_cast<double>(j) * dk;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      double r = static_cast<double>(i) * dr;
      double kernel = k == 0.0 ? r * r : r * std::sin(k * r) / k;
      a[i] = psi[i] * kernel;
      b[i] = pi[i] * kernel;
    }
    double psi_hat = norm * simpson(a, dr), pi_hat = norm * simpson(b, dr);
    double e = std::hypot(k, m);
    out.phi[j] = cplx(std::sqrt(0.5 * e) * psi_hat, pi_hat / std::sqrt(2.0 * e));
  }
  return out;
}

double radial_symplectic(double dr, const std::vector<double>& psi_f, const std::vector<double>& pi_f,
                         const std::vector<double>& psi_g, const std::vector<double>& pi_g) {
  std::size_t n = psi_f.size();
  if (pi_f.size() != n || psi_g.size() != n || pi_g.size() != n) throw Error(ErrorCode::kInvalidInput, "size mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = static_cast<double>(i) * dr;
    y[i] = 4.0 * kPi * r * r * (psi_f[i] * pi_g[i] - psi_g[i] * pi_f[i]);
  }
  return simpson(y, dr);
}

}  // namespace ccrlab::minkowski
