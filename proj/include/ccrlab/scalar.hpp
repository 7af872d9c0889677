#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "ccrlab/error.hpp"

namespace ccrlab {

enum class ScalarMode { kExact, kFloat };

std::string_view to_string(ScalarMode mode);

/// Complex number with arbitrary-precision rational parts. Arithmetic is closed
/// and never rounds.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  ComplexRational conj() const { return {re_, -im_}; }

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// A coefficient that is either exact (complex rational) or binary64 complex.
/// Mixing the two modes in one operation raises ErrorCode::kModeMismatch.
class Scalar {
 public:
  Scalar() : value_(ComplexRational{}) {}
  Scalar(ComplexRational v) : value_(std::move(v)) {}
  Scalar(std::complex<double> v) : value_(v) {}

  static Scalar exact(const mpq_class& re, const mpq_class& im = 0) { return ComplexRational(re, im); }
  static Scalar floating(double re, double im = 0.0) { return std::complex<double>(re, im); }
  static Scalar zero(ScalarMode mode);
  static Scalar one(ScalarMode mode);
  static Scalar imag_unit(ScalarMode mode);
  /// Converts an integer (or, in float mode, a double) into the given mode.
  static Scalar from_int(long v, ScalarMode mode);
  static Scalar from_double(double v, ScalarMode mode);

  ScalarMode mode() const { return value_.index() == 0 ? ScalarMode::kExact : ScalarMode::kFloat; }
  bool is_exact() const { return mode() == ScalarMode::kExact; }
  bool is_zero() const;

  const ComplexRational& exact_value() const;
  std::complex<double> to_complex() const;
  double real_double() const { return to_complex().real(); }

  Scalar conj() const;
  Scalar real_part() const;
  Scalar imag_part() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a);

  /// Exact equality. Float values compare bitwise-equal; use near() for tolerances.
  friend bool operator==(const Scalar& a, const Scalar& b);
  bool near(const Scalar& o, double tol) const { return std::abs(to_complex() - o.to_complex()) <= tol; }

  /// Canonical text: exact as `p/q+r/s*i`, float as `re+im*i` with 17 significant digits.
  /// parse() also accepts a lone real part or a lone `b*i`.
  std::string to_string() const;
  static Scalar parse(std::string_view text, ScalarMode mode);

 private:
  std::variant<ComplexRational, std::complex<double>> value_;
};

std::string rational_to_string(const mpq_class& q);

}  // namespace ccrlab
