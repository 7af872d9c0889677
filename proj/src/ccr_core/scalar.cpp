#include "ccrlab/scalar.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace ccrlab {

std::string_view to_string(ScalarMode mode) {
  return mode == ScalarMode::kExact ? "exact" : "float";
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  if (o.is_zero()) throw Error(ErrorCode::kInvalidInput, "division by exact zero");
  mpq_class den = o.re_ * o.re_ + o.im_ * o.im_;
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / den;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

namespace {

[[noreturn]] void throw_mismatch() {
  throw Error(ErrorCode::kModeMismatch, "cannot combine exact and float scalars");
}

}  // namespace

Scalar Scalar::zero(ScalarMode mode) {
  return mode == ScalarMode::kExact ? Scalar(ComplexRational{}) : Scalar(std::complex<double>{});
}

Scalar Scalar::one(ScalarMode mode) { return from_int(1, mode); }

Scalar Scalar::imag_unit(ScalarMode mode) {
  return mode == ScalarMode::kExact ? Scalar(ComplexRational(0, 1)) : Scalar(std::complex<double>(0.0, 1.0));
}

Scalar Scalar::from_int(long v, ScalarMode mode) {
  return mode == ScalarMode::kExact ? Scalar(ComplexRational(mpq_class(v))) : Scalar(std::complex<double>(double(v)));
}

Scalar Scalar::from_double(double v, ScalarMode mode) {
  if (mode == ScalarMode::kFloat) return Scalar(std::complex<double>(v));
  return Scalar(ComplexRational(mpq_class(v)));
}

bool Scalar::is_zero() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) return q->is_zero();
  return std::get<std::complex<double>>(value_) == std::complex<double>{};
}

const ComplexRational& Scalar::exact_value() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) return *q;
  throw_mismatch();
}

std::complex<double> Scalar::to_complex() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) return q->to_complex();
  return std::get<std::complex<double>>(value_);
}

Scalar Scalar::conj() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) return q->conj();
  return std::conj(std::get<std::complex<double>>(value_));
}

Scalar Scalar::real_part() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) return ComplexRational(q->re());
  return std::complex<double>(std::get<std::complex<double>>(value_).real());
}

Scalar Scalar::imag_part() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) return ComplexRational(q->im());
  return std::complex<double>(std::get<std::complex<double>>(value_).imag());
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (value_.index() != o.value_.index()) throw_mismatch();
  if (auto* q = std::get_if<ComplexRational>(&value_)) {
    *q += std::get<ComplexRational>(o.value_);
  } else {
    std::get<std::complex<double>>(value_) += std::get<std::complex<double>>(o.value_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (value_.index() != o.value_.index()) throw_mismatch();
  if (auto* q = std::get_if<ComplexRational>(&value_)) {
    *q -= std::get<ComplexRational>(o.value_);
  } else {
    std::get<std::complex<double>>(value_) -= std::get<std::complex<double>>(o.value_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (value_.index() != o.value_.index()) throw_mismatch();
  if (auto* q = std::get_if<ComplexRational>(&value_)) {
    *q *= std::get<ComplexRational>(o.value_);
  } else {
    std::get<std::complex<double>>(value_) *= std::get<std::complex<double>>(o.value_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (value_.index() != o.value_.index()) throw_mismatch();
  if (auto* q = std::get_if<ComplexRational>(&value_)) {
    *q /= std::get<ComplexRational>(o.value_);
  } else {
    std::get<std::complex<double>>(value_) /= std::get<std::complex<double>>(o.value_);
  }
  return *this;
}

Scalar operator-(const Scalar& a) {
  if (auto* q = std::get_if<ComplexRational>(&a.value_)) return -*q;
  return -std::get<std::complex<double>>(a.value_);
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.value_.index() != b.value_.index()) return false;
  return a.value_ == b.value_;
}

std::string rational_to_string(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

std::string double_to_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::kParse, "empty rational");
  if (s.front() == '+') s.erase(0, 1);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw Error(ErrorCode::kParse, "bad rational '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

double parse_double(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorCode::kParse, "bad number '" + s + "'");
  return v;
}

// Splits "A+B*i" at the '+' separating real and imaginary parts. A lone real
// number or a lone "B*i" are accepted too.
std::pair<std::string_view, std::string_view> split_complex(std::string_view text) {
  if (text.size() >= 2 && text.substr(text.size() - 2) == "*i") {
    std::string_view body = text.substr(0, text.size() - 2);
    // Find the separator '+' that is not part of an exponent or a leading sign.
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E' &&
          body[k - 1] != '+' && body[k - 1] != '-') {
        if (body[k] == '+') return {body.substr(0, k), body.substr(k + 1)};
        return {body.substr(0, k), body.substr(k)};
      }
    }
    return {std::string_view{}, body};
  }
  return {text, std::string_view{}};
}

}  // namespace

std::string Scalar::to_string() const {
  if (auto* q = std::get_if<ComplexRational>(&value_)) {
    return rational_to_string(q->re()) + "+" + rational_to_string(q->im()) + "*i";
  }
  auto z = std::get<std::complex<double>>(value_);
  return double_to_string(z.real()) + "+" + double_to_string(z.imag()) + "*i";
}

Scalar Scalar::parse(std::string_view text, ScalarMode mode) {
  auto [re_text, im_text] = split_complex(text);
  if (mode == ScalarMode::kExact) {
    mpq_class re = re_text.empty() ? mpq_class(0) : parse_rational(re_text);
    mpq_class im = im_text.empty() ? mpq_class(0) : parse_rational(im_text);
    return ComplexRational(re, im);
  }
  double re = re_text.empty() ? 0.0 : parse_double(re_text);
  double im = im_text.empty() ? 0.0 : parse_double(im_text);
  return std::complex<double>(re, im);
}

}  // namespace ccrlab
