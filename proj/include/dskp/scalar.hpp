#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dskp/config.hpp"

namespace dskp {

// Exact scalar: element of Q(i) stored as a pair of reduced rationals.
// mpq_class keeps gcd(num,den)=1 and den>0 after canonicalize().
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT(runtime/explicit)
  GaussianRational(const mpq_class& re, const mpq_class& im) : re_(re), im_(im) {
    re_.canonicalize();
    im_.canonicalize();
  }
  static GaussianRational from_fraction(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return GaussianRational(q, 0);
  }
  static GaussianRational i() { return GaussianRational(0, 1); }

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  GaussianRational operator-() const { return GaussianRational(-re_, -im_); }
  GaussianRational conj() const { return GaussianRational(re_, -im_); }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return GaussianRational(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return GaussianRational(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return GaussianRational(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    mpq_class n = b.re_ * b.re_ + b.im_ * b.im_;
    if (n == 0) throw std::domain_error("GaussianRational: division by zero");
    return GaussianRational((a.re_ * b.re_ + a.im_ * b.im_) / n,
                            (a.im_ * b.re_ - a.re_ * b.im_) / n);
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  // Square root inside Q(i), when it exists.
  std::optional<GaussianRational> sqrt() const {
    if (im_ == 0) {
      if (re_ >= 0) {
        auto r = rational_sqrt(re_);
        if (!r) return std::nullopt;
        return GaussianRational(*r, 0);
      }
      auto r = rational_sqrt(mpq_class(-re_));
      if (!r) return std::nullopt;
      return GaussianRational(0, *r);
    }
    // sqrt(x+iy) = u+iv with u^2 = (x+r)/2, v = y/(2u), r = |x+iy|.
    auto r = rational_sqrt(re_ * re_ + im_ * im_);
    if (!r) return std::nullopt;
    auto u = rational_sqrt(mpq_class((re_ + *r) / 2));
    if (!u || *u == 0) return std::nullopt;
    return GaussianRational(*u, mpq_class(im_ / (2 * *u)));
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  std::string str() const {
    std::ostringstream os;
    os << re_.get_num().get_str() << "/" << re_.get_den().get_str() << "+"
       << im_.get_num().get_str() << "/" << im_.get_den().get_str() << "*i";
    return os.str();
  }

  static std::optional<GaussianRational> parse(const std::string& s) {
    // Format "a/b+c/d*i", signs attached to numerators.
    auto star = s.find("*i");
    if (star == std::string::npos || star + 2 != s.size()) return std::nullopt;
    auto plus = s.rfind('+', star);
    if (plus == std::string::npos || plus == 0) return std::nullopt;
    auto part = [](const std::string& t) -> std::optional<mpq_class> {
      auto slash = t.find('/');
      if (slash == std::string::npos) return std::nullopt;
      try {
        mpq_class q(mpz_class(t.substr(0, slash)), mpz_class(t.substr(slash + 1)));
        if (q.get_den() == 0) return std::nullopt;
        q.canonicalize();
        return q;
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    };
    auto re = part(s.substr(0, plus));
    auto im = part(s.substr(plus + 1, star - plus - 1));
    if (!re || !im) return std::nullopt;
    return GaussianRational(*re, *im);
  }

  static std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(rn, rd);
  }

 private:
  mpq_class re_, im_;
};

// Floating-point scalar: complex double with tolerance-based equality.
class FloatComplex {
 public:
  FloatComplex() : v_(0.0, 0.0) {}
  FloatComplex(long v) : v_(static_cast<double>(v), 0.0) {}  // NOLINT
  FloatComplex(double re, double im) : v_(re, im) {}
  explicit FloatComplex(std::complex<double> v) : v_(v) {}
  static FloatComplex from_fraction(long num, long den) {
    return FloatComplex(static_cast<double>(num) / static_cast<double>(den), 0.0);
  }
  static FloatComplex i() { return FloatComplex(0.0, 1.0); }

  std::complex<double> value() const { return v_; }
  double real() const { return v_.real(); }
  double imag() const { return v_.imag(); }

  bool is_zero() const { return std::abs(v_) <= float_tolerance(); }
  bool is_real() const { return std::abs(v_.imag()) <= float_tolerance() * std::max(1.0, std::abs(v_)); }

  FloatComplex operator-() const { return FloatComplex(-v_); }
  FloatComplex conj() const { return FloatComplex(std::conj(v_)); }

  friend FloatComplex operator+(const FloatComplex& a, const FloatComplex& b) { return FloatComplex(a.v_ + b.v_); }
  friend FloatComplex operator-(const FloatComplex& a, const FloatComplex& b) { return FloatComplex(a.v_ - b.v_); }
  friend FloatComplex operator*(const FloatComplex& a, const FloatComplex& b) { return FloatComplex(a.v_ * b.v_); }
  friend FloatComplex operator/(const FloatComplex& a, const FloatComplex& b) {
    if (b.is_zero()) throw std::domain_error("FloatComplex: division by zero");
    return FloatComplex(a.v_ / b.v_);
  }
  FloatComplex& operator+=(const FloatComplex& b) { return *this = *this + b; }
  FloatComplex& operator-=(const FloatComplex& b) { return *this = *this - b; }
  FloatComplex& operator*=(const FloatComplex& b) { return *this = *this * b; }
  FloatComplex& operator/=(const FloatComplex& b) { return *this = *this / b; }

  friend bool operator==(const FloatComplex& a, const FloatComplex& b) {
    double scale = std::max({1.0, std::abs(a.v_), std::abs(b.v_)});
    return std::abs(a.v_ - b.v_) <= float_tolerance() * scale;
  }
  friend bool operator!=(const FloatComplex& a, const FloatComplex& b) { return !(a == b); }

  std::optional<FloatComplex> sqrt() const { return FloatComplex(std::sqrt(v_)); }

  std::complex<double> to_complex() const { return v_; }

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << v_.real();
    if (v_.imag() >= 0 || std::isnan(v_.imag())) os << "+";
    os << v_.imag() << "i";
    return os.str();
  }

  static std::optional<FloatComplex> parse(const std::string& s) {
    if (s.empty() || s.back() != 'i') return std::nullopt;
    std::string body = s.substr(0, s.size() - 1);
    // Split at the last '+' or '-' that is not part of an exponent.
    for (std::size_t pos = body.size(); pos-- > 1;) {
      char c = body[pos];
      if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
        try {
          double re = std::stod(body.substr(0, pos));
          double im = std::stod(body.substr(pos));
          return FloatComplex(re, im);
        } catch (const std::exception&) {
          return std::nullopt;
        }
      }
    }
    return std::nullopt;
  }

 private:
  std::complex<double> v_;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
};

template <>
struct ScalarTraits<FloatComplex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
};

template <class S>
concept ScalarField = requires(const S a, const S b) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { -a } -> std::convertible_to<S>;
  { a.conj() } -> std::convertible_to<S>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a == b } -> std::convertible_to<bool>;
  { a.str() } -> std::convertible_to<std::string>;
  { a.to_complex() } -> std::convertible_to<std::complex<double>>;
};

// Lossy conversion from the exact backend, used to replay exact fixtures in float.
inline FloatComplex to_float(const GaussianRational& v) { return FloatComplex(v.to_complex()); }
inline FloatComplex to_float(const FloatComplex& v) { return v; }

}  // namespace dskp
