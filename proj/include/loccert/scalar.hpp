#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <complex>
#include <string>

#include "loccert/errors.hpp"

namespace loccert {

/// Arbitrary-precision rational. The GMP backend keeps values canonical
/// (lowest terms, positive denominator) after every operation.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

enum class ScalarMode { Exact, Float };

inline const char* to_string(ScalarMode m) {
  return m == ScalarMode::Exact ? "exact" : "float";
}

constexpr double kDefaultTolerance = 1e-9;

/// Tolerances used by the float backend. The exact backend ignores them.
struct Tolerances {
  double hermitian = kDefaultTolerance;        // entry-wise Hermiticity slack
  double proportionality = kDefaultTolerance;  // ray dedup, normalized compare
  double psd = kDefaultTolerance;              // smallest-eigenvalue slack
  double completeness = kDefaultTolerance;     // POVM resolution-of-identity slack

  static Tolerances uniform(double t) { return Tolerances{t, t, t, t}; }
};

/// Complex number over exact rationals.
struct ExactComplex {
  Rational re;
  Rational im;

  ExactComplex() = default;
  ExactComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(long r, long i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  ExactComplex conj() const { return {re, -im}; }

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ExactComplex operator*(const Rational& q, const ExactComplex& a) {
    return {q * a.re, q * a.im};
  }
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw ValidationError("complex division by zero");
    ExactComplex num = a * b.conj();
    return {num.re / n, num.im / n};
  }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }

  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
};

using FloatComplex = std::complex<double>;

/// A single value in either backend, used at API boundaries (matrix entry
/// access, proportionality factors).
class Scalar {
 public:
  static Scalar exact(ExactComplex v) {
    Scalar s;
    s.mode_ = ScalarMode::Exact;
    s.exact_ = std::move(v);
    return s;
  }
  static Scalar floating(FloatComplex v) {
    Scalar s;
    s.mode_ = ScalarMode::Float;
    s.float_ = v;
    return s;
  }

  ScalarMode mode() const { return mode_; }
  const ExactComplex& exact_value() const {
    if (mode_ != ScalarMode::Exact) throw ModeMismatchError("scalar is not exact");
    return exact_;
  }
  FloatComplex float_value() const {
    if (mode_ != ScalarMode::Float) throw ModeMismatchError("scalar is not float");
    return float_;
  }

  /// Real part as a double regardless of backend (convenience for reports).
  double real_approx() const {
    return mode_ == ScalarMode::Exact ? exact_.re.convert_to<double>() : float_.real();
  }

 private:
  ScalarMode mode_ = ScalarMode::Exact;
  ExactComplex exact_;
  FloatComplex float_{0.0, 0.0};
};

/// Parses "p", "-p" or "p/q" into a canonical rational.
/// Throws ParseError on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical textual form: "p" or "p/q" with q > 1.
std::string rational_to_string(const Rational& q);

/// Smallest integer not less than q.
BigInt ceil_rational(const Rational& q);

}  // namespace loccert
