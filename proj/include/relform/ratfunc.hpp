#pragma once

#include <complex>
#include <string>
#include <vector>

#include "relform/poly.hpp"
#include "relform/rational.hpp"

namespace relform {

/// Exact rational function num/den in z. Always reduced, with monic denominator.
/// Negative powers of z live in the denominator as a z^k factor.
class RatFunc {
 public:
  RatFunc() : den_(Rational(1)) {}
  RatFunc(Rational constant);  // NOLINT(google-explicit-constructor)
  RatFunc(long constant) : RatFunc(Rational(constant)) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const LaurentPoly& p);  // NOLINT(google-explicit-constructor)
  RatFunc(Poly num, Poly den);

  static RatFunc z() { return monomial(Rational(1), 1); }
  static RatFunc monomial(const Rational& c, long exponent);
  /// 1 - a z^k
  static RatFunc one_minus(const Rational& a, long k = 1);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_laurent() const;
  /// Requires is_laurent().
  LaurentPoly to_laurent() const;

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  RatFunc operator-() const;
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc scaled(const Rational& s) const;
  /// Multiply by z^k (k may be negative).
  RatFunc times_z(long k) const;
  RatFunc pow(long exponent) const;
  RatFunc derivative() const;
  /// f(1/z)
  RatFunc tilde() const;

  /// Exact value at a non-pole.
  Rational eval(const Rational& x) const;
  std::complex<long double> eval(std::complex<long double> x) const;
  bool has_pole_at(const Rational& a) const;
  /// Order of the pole at a (0 if regular).
  unsigned pole_order(const Rational& a) const;
  /// Order of vanishing at a (0 if nonzero or a pole).
  unsigned zero_order(const Rational& a) const;
  /// Distinct pole locations; throws FactorizationError if not all rational.
  std::vector<Rational> poles() const;
  /// Pole locations computed numerically (with multiplicity); never throws on irrational roots.
  std::vector<std::complex<double>> numeric_poles() const;
  /// True if some pole other than `except` (if given) has modulus in [lo, hi].
  bool has_pole_in_annulus(double lo, double hi, const Rational* except = nullptr) const;

  std::string str() const;

 private:
  void normalize();
  Poly num_;
  Poly den_;
};

/// Canonical reduced form of num/den. Throws MalformedInputError on a zero denominator.
RatFunc rf_normalize(const Poly& num, const Poly& den);
RatFunc rf_normalize(const LaurentPoly& num, const LaurentPoly& den);
RatFunc rf_tilde(const RatFunc& f);

}  // namespace relform
