#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "relform/rational.hpp"

namespace relform {

/// Dense polynomial in z with nonnegative exponents. coeffs()[i] multiplies z^i.
class Poly {
 public:
  Poly() = default;
  Poly(Rational constant);  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Rational> coeffs);

  static Poly monomial(const Rational& c, std::size_t exponent);
  static Poly z() { return monomial(Rational(1), 1); }
  /// (z - a)
  static Poly linear_root(const Rational& a);

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const Rational& leading() const;
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  /// Exponent of the lowest nonzero term; 0 for the zero polynomial.
  std::size_t low_order() const;
  bool is_constant() const { return c_.size() <= 1; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(const Rational& s) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division: *this = q*d + r with deg r < deg d.
  void divmod(const Poly& d, Poly& quotient, Poly& remainder) const;
  Poly shift_down(std::size_t k) const;  // divide by z^k; requires low_order() >= k
  Poly shift_up(std::size_t k) const;    // multiply by z^k
  Poly derivative() const;
  Poly monic() const;
  /// z^deg * p(1/z)
  Poly reversed() const;
  /// Coefficients of p(a + t) as a polynomial in t.
  Poly taylor_shift(const Rational& a) const;
  Poly pow(unsigned exponent) const;

  Rational eval(const Rational& x) const;
  std::complex<long double> eval(std::complex<long double> x) const;

  std::string str() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
Poly poly_gcd(Poly a, Poly b);

/// Distinct rational roots of p (nonzero polynomial), excluding multiplicity.
/// Throws FactorizationError if some root is not rational.
std::vector<Rational> rational_roots(const Poly& p);

/// Multiplicity of a as a root of p.
unsigned root_multiplicity(const Poly& p, const Rational& a);

/// Finite-support Laurent polynomial; no zero coefficients are stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(Rational constant);  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(std::map<long, Rational> terms);

  static LaurentPoly monomial(const Rational& c, long exponent);

  const std::map<long, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coeff(long exponent) const;
  long min_exponent() const;
  long max_exponent() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly scaled(const Rational& s) const;
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  /// z -> 1/z
  LaurentPoly tilde() const;
  LaurentPoly shifted(long k) const;
  Rational eval(const Rational& x) const;
  std::complex<long double> eval(std::complex<long double> x) const;

  /// Split as z^{-k} * poly with poly having nonnegative exponents; returns k >= 0.
  long to_poly(Poly& out) const;

  std::string str() const;

 private:
  std::map<long, Rational> terms_;
};

/// Coefficient of z^0.
Rational laurent_constant_coeff(const LaurentPoly& f);

}  // namespace relform
