#include "relform/rational.hpp"

#include <cmath>
#include <ostream>

#include "relform/errors.hpp"

namespace relform {

Rational::Rational(long num, long den) {
  if (den == 0) throw MalformedInputError("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw MalformedInputError("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_class(s), mpz_class(1));
    return Rational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw MalformedInputError("cannot parse rational '" + s + "'");
  }
}

long double Rational::to_long_double() const {
  // Split to keep precision for large numerators and denominators.
  const mpz_class num = value_.get_num();
  const mpz_class den = value_.get_den();
  long nexp = 0;
  long dexp = 0;
  const double nm = mpz_get_d_2exp(&nexp, num.get_mpz_t());
  const double dm = mpz_get_d_2exp(&dexp, den.get_mpz_t());
  return std::ldexp(static_cast<long double>(nm) / dm, static_cast<int>(nexp - dexp));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero rational");
  value_ /= o.value_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero rational");
  return Rational(mpq_class(1) / value_);
}

Rational Rational::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

long Rational::valuation(unsigned long p) const {
  if (is_zero()) throw DomainError("valuation of zero");
  mpz_class rest;
  mpz_class prime(p);
  const long vn = static_cast<long>(
      mpz_remove(rest.get_mpz_t(), value_.get_num_mpz_t(), prime.get_mpz_t()));
  const long vd = static_cast<long>(
      mpz_remove(rest.get_mpz_t(), value_.get_den_mpz_t(), prime.get_mpz_t()));
  return vn - vd;
}

Rational Rational::approximate(double x, long max_den) {
  // Continued-fraction convergents, stopping before the denominator bound.
  if (!std::isfinite(x)) throw DomainError("cannot approximate non-finite value");
  const bool neg = x < 0;
  double rest = std::fabs(x);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    const mpz_class ai(a);
    const mpz_class p2 = ai * p1 + p0;
    const mpz_class q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  return neg ? -r : r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace relform
