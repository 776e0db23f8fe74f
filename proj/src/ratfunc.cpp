#include "relform/ratfunc.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "relform/errors.hpp"

namespace relform {

RatFunc::RatFunc(Rational constant) : num_(std::move(constant)), den_(Rational(1)) {}

RatFunc::RatFunc(const LaurentPoly& p) : den_(Rational(1)) {
  Poly n;
  const long k = p.to_poly(n);
  num_ = std::move(n);
  den_ = Poly::monomial(Rational(1), static_cast<std::size_t>(k));
  normalize();
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw MalformedInputError("rational function with zero denominator");
  normalize();
}

RatFunc RatFunc::monomial(const Rational& c, long exponent) {
  if (exponent >= 0) return RatFunc(Poly::monomial(c, static_cast<std::size_t>(exponent)), Poly(Rational(1)));
  return RatFunc(Poly(c), Poly::monomial(Rational(1), static_cast<std::size_t>(-exponent)));
}

RatFunc RatFunc::one_minus(const Rational& a, long k) {
  return RatFunc(1) - monomial(a, k);
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rational(1));
    return;
  }
  // Cancel powers of z first; the remaining gcd is taken against the
  // z-free denominator, which is usually small.
  const std::size_t zk = std::min(num_.low_order(), den_.low_order());
  if (zk > 0) {
    num_ = num_.shift_down(zk);
    den_ = den_.shift_down(zk);
  }
  const std::size_t dz = den_.low_order();
  const Poly dcore = den_.shift_down(dz);
  if (dcore.degree() > 0) {
    Poly q, r;
    num_.divmod(dcore, q, r);
    const Poly g = poly_gcd(dcore, r);
    if (g.degree() > 0) {
      Poly nq, dq;
      num_.divmod(g, nq, r);
      den_.divmod(g, dq, r);
      num_ = std::move(nq);
      den_ = std::move(dq);
    }
  }
  const Rational lead = den_.leading();
  if (!lead.is_one()) {
    const Rational inv = lead.inverse();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

bool RatFunc::is_laurent() const {
  return den_.degree() == static_cast<long>(den_.low_order());
}

LaurentPoly RatFunc::to_laurent() const {
  if (!is_laurent()) throw DomainError("rational function is not a Laurent polynomial");
  const long k = den_.degree();
  std::map<long, Rational> t;
  for (std::size_t i = 0; i < num_.coeffs().size(); ++i)
    if (!num_.coeffs()[i].is_zero()) t.emplace(static_cast<long>(i) - k, num_.coeffs()[i]);
  return LaurentPoly(std::move(t));
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    // Use the gcd of the denominators to keep degrees down.
    const Poly g = poly_gcd(den_, o.den_);
    Poly a, b, r;
    den_.divmod(g, a, r);
    o.den_.divmod(g, b, r);
    num_ = num_ * b + o.num_ * a;
    den_ = den_ * b;
  }
  normalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) {
  if (o.is_zero()) throw DomainError("division by zero rational function");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::scaled(const Rational& s) const {
  RatFunc r = *this;
  r.num_ = r.num_.scaled(s);
  if (r.num_.is_zero()) r.den_ = Poly(Rational(1));
  return r;
}

RatFunc RatFunc::times_z(long k) const {
  if (k == 0 || is_zero()) return *this;
  RatFunc r = *this;
  if (k > 0) {
    const auto drop = std::min<std::size_t>(static_cast<std::size_t>(k), r.den_.low_order());
    r.den_ = r.den_.shift_down(drop);
    r.num_ = r.num_.shift_up(static_cast<std::size_t>(k) - drop);
  } else {
    const auto drop = std::min<std::size_t>(static_cast<std::size_t>(-k), r.num_.low_order());
    r.num_ = r.num_.shift_down(drop);
    r.den_ = r.den_.shift_up(static_cast<std::size_t>(-k) - drop);
  }
  return r;
}

RatFunc RatFunc::pow(long exponent) const {
  if (exponent < 0) return RatFunc(1) / pow(-exponent);
  RatFunc r(num_.pow(static_cast<unsigned>(exponent)), den_.pow(static_cast<unsigned>(exponent)));
  return r;
}

RatFunc RatFunc::derivative() const {
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc RatFunc::tilde() const {
  // f(1/z) = z^{dd-dn} * rev(num) / rev(den)
  if (is_zero()) return *this;
  const long shift = den_.degree() - num_.degree();
  RatFunc r(num_.reversed(), den_.reversed());
  return r.times_z(shift);
}

Rational RatFunc::eval(const Rational& x) const {
  const Rational d = den_.eval(x);
  if (d.is_zero()) throw DomainError("evaluation at a pole: z = " + x.str());
  return num_.eval(x) / d;
}

std::complex<long double> RatFunc::eval(std::complex<long double> x) const {
  return num_.eval(x) / den_.eval(x);
}

bool RatFunc::has_pole_at(const Rational& a) const { return den_.eval(a).is_zero(); }

unsigned RatFunc::pole_order(const Rational& a) const {
  if (!has_pole_at(a)) return 0;
  return root_multiplicity(den_, a);
}

unsigned RatFunc::zero_order(const Rational& a) const {
  if (num_.is_zero() || has_pole_at(a)) return 0;
  return root_multiplicity(num_, a);
}

std::vector<Rational> RatFunc::poles() const {
  if (den_.degree() <= 0) return {};
  return rational_roots(den_);
}

std::vector<std::complex<double>> RatFunc::numeric_poles() const {
  std::vector<std::complex<double>> out;
  const std::size_t dz = den_.low_order();
  for (std::size_t i = 0; i < dz; ++i) out.emplace_back(0.0, 0.0);
  const Poly core = den_.shift_down(dz);
  const long deg = core.degree();
  if (deg <= 0) return out;
  Eigen::VectorXd coeffs(deg + 1);
  for (long i = 0; i <= deg; ++i) coeffs[i] = core.coeff(static_cast<std::size_t>(i)).to_double();
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(coeffs);
  for (long i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()[i]);
  return out;
}

bool RatFunc::has_pole_in_annulus(double lo, double hi, const Rational* except) const {
  Poly d = den_;
  if (except != nullptr && has_pole_at(*except)) {
    const Poly lin = Poly::linear_root(*except);
    const unsigned m = root_multiplicity(den_, *except);
    for (unsigned i = 0; i < m; ++i) {
      Poly q, r;
      d.divmod(lin, q, r);
      d = std::move(q);
    }
  }
  const RatFunc rest(Poly(Rational(1)), d);
  for (const auto& p : rest.numeric_poles()) {
    const double m = std::abs(p);
    if (m >= lo && m <= hi) return true;
  }
  return false;
}

std::string RatFunc::str() const {
  if (den_.degree() == 0) return num_.str();
  return "[" + num_.str() + "] / [" + den_.str() + "]";
}

RatFunc rf_normalize(const Poly& num, const Poly& den) { return RatFunc(num, den); }

RatFunc rf_normalize(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw MalformedInputError("rational function with zero denominator");
  return RatFunc(num) / RatFunc(den);
}

RatFunc rf_tilde(const RatFunc& f) { return f.tilde(); }

}  // namespace relform
