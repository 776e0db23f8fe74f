#include "relform/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "relform/errors.hpp"

namespace relform {

Poly::Poly(Rational constant) {
  if (!constant.is_zero()) c_.push_back(std::move(constant));
}

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const Rational& c, std::size_t exponent) {
  if (c.is_zero()) return Poly();
  std::vector<Rational> v(exponent + 1);
  v[exponent] = c;
  return Poly(std::move(v));
}

Poly Poly::linear_root(const Rational& a) { return Poly(std::vector<Rational>{-a, Rational(1)}); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const Rational& Poly::leading() const {
  if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return c_.back();
}

std::size_t Poly::low_order() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return i;
  return 0;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<mpq_class> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      out[i + j] += a.c_[i].raw() * b.c_[j].raw();
    }
  }
  std::vector<Rational> r;
  r.reserve(out.size());
  for (auto& x : out) r.emplace_back(std::move(x));
  return Poly(std::move(r));
}

Poly Poly::operator-() const { return scaled(Rational(-1)); }

Poly Poly::scaled(const Rational& s) const {
  if (s.is_zero()) return Poly();
  Poly r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

void Poly::divmod(const Poly& d, Poly& quotient, Poly& remainder) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<mpq_class> rem;
  rem.reserve(c_.size());
  for (const auto& x : c_) rem.push_back(x.raw());
  const std::size_t dd = d.c_.size() - 1;
  const mpq_class lead_inv = 1 / d.c_.back().raw();
  std::vector<Rational> quo;
  if (rem.size() > dd) {
    quo.resize(rem.size() - dd);
    for (std::size_t k = rem.size(); k-- > dd;) {
      if (sgn(rem[k]) == 0) continue;
      mpq_class f = rem[k] * lead_inv;
      const std::size_t shift = k - dd;
      for (std::size_t j = 0; j <= dd; ++j) {
        if (d.c_[j].is_zero()) continue;
        rem[shift + j] -= f * d.c_[j].raw();
      }
      quo[shift] = Rational(f);
    }
    rem.resize(dd);
  }
  std::vector<Rational> r;
  for (auto& x : rem) r.emplace_back(std::move(x));
  quotient = Poly(std::move(quo));
  remainder = Poly(std::move(r));
}

Poly Poly::shift_down(std::size_t k) const {
  if (is_zero()) return Poly();
  if (low_order() < k) throw DomainError("shift_down below lowest term");
  return Poly(std::vector<Rational>(c_.begin() + static_cast<long>(k), c_.end()));
}

Poly Poly::shift_up(std::size_t k) const {
  if (is_zero()) return Poly();
  std::vector<Rational> v(k);
  v.insert(v.end(), c_.begin(), c_.end());
  return Poly(std::move(v));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return Poly(std::move(v));
}

Poly Poly::monic() const {
  if (is_zero()) return Poly();
  return scaled(leading().inverse());
}

Poly Poly::reversed() const {
  std::vector<Rational> v(c_.rbegin(), c_.rend());
  return Poly(std::move(v));
}

Poly Poly::taylor_shift(const Rational& a) const {
  // Repeated synthetic division by (t + a) expansion (Horner on coefficient vectors).
  std::vector<mpq_class> v;
  v.reserve(c_.size());
  for (const auto& x : c_) v.push_back(x.raw());
  const std::size_t n = v.size();
  const mpq_class& av = a.raw();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) v[j - 1] += av * v[j];
  std::vector<Rational> r;
  for (auto& x : v) r.emplace_back(std::move(x));
  return Poly(std::move(r));
}

Poly Poly::pow(unsigned exponent) const {
  Poly result(Rational(1));
  Poly base = *this;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

Rational Poly::eval(const Rational& x) const {
  mpq_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x.raw() + c_[i].raw();
  return Rational(acc);
}

std::complex<long double> Poly::eval(std::complex<long double> x) const {
  std::complex<long double> acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].to_long_double();
  return acc;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[i] << ")";
    if (i > 0) os << "*z^" << i;
  }
  return os.str();
}

Poly poly_gcd(Poly a, Poly b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    Poly q, r;
    a.divmod(b, q, r);
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

unsigned root_multiplicity(const Poly& p, const Rational& a) {
  if (p.is_zero()) throw DomainError("root multiplicity in zero polynomial");
  const Poly shifted = p.taylor_shift(a);
  return static_cast<unsigned>(shifted.low_order());
}

namespace {

bool try_rationalize(const Poly& p, double x, Rational& out) {
  static const long bounds[] = {1, 10, 100, 1000, 10000, 100000, 1000000, 10000000, 100000000};
  for (long b : bounds) {
    Rational cand = Rational::approximate(x, b);
    if (p.eval(cand).is_zero()) {
      out = cand;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Rational> rational_roots(const Poly& p_in) {
  if (p_in.is_zero()) throw DomainError("roots of zero polynomial");
  std::vector<Rational> roots;
  Poly p = p_in;
  if (p.low_order() > 0) {
    roots.emplace_back(0);
    p = p.shift_down(p.low_order());
  }
  // Square-free part, then deflate one exact root at a time.
  const Poly g = poly_gcd(p, p.derivative());
  Poly q, r;
  p.divmod(g, q, r);
  p = q.monic();
  while (p.degree() > 0) {
    if (p.degree() == 1) {
      roots.push_back(-p.coeff(0) / p.coeff(1));
      break;
    }
    const long deg = p.degree();
    Eigen::VectorXd coeffs(deg + 1);
    for (long i = 0; i <= deg; ++i) coeffs[i] = p.coeff(static_cast<std::size_t>(i)).to_double();
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    bool found = false;
    for (long i = 0; i < solver.roots().size() && !found; ++i) {
      const auto z = solver.roots()[i];
      if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
      Rational a;
      if (try_rationalize(p, z.real(), a)) {
        roots.push_back(a);
        Poly quo, rem;
        p.divmod(Poly::linear_root(a), quo, rem);
        p = quo;
        found = true;
      }
    }
    if (!found) throw FactorizationError("denominator has a non-rational root: " + p.str());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

LaurentPoly::LaurentPoly(Rational constant) {
  if (!constant.is_zero()) terms_.emplace(0, std::move(constant));
}

LaurentPoly::LaurentPoly(std::map<long, Rational> terms) {
  for (auto& [e, c] : terms)
    if (!c.is_zero()) terms_.emplace(e, std::move(c));
}

LaurentPoly LaurentPoly::monomial(const Rational& c, long exponent) {
  LaurentPoly r;
  if (!c.is_zero()) r.terms_.emplace(exponent, c);
  return r;
}

Rational LaurentPoly::coeff(long exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

long LaurentPoly::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
long LaurentPoly::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += o.scaled(Rational(-1)); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  std::map<long, Rational> out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out[ea + eb] += ca * cb;
  return LaurentPoly(std::move(out));
}

LaurentPoly LaurentPoly::scaled(const Rational& s) const {
  if (s.is_zero()) return LaurentPoly();
  LaurentPoly r = *this;
  for (auto& [e, c] : r.terms_) c *= s;
  return r;
}

LaurentPoly LaurentPoly::tilde() const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
  return r;
}

LaurentPoly LaurentPoly::shifted(long k) const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
  return r;
}

Rational LaurentPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (const auto& [e, c] : terms_) acc += c * x.pow(e);
  return acc;
}

std::complex<long double> LaurentPoly::eval(std::complex<long double> x) const {
  std::complex<long double> acc = 0;
  for (const auto& [e, c] : terms_) acc += c.to_long_double() * std::pow(x, static_cast<int>(e));
  return acc;
}

long LaurentPoly::to_poly(Poly& out) const {
  const long k = std::max(0L, -min_exponent());
  std::vector<Rational> v(terms_.empty() ? 0 : static_cast<std::size_t>(max_exponent() + k + 1));
  for (const auto& [e, c] : terms_) v[static_cast<std::size_t>(e + k)] = c;
  out = Poly(std::move(v));
  return k;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    if (e != 0) os << "*z^" << e;
  }
  return os.str();
}

Rational laurent_constant_coeff(const LaurentPoly& f) { return f.coeff(0); }

}  // namespace relform
