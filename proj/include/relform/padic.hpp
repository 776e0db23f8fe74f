#pragma once

#include <climits>
#include <cstdint>
#include <string>

#include "relform/rational.hpp"

namespace relform {

/// Valuation value standing in for +infinity (valuation of zero).
inline constexpr long kInfValuation = LONG_MAX / 4;

/// The base field F = Q with the q-adic valuation, and E = F(sqrt(eps)).
class LocalField {
 public:
  /// Validates that q is an odd prime and eps is a unit non-square mod q.
  LocalField(long q, long eps);
  /// eps chosen by default: -1 if q = 3 mod 4, otherwise the least positive non-residue.
  explicit LocalField(long q);

  long q() const { return q_; }
  long eps() const { return eps_; }
  static long default_epsilon(long q);

  long v(const Rational& x) const { return x.is_zero() ? kInfValuation : x.valuation(static_cast<unsigned long>(q_)); }
  Rational uniformizer_pow(long e) const { return pow_int(q_, e); }

 private:
  long q_;
  long eps_;
};

/// a + b sqrt(eps). eps travels with the value so products need no context.
class ExtScalar {
 public:
  ExtScalar() = default;
  ExtScalar(Rational a, long eps) : a_(std::move(a)), eps_(eps) {}  // NOLINT
  ExtScalar(Rational a, Rational b, long eps) : a_(std::move(a)), b_(std::move(b)), eps_(eps) {}

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long eps() const { return eps_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_base() const { return b_.is_zero(); }

  ExtScalar& operator+=(const ExtScalar& o) { a_ += o.a_; b_ += o.b_; return *this; }
  ExtScalar& operator-=(const ExtScalar& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  friend ExtScalar operator+(ExtScalar x, const ExtScalar& y) { return x += y; }
  friend ExtScalar operator-(ExtScalar x, const ExtScalar& y) { return x -= y; }
  friend ExtScalar operator*(const ExtScalar& x, const ExtScalar& y);
  friend ExtScalar operator/(const ExtScalar& x, const ExtScalar& y) { return x * y.inverse(); }
  ExtScalar operator-() const { return {-a_, -b_, eps_}; }
  ExtScalar scaled(const Rational& s) const { return {a_ * s, b_ * s, eps_}; }
  friend bool operator==(const ExtScalar& x, const ExtScalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

  ExtScalar conj() const { return {a_, -b_, eps_}; }
  Rational norm() const { return a_ * a_ - Rational(eps_) * b_ * b_; }
  ExtScalar inverse() const;

  std::string str() const;

 private:
  Rational a_{0};
  Rational b_{0};
  long eps_ = -1;
};

/// min(v(a), v(b)); kInfValuation for zero.
long valuation(const LocalField& F, const ExtScalar& x);
Rational galois_norm(const ExtScalar& x);
/// Throws DomainError on zero.
bool is_norm_one(const ExtScalar& x);

/// Representative of x modulo q^e O_F: the unique m/q^k with 0 <= m < q^{e+k} congruent to x.
Rational reduce_mod(const LocalField& F, const Rational& x, long e);
/// Componentwise reduction of a + b sqrt(eps) modulo q^e O_E.
ExtScalar reduce_mod(const LocalField& F, const ExtScalar& x, long e);

}  // namespace relform
