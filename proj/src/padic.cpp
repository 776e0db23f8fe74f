#include "relform/padic.hpp"

#include <algorithm>

#include "relform/errors.hpp"

namespace relform {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long mod(long a, long m) { return ((a % m) + m) % m; }

bool is_square_mod(long a, long q) {
  const long r = mod(a, q);
  for (long x = 0; x < q; ++x)
    if ((x * x) % q == r) return true;
  return false;
}

}  // namespace

long LocalField::default_epsilon(long q) {
  if (q % 4 == 3) return -1;
  for (long e = 2; e < q; ++e)
    if (!is_square_mod(e, q)) return e;
  throw ConfigError("no non-residue found for q = " + std::to_string(q));
}

LocalField::LocalField(long q, long eps) : q_(q), eps_(eps) {
  if (q < 3 || q % 2 == 0 || !is_prime(q)) throw ConfigError("prime_q must be an odd prime, got " + std::to_string(q));
  if (mod(eps, q) == 0) throw ConfigError("epsilon must be a unit mod q");
  if (is_square_mod(eps, q)) throw ConfigError("epsilon must be a non-square mod q");
}

LocalField::LocalField(long q) : LocalField(q, (q >= 3 && q % 2 == 1) ? default_epsilon(q) : 0) {}

ExtScalar operator*(const ExtScalar& x, const ExtScalar& y) {
  return {x.a_ * y.a_ + Rational(x.eps_) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, x.eps_};
}

ExtScalar ExtScalar::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero in E");
  const Rational n = norm();
  return {a_ / n, -b_ / n, eps_};
}

std::string ExtScalar::str() const {
  if (b_.is_zero()) return a_.str();
  return "(" + a_.str() + " + " + b_.str() + "√" + std::to_string(eps_) + ")";
}

long valuation(const LocalField& F, const ExtScalar& x) { return std::min(F.v(x.a()), F.v(x.b())); }

Rational galois_norm(const ExtScalar& x) { return x.norm(); }

bool is_norm_one(const ExtScalar& x) {
  if (x.is_zero()) throw DomainError("norm-one test on zero");
  return x.norm().is_one();
}

Rational reduce_mod(const LocalField& F, const Rational& x, long e) {
  if (x.is_zero() || F.v(x) >= e) return Rational(0);
  const long vx = F.v(x);
  const long k = std::max(0L, -vx);
  const mpz_class qk = pow_int(F.q(), k).numerator();
  const Rational scaled = x * Rational(qk, mpz_class(1));  // now a q-integral rational
  mpz_class modulus;
  mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(F.q()), static_cast<unsigned long>(e + k));
  mpz_class dinv;
  const mpz_class den = scaled.denominator();
  if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw InternalConsistencyError("denominator not invertible in reduce_mod");
  mpz_class m = (scaled.numerator() * dinv) % modulus;
  if (m < 0) m += modulus;
  return Rational(m, qk);
}

ExtScalar reduce_mod(const LocalField& F, const ExtScalar& x, long e) {
  return {reduce_mod(F, x.a(), e), reduce_mod(F, x.b(), e), x.eps()};
}

}  // namespace relform
