#include "relform/contour.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "relform/errors.hpp"

namespace relform {

std::complex<double> TwoPiIMultiple::to_complex() const {
  return {0.0, 2.0 * std::numbers::pi * value.to_double()};
}

namespace {

// Coefficient of t^k in the power series a(t)/b(t), b(0) != 0.
Rational series_quotient_coeff(const Poly& a, const Poly& b, std::size_t k) {
  std::vector<Rational> s(k + 1);
  const Rational b0inv = b.coeff(0).inverse();
  for (std::size_t i = 0; i <= k; ++i) {
    Rational acc = a.coeff(i);
    for (std::size_t j = 1; j <= i && j < b.coeffs().size(); ++j) acc -= b.coeffs()[j] * s[i - j];
    s[i] = acc * b0inv;
  }
  return s[k];
}

}  // namespace

Rational rf_residue(const RatFunc& f, const Rational& a) {
  if (f.is_zero()) return Rational(0);
  const unsigned m = f.pole_order(a);
  if (m == 0) return Rational(0);
  if (!a.is_zero() && m > kMaxPoleOrder)
    throw UnsupportedOrderError("pole of order " + std::to_string(m) + " at " + a.str());
  // f = N / ((z-a)^m G); residue = [t^{m-1}] N(a+t)/G(a+t).
  Poly g;
  if (a.is_zero()) {
    g = f.den().shift_down(m);
  } else {
    Poly rest = f.den();
    const Poly lin = Poly::linear_root(a);
    for (unsigned i = 0; i < m; ++i) {
      Poly q, r;
      rest.divmod(lin, q, r);
      rest = std::move(q);
    }
    g = rest;
  }
  const Poly ns = a.is_zero() ? f.num() : f.num().taylor_shift(a);
  const Poly gs = a.is_zero() ? g : g.taylor_shift(a);
  return series_quotient_coeff(ns, gs, m - 1);
}

TwoPiIMultiple contour_minus(const RatFunc& f) {
  if (f.is_zero()) return {Rational(0)};
  Rational total(0);
  for (const Rational& a : f.poles()) {
    const Rational mag = a.abs();
    if (mag == Rational(1)) {
      if (a.is_one()) continue;
      throw DomainError("pole on the unit circle at " + a.str());
    }
    if (mag < Rational(1)) total += rf_residue(f, a);
  }
  return {total};
}

TwoPiIMultiple contour_plus(const RatFunc& f) {
  return contour_minus(f) + TwoPiIMultiple{rf_residue(f, Rational(1))};
}

std::complex<double> numeric_quadrature(const RatFunc& f, double r, int N) {
  if (N <= 0 || r <= 0) throw PreconditionError("quadrature needs N > 0 and r > 0");
  // Reject contours passing too close to a pole.
  const Poly& d = f.den();
  const std::size_t dz = d.low_order();
  if (dz > 0 && r < 1e-300) throw ConditioningError("contour at the origin");
  const Poly core = d.shift_down(dz);
  if (core.degree() > 0) {
    const long deg = core.degree();
    Eigen::VectorXd coeffs(deg + 1);
    for (long i = 0; i <= deg; ++i) coeffs[i] = core.coeff(static_cast<std::size_t>(i)).to_double();
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    for (long i = 0; i < solver.roots().size(); ++i)
      if (std::abs(std::abs(solver.roots()[i]) - r) < r * 1e-6)
        throw ConditioningError("pole too close to the contour |z| = " + std::to_string(r));
  }
  using cld = std::complex<long double>;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  // Convert coefficients once; exact rationals get large for deep truncations.
  auto to_ld = [](const Poly& p) {
    std::vector<long double> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.push_back(x.to_long_double());
    return c;
  };
  const std::vector<long double> nc = to_ld(f.num()), dc = to_ld(f.den());
  auto horner = [](const std::vector<long double>& c, cld x) {
    cld acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  cld acc = 0;
  for (int k = 0; k < N; ++k) {
    const long double theta = two_pi * k / N;
    const cld zk = std::polar(static_cast<long double>(r), theta);
    acc += horner(nc, zk) / horner(dc, zk) * cld(0, 1) * zk;
  }
  acc *= two_pi / N;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::complex<double> numeric_residue(const RatFunc& f, double a, double radius, int N) {
  // Integrate g(w) = f(a + w) over |w| = radius.
  using cld = std::complex<long double>;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  cld acc = 0;
  for (int k = 0; k < N; ++k) {
    const cld w = std::polar(static_cast<long double>(radius), two_pi * k / N);
    acc += f.eval(cld(a) + w) * w;
  }
  acc /= static_cast<long double>(N);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace relform
