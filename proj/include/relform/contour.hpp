#pragma once

#include <complex>
#include <string>

#include "relform/ratfunc.hpp"

namespace relform {

/// Maximum pole order handled by rf_residue away from the origin.
inline constexpr unsigned kMaxPoleOrder = 4;

/// value * 2πi, kept symbolic.
struct TwoPiIMultiple {
  Rational value;

  TwoPiIMultiple& operator+=(const TwoPiIMultiple& o) { value += o.value; return *this; }
  TwoPiIMultiple& operator-=(const TwoPiIMultiple& o) { value -= o.value; return *this; }
  friend TwoPiIMultiple operator+(TwoPiIMultiple a, const TwoPiIMultiple& b) { return a += b; }
  friend TwoPiIMultiple operator-(TwoPiIMultiple a, const TwoPiIMultiple& b) { return a -= b; }
  friend TwoPiIMultiple operator*(const Rational& s, const TwoPiIMultiple& a) { return {s * a.value}; }
  TwoPiIMultiple operator-() const { return {-value}; }
  friend bool operator==(const TwoPiIMultiple& a, const TwoPiIMultiple& b) { return a.value == b.value; }

  std::complex<double> to_complex() const;
  std::string str() const { return "2πi·(" + value.str() + ")"; }
};

/// Residue of f at a. Zero at regular points. Poles at a != 0 of order above
/// kMaxPoleOrder raise UnsupportedOrderError; the origin has no cap since the
/// residue there is a plain coefficient extraction.
Rational rf_residue(const RatFunc& f, const Rational& a);

/// Integral over |z| = r with r < 1 close to 1: residues strictly inside the unit disc.
TwoPiIMultiple contour_minus(const RatFunc& f);
/// Integral over |z| = r with r > 1 close to 1.
TwoPiIMultiple contour_plus(const RatFunc& f);

/// Trapezoid rule for the integral of f over |z| = r with N nodes.
std::complex<double> numeric_quadrature(const RatFunc& f, double r, int N);

/// Residue estimated by quadrature on a small circle around a.
std::complex<double> numeric_residue(const RatFunc& f, double a, double radius, int N);

}  // namespace relform
