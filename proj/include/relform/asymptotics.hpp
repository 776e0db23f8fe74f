#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relform/contour.hpp"
#include "relform/ratfunc.hpp"

namespace relform {

/// Inputs p, c(1,·), c(w,·) on the unprimed and primed side.
struct AsymptoticDatum {
  RatFunc p, p_prime;
  RatFunc c1, cw;
  RatFunc c1_prime, cw_prime;

  /// Exchange the unprimed and primed sides.
  AsymptoticDatum swapped() const { return {p_prime, p, c1_prime, cw_prime, c1, cw}; }
  bool all_zero() const;
};

/// slope*n + intercept, both as multiples of 2πi.
struct AsymptoticExpansion {
  TwoPiIMultiple slope;
  TwoPiIMultiple intercept;

  TwoPiIMultiple at(long n) const { return {slope.value * Rational(n) + intercept.value}; }
};

enum class Side { unprimed, primed };

RatFunc build_pn(const AsymptoticDatum& d, Side side, long n);

struct HypothesisReport {
  bool ok = true;
  /// Set for the all-zero datum, which is accepted for plumbing but lies outside the lemma.
  bool degenerate = false;
  std::vector<std::string> violations;
};

/// eta is the annulus half-width around |z| = 1 (1/(2q) for q = 3 by default).
HypothesisReport check_hypotheses(const AsymptoticDatum& d, const Rational& eta = Rational(1, 6));

/// Throws PreconditionError if the hypotheses fail.
AsymptoticExpansion lemma_expansion(const AsymptoticDatum& d, const Rational& eta = Rational(1, 6));

enum class IntegralRoute { automatic, exact, numeric };

struct TruncatedIntegral {
  /// Present when computed exactly.
  std::optional<TwoPiIMultiple> exact;
  /// Value of the integral as a complex number (always filled).
  std::complex<double> numeric;
  /// "laurent", "residue" or "quadrature".
  std::string route;
};

/// ∫ over |z| = 1 of p_n(z) conj(p'_n(z)) dz/z.
TruncatedIntegral truncated_integral(const AsymptoticDatum& d, long n,
                                     IntegralRoute route = IntegralRoute::automatic,
                                     int quadrature_nodes = 4096);

/// Smallest n1 <= n_max such that the exact integral equals the expansion for all n in [n1, n_max].
/// Returns nullopt if it fails at n_max.
std::optional<long> onset_index(const AsymptoticDatum& d, const AsymptoticExpansion& e, long n_max);

/// Random datum satisfying the hypotheses: each c is a degree <= 3 polynomial
/// divided by (1 - a z) with |a| <= 1/2, normalized so c(1,1) = -c(w,1), and p
/// carries the forced simple pole at 1 plus a regular part.
AsymptoticDatum random_datum(std::uint64_t seed);

struct WorkedExample {
  std::string name;
  AsymptoticDatum datum;
  AsymptoticExpansion expected;
};
/// c ≡ 1 with p = 0; c(w) = z with p = 0; p = 2/(1-z), c(1) = 1, c(w) = -1.
std::vector<WorkedExample> worked_examples();

}  // namespace relform
