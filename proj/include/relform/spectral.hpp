#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relform/asymptotics.hpp"
#include "relform/group.hpp"
#include "relform/ratfunc.hpp"

namespace relform {

/// Scalars of the unramified principal series on the spherical line.
struct SphericalDatum {
  RatFunc c;    // intertwining constant
  RatFunc mu;   // 1 / (c(z) c(1/z))
  RatFunc c0w;  // normalized C-function scalar for w
  std::map<long, RatFunc> eis;  // normalized Eisenstein values on H-Cartan cells
  long n0 = 0;
};

struct PeriodFunctions {
  RatFunc P;
  RatFunc C1;
  RatFunc Cw;
  std::map<long, RatFunc> Pn;
};

/// Intertwining scalar c(z) on the spherical vector, from the shell decomposition of N ≅ E.
RatFunc intertwining_constant(const LocalField& F);
/// Partial shell sum up to shell J at a real point, normalized like intertwining_constant.
Rational intertwining_shell_partial(const LocalField& F, const Rational& z, long J);

RatFunc mu_function(const LocalField& F);

enum class Weyl { one, w };
/// Scalar by which C⁰(s, δ_z) acts; identically 1 for s = 1.
RatFunc normalized_c_scalar(const LocalField& F, Weyl s = Weyl::w);

/// Zonal spherical function at G-Cartan height r, by a finite sum over K-orbits.
RatFunc spherical_function(const LocalField& F, long r);
/// Normalized Eisenstein values E⁰ on cells 0..max_r.
std::map<long, RatFunc> eisenstein_cell_values(const LocalField& F, long max_r);
/// q^{-r} (z^r + c⁰(w,z) z^{-r})
RatFunc eisenstein_two_term(const LocalField& F, long r);
/// Smallest r0 with the two-term shape exact on [r0, max_r], then doubled.
long detect_n0(const LocalField& F, long max_r);

SphericalDatum spherical_datum(const LocalField& F, long max_r);

/// Σ_{r ≤ n} vol_F(r) E⁰(r)
RatFunc truncated_period(const LocalField& F, long n);
/// z^{n+1}/(1-z) C1 + z^{-(n+1)}/(1-z^{-1}) Cw
RatFunc period_tail(const RatFunc& C1, const RatFunc& Cw, long n);
/// Regularized period and C-functionals, computed at n and n + 3 and asserted equal.
PeriodFunctions regularized_period_and_C(const LocalField& F, long n);

/// ∫*_H E⁰(h x) dh through shifted Cartan sums over bottom-row classes mod ω^L.
RatFunc translated_regularized_period(const LocalField& F, const Mat2& x, long L);

/// Eigenvalue of f on the spherical vector, from the zonal spherical function.
RatFunc spherical_fourier(const LocalField& F, const HeckeFunction& f);
/// Same quantity from a direct sum over the E-tree ball.
RatFunc spherical_fourier_tree(const LocalField& F, const HeckeFunction& f);

/// m_{ξ,ξ'}(f) in the spherical specialization: ξ f̂1 tilde(f̂2) tilde(ξ').
RatFunc generalized_matrix_coefficient(const LocalField& F, const RatFunc& xi, const RatFunc& xi_prime,
                                       const HeckeFunction& f1, const HeckeFunction& f2);

/// Σ_i ξ(π v_i) tilde(ξ'(v_i)) over the orthonormal basis v_i = rows of Q, for a finite
/// model where π acts by the given matrix and ξ, ξ' are given on the standard basis.
RatFunc matrix_coefficient_in_basis(const std::vector<RatFunc>& xi, const std::vector<RatFunc>& xi_prime,
                                    const std::vector<std::vector<RatFunc>>& pi,
                                    const std::vector<std::vector<Rational>>& Q);

/// Asymptotic datum (p, c1, cw) = f̂1 f̂2 (P, C1, Cw), primed side (P, C1, Cw).
AsymptoticDatum spectral_lemma_datum(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2);

struct SpectralAsymptote {
  AsymptoticExpansion lemma;  // expansion of the contour integral
  Rational formal_degree;
  Rational slope;      // (d/2) lemma slope
  Rational intercept;  // (d/2) lemma intercept
  Rational m_C1C1_at_1;  // m_{C(1),C(1)}(f) at z = 1
};

/// Ramified character data supplied from outside.
struct SpectralDatumPlugin {
  std::string label;
  bool trivial_on_Fx = false;
  bool trivial_on_E1 = false;
  std::optional<RatFunc> p, c1, cw;
};

SpectralAsymptote spectral_asymptote(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                     const Rational& formal_degree,
                                     const std::vector<SpectralDatumPlugin>& plugins = {});

/// (d/2) ∫ p_n tilde(p'_n) dz/z, exact.
Rational spectral_kernel_value(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                               const Rational& formal_degree, long n);

/// Formal degree fixed by matching the kernel slope of the pair (1_K, 1_K).
Rational formal_degree_from_slope(const LocalField& F, const Rational& indicator_slope);

/// Case number 1..4 from the restriction flags.
int plugin_case(const SpectralDatumPlugin& p);
/// Throws MissingDataError if incomplete and PreconditionError if the case gate fails.
void admit_plugin(const SpectralDatumPlugin& p);
/// p - tail(n); vanishes identically in case 1.
RatFunc plugin_truncated_period(const SpectralDatumPlugin& p, long n);

/// Partial sums Σ_{r ≤ n} vol_F(r) a_r for square-summable cell data; returns true if
/// |S_∞ - S_n| decreases strictly over n = 0..cells.size()-1 given the exact limit.
bool discrete_series_limit_check(const LocalField& F, const std::vector<Rational>& cells, const Rational& limit);

}  // namespace relform
