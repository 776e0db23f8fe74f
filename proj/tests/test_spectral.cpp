#include <doctest.h>

#include <cmath>

#include "relform/contour.hpp"
#include "relform/errors.hpp"
#include "relform/spectral.hpp"

using namespace relform;

namespace {

RatFunc Z() { return RatFunc::z(); }
const Rational kOne(1);

// Φ at height r by averaging the Iwasawa character over the vertices of the
// E-tree sphere of radius r: Φ(m_r) = |S_r|^{-1} Σ_{w ∈ S_r} (z/q)^{e(w)}.
RatFunc sphere_average(const LocalField& F, long r) {
  std::map<long, Rational> acc;
  const auto sphere = tree_sphere(F, r, FieldKind::E);
  for (const auto& v : sphere) acc[v.e] += pow_int(F.q(), -v.e);
  return RatFunc(LaurentPoly(acc)).scaled(Rational(1, static_cast<long>(sphere.size())));
}

}  // namespace

TEST_CASE("intertwining constant: shell sums converge to the closed form") {
  const LocalField F(3);
  const RatFunc c = intertwining_constant(F);
  const Rational z(1, 2);
  const double exact = c.eval(z).to_double();
  CHECK(std::abs(intertwining_shell_partial(F, z, 20).to_double() - exact) < 1e-10);
  CHECK_FALSE(c.has_pole_at(Rational(0)));
  CHECK(c.eval(Rational(1, 3)) == kOne);
  CHECK(c.pole_order(kOne) == 1);
}

TEST_CASE("mu has a double zero at 1 and is nonnegative on the circle") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    const RatFunc mu = mu_function(F);
    CHECK(mu.zero_order(kOne) == 2);
    for (int k = 0; k < 64; ++k) {
      const auto z = std::polar(1.0L, 2.0L * 3.14159265358979323846L * (k + 0.5L) / 64);
      const auto v = mu.eval(z);
      CHECK(std::abs(v.imag()) < 1e-12);
      CHECK(v.real() >= -1e-12);
    }
  }
}

TEST_CASE("normalized c scalar") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    const RatFunc c0 = normalized_c_scalar(F);
    CHECK(c0.eval(kOne) == Rational(-1));
    CHECK(c0 * c0.tilde() == RatFunc(1));
    CHECK(normalized_c_scalar(F, Weyl::one) == RatFunc(1));
    CHECK_FALSE(c0.has_pole_in_annulus(1 - 1.0 / (2 * q), 1 + 1.0 / (2 * q)));
  }
}

TEST_CASE("zonal spherical function agrees with sphere averages") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    for (long r = 0; r <= (q == 3 ? 3 : 2); ++r) CHECK(spherical_function(F, r) == sphere_average(F, r));
    CHECK(spherical_function(F, 0).eval(Rational(7, 2)) == kOne);
  }
}

TEST_CASE("Eisenstein cell values") {
  const LocalField F(3);
  const auto eis = eisenstein_cell_values(F, 6);
  const RatFunc c0 = normalized_c_scalar(F);
  CHECK(eis.at(0) == RatFunc(1) + c0);
  for (long r = 0; r <= 6; ++r) {
    CHECK(eis.at(r) == eisenstein_two_term(F, r));
    // z -> 1/z swaps the two coefficients up to c⁰ factors.
    CHECK(eis.at(r).tilde() == c0.tilde() * eis.at(r));
  }
  // Ratio test at consecutive cells extracts c⁰.
  const RatFunc a = eis.at(2).scaled(Rational(9)), b = eis.at(3).scaled(Rational(27));
  const RatFunc z = Z();
  CHECK((a * z - b) / (z.pow(-1) - z.pow(-3)) == c0);
  CHECK(detect_n0(F, 6) == 0);
}

TEST_CASE("truncated period telescopes") {
  const LocalField F(3);
  const auto eis = eisenstein_cell_values(F, 5);
  CHECK(truncated_period(F, 0) == eis.at(0));
  for (long n = 0; n < 5; ++n)
    CHECK(truncated_period(F, n + 1) - truncated_period(F, n) == eis.at(n + 1).scaled(sphere_measure(F, n + 1, FieldKind::F)));
}

TEST_CASE("regularized period relation and pole structure") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    const PeriodFunctions pf = regularized_period_and_C(F, 0);
    const PeriodFunctions pf3 = regularized_period_and_C(F, 3);
    CHECK(pf.P == pf3.P);
    for (long n = 0; n <= 5; ++n)
      CHECK((pf.P - pf.Pn.at(n) - period_tail(pf.C1, pf.Cw, n)).is_zero());
    CHECK(pf.P.pole_order(kOne) == 1);
    CHECK_FALSE(pf.P.has_pole_in_annulus(1 - 1.0 / (2 * q), 1 + 1.0 / (2 * q), &kOne));
    CHECK(pf.C1.eval(kOne) == -pf.Cw.eval(kOne));
    CHECK(rf_residue(pf.P, kOne) == -pf.C1.eval(kOne) + pf.Cw.eval(kOne));
  }
}

TEST_CASE("H-invariance of the regularized period") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    const long eps = F.eps();
    const PeriodFunctions pf = regularized_period_and_C(F, 0);
    const Mat2 x = Mat2::base(q, 0, 0, 1, eps);
    CHECK(translated_regularized_period(F, x, 2) == pf.P);
    CHECK(translated_regularized_period(F, x, 3) == pf.P);
    CHECK(translated_regularized_period(F, Mat2::identity(eps), 1) == pf.P);
    CHECK(translated_regularized_period(F, Mat2::base(1, 1, 1, 4, eps), 3) == pf.P);
    CHECK(translated_regularized_period(F, Mat2::base(1, 0, 0, q * q, eps), 3) == pf.P);
  }
}

TEST_CASE("spherical Fourier transform") {
  const LocalField F(3);
  CHECK(spherical_fourier(F, HeckeFunction::indicator(0)) == RatFunc(1));
  const RatFunc h1 = spherical_fourier(F, HeckeFunction::indicator(1));
  CHECK(h1 == (Z() + Z().tilde()).scaled(Rational(3)));
  CHECK(h1 == spherical_fourier_tree(F, HeckeFunction::indicator(1)));
  const HeckeFunction mix{{{0, Rational(2)}, {1, Rational(-1, 3)}, {2, Rational(5)}}};
  CHECK(spherical_fourier(F, mix) == spherical_fourier_tree(F, mix));
  CHECK(spherical_fourier(F, mix) == spherical_fourier(F, HeckeFunction::indicator(0)).scaled(Rational(2)) +
                                         h1.scaled(Rational(-1, 3)) +
                                         spherical_fourier(F, HeckeFunction::indicator(2)).scaled(Rational(5)));
  const LocalField F5(5);
  const HeckeFunction h2{{{1, Rational(1)}, {2, Rational(1)}}};
  CHECK(spherical_fourier(F5, h2) == spherical_fourier_tree(F5, h2));
}

TEST_CASE("generalized matrix coefficient") {
  const LocalField F(3);
  const PeriodFunctions pf = regularized_period_and_C(F, 0);
  const auto one = HeckeFunction::indicator(0);
  CHECK(generalized_matrix_coefficient(F, pf.C1, pf.C1, one, one) == pf.C1 * pf.C1.tilde());
  CHECK(generalized_matrix_coefficient(F, RatFunc(), pf.C1, one, one).is_zero());
  // Basis independence: spherical line plus one K-orthogonal direction, rotated.
  const RatFunc fhat = spherical_fourier(F, HeckeFunction::indicator(1));
  const std::vector<std::vector<RatFunc>> pi{{fhat, RatFunc()}, {RatFunc(), RatFunc()}};
  const std::vector<RatFunc> xi{pf.Cw, Z()}, xip{pf.C1, RatFunc(7)};
  const std::vector<std::vector<Rational>> I{{kOne, Rational(0)}, {Rational(0), kOne}};
  const std::vector<std::vector<Rational>> Q{{Rational(3, 5), Rational(4, 5)}, {Rational(-4, 5), Rational(3, 5)}};
  const RatFunc base = matrix_coefficient_in_basis({pf.Cw}, {pf.C1}, {{fhat}}, {{kOne}});
  CHECK(matrix_coefficient_in_basis(xi, xip, pi, I) == base);
  CHECK(matrix_coefficient_in_basis(xi, xip, pi, Q) == base);
  CHECK(base == generalized_matrix_coefficient(F, pf.Cw, pf.C1, HeckeFunction::indicator(1), one));
}

TEST_CASE("spectral asymptote for the indicator pair") {
  const LocalField F(3);
  const auto one = HeckeFunction::indicator(0);
  const Rational d = formal_degree_from_slope(F, Rational(8, 5));
  CHECK(d == Rational(9, 10));
  const auto sa = spectral_asymptote(F, one, one, d);
  CHECK(sa.slope == Rational(8, 5));
  CHECK(sa.intercept == Rational(1));
  CHECK(sa.slope == d * sa.m_C1C1_at_1);
  for (long n = 0; n <= 4; ++n) CHECK(spectral_kernel_value(F, one, one, d, n) == Rational(1) + Rational(8, 5) * Rational(n));
  const HeckeFunction two{{{0, Rational(2)}}};
  const auto sa2 = spectral_asymptote(F, two, one, d);
  CHECK(sa2.slope == Rational(2) * sa.slope);
  CHECK(sa2.intercept == Rational(2) * sa.intercept);
}

TEST_CASE("plug-in case gates") {
  SpectralDatumPlugin c1{"case1", false, false, RatFunc(), RatFunc(), RatFunc()};
  CHECK_NOTHROW(admit_plugin(c1));
  CHECK(plugin_truncated_period(c1, 4).is_zero());
  SpectralDatumPlugin bad1{"case1-bad", false, false, RatFunc(1), RatFunc(), RatFunc()};
  CHECK_THROWS_AS(admit_plugin(bad1), PreconditionError);
  SpectralDatumPlugin c2{"case2", false, true, RatFunc(3) / (RatFunc(1) - Z().scaled(Rational(1, 3))), RatFunc(), RatFunc()};
  CHECK_NOTHROW(admit_plugin(c2));
  CHECK(plugin_truncated_period(c2, 5) == *c2.p);
  SpectralDatumPlugin c3{"case3", true, false, RatFunc(), RatFunc(2), RatFunc(2) + Z() - RatFunc(1)};
  CHECK_NOTHROW(admit_plugin(c3));
  SpectralDatumPlugin bad3{"case3-bad", true, false, RatFunc(), RatFunc(2), RatFunc(-2)};
  CHECK_THROWS_AS(admit_plugin(bad3), PreconditionError);
  SpectralDatumPlugin c4{"case4", true, true, RatFunc(-4) / (RatFunc(1) - Z()).scaled(Rational(-1)), RatFunc(2), RatFunc(-2)};
  CHECK_NOTHROW(admit_plugin(c4));
  SpectralDatumPlugin missing{"missing", true, true, std::nullopt, RatFunc(2), RatFunc(-2)};
  CHECK_THROWS_AS(admit_plugin(missing), MissingDataError);
  const LocalField F(3);
  const auto one = HeckeFunction::indicator(0);
  CHECK_THROWS_AS(spectral_asymptote(F, one, one, Rational(9, 10), {missing}), MissingDataError);
}

TEST_CASE("discrete-series limit on a synthetic decaying datum") {
  const LocalField F(3);
  // a_r = 9^{-r}: Σ vol_F(r) a_r = 1 + (4/3) Σ_{r≥1} 3^{-r} = 1 + 2/3.
  std::vector<Rational> cells;
  for (long r = 0; r < 15; ++r) cells.push_back(pow_int(9, -r));
  CHECK(discrete_series_limit_check(F, cells, Rational(5, 3)));
  CHECK_FALSE(discrete_series_limit_check(F, cells, Rational(1)));
}
