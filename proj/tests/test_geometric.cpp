#include <doctest.h>

#include <random>

#include "relform/errors.hpp"
#include "relform/geometric.hpp"
#include "relform/spectral.hpp"

using namespace relform;

namespace {

const HeckeFunction kOneK = HeckeFunction::indicator(0);

ExtScalar random_norm_one(std::mt19937_64& rng, long eps) {
  std::uniform_int_distribution<long> d(-30, 30);
  for (;;) {
    const ExtScalar zeta(Rational(d(rng)), Rational(d(rng)), eps);
    if (zeta.is_zero()) continue;
    const ExtScalar u = zeta / zeta.conj();
    if (u.b().is_zero()) continue;  // ±1
    return u;
  }
}

Mat2 diag_u(const ExtScalar& u) {
  return Mat2::of(u, ExtScalar(Rational(0), u.eps()), ExtScalar(Rational(0), u.eps()), ExtScalar(Rational(1), u.eps()));
}

Mat2 D(const LocalField& F, long a) { return Mat2::base(F.uniformizer_pow(a), 0, 0, 1, F.eps()); }

}  // namespace

TEST_CASE("delta_sigma on the split torus") {
  const LocalField F(3);
  CHECK(delta_sigma(F, Mat2::identity(F.eps())) == Rational(0));
  std::mt19937_64 rng(5);
  const Mat2 w = Mat2::base(0, 1, 1, 0, F.eps());
  for (int i = 0; i < 50; ++i) {
    const ExtScalar u = random_norm_one(rng, F.eps());
    const Mat2 g = diag_u(u);
    const Rational d = delta_sigma(F, g);
    CHECK(d == delta_sigma_closed_form(u));
    CHECK(delta_sigma(F, w * g * w) == d);
    CHECK(delta_sigma(F, D(F, 2) * g * D(F, -2)) == d);
  }
  CHECK_THROWS_AS(delta_sigma(F, diag_u(random_norm_one(rng, F.eps())) * Mat2::base(1, 1, 0, 1, F.eps())),
                  PreconditionError);
}

TEST_CASE("delta_sigma on the anisotropic torus") {
  const LocalField F(5);
  const Mat2 c = anisotropic_conjugator(F);
  for (long sn : {2L, 3L, 7L, -4L}) {
    const Rational s(sn, 5);
    const Mat2 g = c * Mat2::base(s, 0, 0, 1, F.eps()) * c.inverse();
    const Rational one(1);
    CHECK(delta_sigma(F, g, c) == (one - s.pow(-2)).pow(2) * (one - s.pow(2)).pow(2));
  }
}

TEST_CASE("M_σ sampler") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    for (long k : {1L, 2L}) {
      const auto classes = norm_one_classes(F, k);
      long expect = q + 1;
      for (long i = 1; i < k; ++i) expect *= q;
      CHECK(static_cast<long>(classes.size()) == expect);
      for (const auto& u : classes) CHECK(is_norm_one(u));
      CHECK(sample_M_sigma(F, k).size() == classes.size() - 2);
    }
  }
}

TEST_CASE("orbital integrals on M_σ") {
  const LocalField F(3);
  const Mat2 one = Mat2::identity(F.eps());
  const HeckeFunction t1 = HeckeFunction::indicator(1);
  const HeckeFunction mix{{{0, Rational(2)}, {1, Rational(-1, 3)}}};
  for (const auto& pt : sample_M_sigma(F, 2)) {
    for (const auto& f : {kOneK, t1, mix}) {
      const long R = orbital_radius(F, f, TorusKind::split_M, one, pt.gamma);
      const auto r = orbital_integral(F, f, TorusKind::split_M, one, pt.gamma, R);
      CHECK(r.stable);
      // The normalized orbital integral of a spherical function is its transform at z = 1.
      CHECK(r.value == spherical_fourier(F, f).eval(Rational(1)));
    }
    CHECK(orbital_integral(F, HeckeFunction{}, TorusKind::split_M, one, pt.gamma, 2).value.is_zero());
    const auto a = orbital_integral(F, kOneK, TorusKind::split_M, one, pt.gamma, 3);
    const auto b = orbital_integral(F, t1, TorusKind::split_M, one, pt.gamma, 3);
    const auto ab = orbital_integral(F, mix, TorusKind::split_M, one, pt.gamma, 3);
    CHECK(ab.value == Rational(2) * a.value - Rational(1, 3) * b.value);
  }
  CHECK_THROWS_AS(orbital_integral(F, kOneK, TorusKind::split_M, one, one, 2), DomainError);
}

TEST_CASE("orbital integral equals brute-force pair enumeration at radius 3") {
  const LocalField F(3);
  const Mat2 one = Mat2::identity(F.eps());
  const auto pts = sample_M_sigma(F, 2);
  for (std::size_t i = 0; i < pts.size(); i += 3)
    for (const auto& f : {kOneK, HeckeFunction::indicator(1)})
      CHECK(orbital_integral(F, f, TorusKind::split_M, one, pts[i].gamma, 3).raw ==
            orbital_integral_bruteforce(F, f, TorusKind::split_M, one, pts[i].gamma, 3));
  const auto an = sample_anisotropic_sigma(F, 2, 0);
  CHECK(orbital_integral(F, kOneK, TorusKind::anisotropic, one, an.front().gamma, 3).raw ==
        orbital_integral_bruteforce(F, kOneK, TorusKind::anisotropic, one, an.front().gamma, 3));
}

TEST_CASE("orbital integrals are constant on congruence cosets") {
  const LocalField F(3);
  const long eps = F.eps();
  const Mat2 one = Mat2::identity(eps);
  // u' = ζ/ζ̄ with ζ = 1 + 9√ε lies in 1 + ω^2 O_E.
  const ExtScalar zeta(Rational(1), Rational(9), eps);
  const ExtScalar shift = zeta / zeta.conj();
  for (const auto& pt : sample_M_sigma(F, 2)) {
    const ExtScalar u = pt.gamma(0, 0);
    const Mat2 g2 = diag_u(u * shift);
    for (const auto& f : {kOneK, HeckeFunction::indicator(1)}) {
      const long R = orbital_radius(F, f, TorusKind::split_M, one, pt.gamma);
      CHECK(orbital_integral(F, f, TorusKind::split_M, one, pt.gamma, R).value ==
            orbital_integral(F, f, TorusKind::split_M, one, g2, orbital_radius(F, f, TorusKind::split_M, one, g2)).value);
    }
  }
}

TEST_CASE("weight_vM0 hand-evaluated cases") {
  const LocalField F(3);
  const long eps = F.eps();
  const Mat2 I = Mat2::identity(eps);
  const Mat2 n_up = Mat2::base(1, Rational(1, 3), 0, 1, eps);  // h_P = 0, h_Pbar = -2
  const Mat2 n_lo = Mat2::base(1, 0, Rational(1, 3), 1, eps);  // h_P = 2, h_Pbar = 0
  CHECK(weight_vM0(F, I, I, I, I) == 0);
  CHECK(weight_vM0(F, D(F, 1), I, D(F, 1), I) == 0);
  CHECK(weight_vM0(F, D(F, 1), I, I, I) == -1);
  CHECK(weight_vM0(F, I, D(F, 1), I, I) == -1);
  CHECK(weight_vM0(F, D(F, 2), I, I, D(F, 1)) == -3);
  CHECK(weight_vM0(F, n_up, I, I, I) == -2);
  CHECK(weight_vM0(F, I, n_lo, I, I) == -2);
  CHECK(weight_vM0(F, D(F, -1), I, D(F, -1), I) == 0);
  CHECK(weight_vM0(F, D(F, 1), D(F, 1), I, I) == 0);
  CHECK(weight_vM0(F, I, n_up, D(F, 3), I) == -3);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const Mat2 x1 = random_H(F, 3, rng), y1 = random_H(F, 3, rng), x2 = random_H(F, 3, rng), y2 = random_H(F, 3, rng);
    CHECK(weight_vM0(F, x1, y1, x2, y2) == weight_vM0(F, x2, y2, x1, y1));
    const Mat2 k = random_K(F, FieldKind::F, rng);
    CHECK(weight_vM0(F, x1 * k, y1, x2, y2) == weight_vM0(F, x1, y1, x2, y2));
    CHECK(weight_vM0(F, D(F, 2) * x1, D(F, 2) * y1, D(F, 2) * x2, D(F, 2) * y2) == weight_vM0(F, x1, y1, x2, y2));
  }
}

TEST_CASE("vM_limit_check") {
  const auto a = vM_limit_check(3, 0, 0, 2);
  CHECK(a.ok);
  CHECK(a.expected == 5);
  const auto b = vM_limit_check(3, 3, 1, 0);
  CHECK(b.ok);
  CHECK(b.expected == 3);
  CHECK(vM_limit_check(5, -2, 4, 3).expected + 2 == vM_limit_check(5, -2, 4, 4).expected);
  CHECK(vM_limit_check(5, -2, 4, 4).ok);
}

TEST_CASE("weighted orbital integrals") {
  const LocalField F(3);
  const Mat2 one = Mat2::identity(F.eps());
  const HeckeFunction t1 = HeckeFunction::indicator(1);
  const auto pts = sample_M_sigma(F, 2);
  for (std::size_t i = 0; i < pts.size(); i += 2) {
    const Mat2& g = pts[i].gamma;
    const auto w = weighted_orbital_integral(F, kOneK, kOneK, one, g, 3);
    CHECK(w.stable);
    CHECK(w.raw == weighted_orbital_bruteforce(F, kOneK, kOneK, one, g, 2));
    const auto w1 = weighted_orbital_integral(F, t1, kOneK, one, g, 3);
    CHECK(w1.raw == weighted_orbital_bruteforce(F, t1, kOneK, one, g, 3));
    // Unit weight factors into the two orbital integrals.
    const WeightFn unit = [](const Mat2&, const Mat2&, const Mat2&, const Mat2&) { return Rational(1); };
    const auto u = weighted_orbital_integral(F, t1, kOneK, one, g, 3, unit);
    CHECK(u.value == orbital_integral(F, t1, TorusKind::split_M, one, g, 3).value *
                         orbital_integral(F, kOneK, TorusKind::split_M, one, g, 3).value);
    const WeightFn flipped = [&F](const Mat2& x1, const Mat2& y1, const Mat2& x2, const Mat2& y2) {
      return Rational(-weight_vM0(F, x1, y1, x2, y2));
    };
    CHECK(weighted_orbital_integral(F, t1, kOneK, one, g, 3, flipped).value == -w1.value);
  }
}

TEST_CASE("geometric asymptote") {
  const LocalField F(3);
  const auto cal = calibrate_geometric(F, 2, Rational(8, 5), Rational(1));
  const auto inst = default_instances(F, 2, cal.c0_M, cal.c0_aniso);
  const auto ga = geometric_asymptote(F, kOneK, kOneK, inst);
  CHECK(ga.stable);
  CHECK(ga.slope == Rational(8, 5));
  CHECK(ga.intercept == Rational(1));
  const auto z = geometric_asymptote(F, HeckeFunction{}, HeckeFunction{}, inst);
  CHECK(z.slope.is_zero());
  CHECK(z.intercept.is_zero());
  const HeckeFunction t1 = HeckeFunction::indicator(1);
  const HeckeFunction sum{{{0, Rational(1)}, {1, Rational(1)}}};
  const auto a = geometric_asymptote(F, t1, kOneK, inst), b = geometric_asymptote(F, kOneK, kOneK, inst);
  const auto s = geometric_asymptote(F, sum, kOneK, inst);
  CHECK(s.slope == a.slope + b.slope);
  CHECK(s.intercept == a.intercept + b.intercept);
  auto broken = inst;
  broken[1].c0.clear();
  CHECK_THROWS_AS(geometric_asymptote(F, kOneK, kOneK, broken), ConfigError);
}

TEST_CASE("geometric bilinear form is proportional to m_{C(1),C(1)}") {
  const LocalField F(3);
  const auto cal = calibrate_geometric(F, 2, Rational(8, 5), Rational(1));
  std::vector<SigmaTorusInstance> inst{default_instances(F, 2, cal.c0_M, cal.c0_aniso)[0]};
  const Rational d = formal_degree_from_slope(F, Rational(8, 5));
  const std::vector<std::pair<HeckeFunction, HeckeFunction>> pairs{
      {kOneK, kOneK},
      {HeckeFunction::indicator(1), kOneK},
      {HeckeFunction{{{0, Rational(1)}, {1, Rational(1, 2)}}}, HeckeFunction::indicator(1)},
      {HeckeFunction{{{0, Rational(3)}, {2, Rational(-1, 4)}}}, HeckeFunction{{{1, Rational(2)}}}}};
  std::optional<Rational> ratio;
  for (const auto& [f1, f2] : pairs) {
    const auto ga = geometric_asymptote(F, f1, f2, inst);
    const auto sa = spectral_asymptote(F, f1, f2, d);
    const Rational r = ga.bilinear_M / sa.m_C1C1_at_1;
    if (!ratio) ratio = r;
    CHECK(r == *ratio);
    CHECK(ga.slope == sa.slope);
  }
  CHECK(*ratio == Rational(9, 20));
}
