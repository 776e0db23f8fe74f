#include "relform/spectral.hpp"

#include "relform/contour.hpp"
#include "relform/errors.hpp"

namespace relform {

namespace {

Rational qinv(const LocalField& F, long k = 1) { return pow_int(F.q(), -k); }

RatFunc Z() { return RatFunc::z(); }

// Σ_{r ≥ r0} z^{s r}, continued from its domain of convergence.
RatFunc geometric_tail(long s, long r0) {
  return RatFunc::monomial(Rational(1), s * r0) / RatFunc::one_minus(Rational(1), s);
}

}  // namespace

RatFunc intertwining_constant(const LocalField& F) {
  // Shell v(x) = 0 and above has volume 1 and integrand 1; shell v(x) = -j (j ≥ 1)
  // contributes (1 - q^{-2}) z^{2j}. Sum in closed form, then normalize by the
  // value at z = 1/q.
  const Rational a = Rational(1) - qinv(F, 2);
  const RatFunc z2 = Z().pow(2);
  const RatFunc raw = RatFunc(1) + z2.scaled(a) / (RatFunc(1) - z2);
  return raw.scaled((Rational(1) + qinv(F, 2)).inverse());
}

Rational intertwining_shell_partial(const LocalField& F, const Rational& z, long J) {
  const Rational a = Rational(1) - qinv(F, 2);
  Rational s(1);
  for (long j = 1; j <= J; ++j) s += a * z.pow(2 * j);
  return s / (Rational(1) + qinv(F, 2));
}

RatFunc mu_function(const LocalField& F) {
  const RatFunc c = intertwining_constant(F);
  return RatFunc(1) / (c * c.tilde());
}

RatFunc normalized_c_scalar(const LocalField& F, Weyl s) {
  if (s == Weyl::one) return RatFunc(1);
  // E⁰ is built on the contragredient pairing, so the denominator is c(1/z).
  const RatFunc c = intertwining_constant(F);
  return c / c.tilde();
}

RatFunc spherical_function(const LocalField& F, long r) {
  if (r < 0) throw PreconditionError("negative cell height");
  if (r == 0) return RatFunc(1);
  // Distribution of v(k22) for k uniform in K = GL(2, O_E) (residue field of size κ).
  const long kappa = F.q() * F.q();
  const Rational kp1inv = Rational(1, kappa + 1);
  auto term = [&](long exponent) { return RatFunc::monomial(qinv(F, exponent), exponent); };  // (z/q)^m
  RatFunc phi = term(r).scaled(Rational(kappa) * kp1inv);
  for (long j = 1; j < r; ++j) {
    const Rational w = kp1inv * pow_int(kappa, -(j - 1)) * (Rational(1) - Rational(1, kappa));
    phi += term(r - 2 * j).scaled(w);
  }
  phi += term(-r).scaled(kp1inv * pow_int(kappa, -(r - 1)));
  return phi;
}

std::map<long, RatFunc> eisenstein_cell_values(const LocalField& F, long max_r) {
  const RatFunc norm = intertwining_constant(F).tilde();
  std::map<long, RatFunc> out;
  for (long r = 0; r <= max_r; ++r) out[r] = spherical_function(F, r) / norm;
  return out;
}

RatFunc eisenstein_two_term(const LocalField& F, long r) {
  const RatFunc c0 = normalized_c_scalar(F);
  return (RatFunc::monomial(Rational(1), r) + c0 * RatFunc::monomial(Rational(1), -r)).scaled(qinv(F, r));
}

long detect_n0(const LocalField& F, long max_r) {
  const auto eis = eisenstein_cell_values(F, max_r);
  long r0 = max_r + 1;
  for (long r = max_r; r >= 0; --r) {
    if (!(eis.at(r) == eisenstein_two_term(F, r))) break;
    r0 = r;
  }
  if (r0 > max_r) throw InternalConsistencyError("two-term Eisenstein shape never reached");
  return 2 * r0;
}

SphericalDatum spherical_datum(const LocalField& F, long max_r) {
  SphericalDatum d;
  d.c = intertwining_constant(F);
  d.mu = mu_function(F);
  d.c0w = normalized_c_scalar(F);
  d.eis = eisenstein_cell_values(F, max_r);
  d.n0 = detect_n0(F, max_r);
  return d;
}

RatFunc truncated_period(const LocalField& F, long n) {
  const auto eis = eisenstein_cell_values(F, n);
  RatFunc s;
  for (long r = 0; r <= n; ++r) s += eis.at(r).scaled(sphere_measure(F, r, FieldKind::F));
  return s;
}

RatFunc period_tail(const RatFunc& C1, const RatFunc& Cw, long n) {
  const RatFunc plus = RatFunc::monomial(Rational(1), n + 1) / (RatFunc(1) - Z());
  const RatFunc minus = RatFunc::monomial(Rational(1), -(n + 1)) / (RatFunc(1) - Z().tilde());
  return plus * C1 + minus * Cw;
}

PeriodFunctions regularized_period_and_C(const LocalField& F, long n) {
  PeriodFunctions out;
  const Rational vol_ratio = Rational(1) + qinv(F);  // vol_F(r) q^{-r} for r ≥ 1
  out.C1 = RatFunc(vol_ratio) * normalized_c_scalar(F, Weyl::one);
  out.Cw = RatFunc(vol_ratio) * normalized_c_scalar(F, Weyl::w);
  for (long k = n; k <= n + 5; ++k) out.Pn[k] = truncated_period(F, k);
  out.P = out.Pn.at(n) + period_tail(out.C1, out.Cw, n);
  const RatFunc again = out.Pn.at(n + 3) + period_tail(out.C1, out.Cw, n + 3);
  if (!(again == out.P)) throw InternalConsistencyError("regularized period depends on the truncation level");
  return out;
}

RatFunc translated_regularized_period(const LocalField& F, const Mat2& x, long L) {
  const long q = F.q();
  const long eps = F.eps();
  const ExtScalar zero(Rational(0), eps), one(Rational(1), eps);
  const RatFunc c0 = normalized_c_scalar(F);
  const auto E0 = [&](long s) { return eisenstein_two_term(F, s); };

  // Bottom rows of K_H modulo ω^L: (b, 1) with b mod q^L, and (1, a) with a ∈ ωO mod q^L.
  struct ClassData {
    Mat2 kx;
    ShiftConstant sc;
  };
  std::vector<ClassData> classes;
  long qL = 1;
  for (long i = 0; i < L; ++i) qL *= q;
  for (long b = 0; b < qL; ++b) {
    const Mat2 k = Mat2::of(one, zero, ExtScalar(Rational(b), eps), one);
    classes.push_back({k * x, {}});
  }
  for (long a = q; a < qL; a += q) {
    const Mat2 k = Mat2::of(zero, one, one, ExtScalar(Rational(a), eps));
    classes.push_back({k * x, {}});
  }
  {
    const Mat2 k = Mat2::of(zero, one, one, zero);  // a = 0
    classes.push_back({k * x, {}});
  }
  long R0 = 1;
  for (auto& c : classes) {
    c.sc = shift_constant(F, c.kx);
    R0 = std::max(R0, c.sc.N0);
  }
  if (R0 > L) throw PreconditionError("class level L too small for the translation");
  const Rational w(1, static_cast<long>(classes.size()));

  RatFunc total;
  // Direct cells below R0.
  for (long r = 0; r < R0; ++r) {
    const Mat2 m = Mat2::diag(ExtScalar(F.uniformizer_pow(r), eps), one);
    RatFunc cell;
    for (const auto& c : classes) cell += E0(cartan_height(F, m * c.kx));
    total += cell.scaled(w * sphere_measure(F, r, FieldKind::F));
  }
  // Tails: vol_F(r) E⁰(r + X) = (1 + q^{-1}) q^{-X} (z^X z^r + c⁰ z^{-X} z^{-r}) for r ≥ R0.
  const Rational vol_ratio = Rational(1) + qinv(F);
  for (const auto& c : classes) {
    const long X = c.sc.X_h;
    const RatFunc tail = RatFunc::monomial(Rational(1), X) * geometric_tail(1, R0) +
                         c0 * RatFunc::monomial(Rational(1), -X) * geometric_tail(-1, R0);
    total += tail.scaled(w * vol_ratio * qinv(F, X));
  }
  return total;
}

RatFunc spherical_fourier(const LocalField& F, const HeckeFunction& f) {
  RatFunc s;
  for (const auto& [r, c] : f.coeffs) {
    if (c.is_zero()) continue;
    s += spherical_function(F, r).scaled(c * sphere_measure(F, r, FieldKind::E));
  }
  return s;
}

RatFunc spherical_fourier_tree(const LocalField& F, const HeckeFunction& f) {
  const long R = f.max_height();
  if (R < 0) return RatFunc();
  std::map<long, Rational> acc;
  for (const auto& v : tree_ball(F, R, FieldKind::E, R)) {
    const Rational c = f.at(v.dist);
    if (c.is_zero()) continue;
    acc[v.e] += c * qinv(F, v.e);  // (z/q)^e
  }
  return RatFunc(LaurentPoly(acc));
}

RatFunc generalized_matrix_coefficient(const LocalField& F, const RatFunc& xi, const RatFunc& xi_prime,
                                       const HeckeFunction& f1, const HeckeFunction& f2) {
  if (xi.is_zero() || xi_prime.is_zero()) return RatFunc();
  return xi * spherical_fourier(F, f1) * spherical_fourier(F, f2).tilde() * xi_prime.tilde();
}

RatFunc matrix_coefficient_in_basis(const std::vector<RatFunc>& xi, const std::vector<RatFunc>& xi_prime,
                                    const std::vector<std::vector<RatFunc>>& pi,
                                    const std::vector<std::vector<Rational>>& Q) {
  const std::size_t m = xi.size();
  RatFunc total;
  for (const auto& v : Q) {
    // π v and the two functionals.
    std::vector<RatFunc> pv(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) pv[i] += pi[i][j].scaled(v[j]);
    RatFunc a, b;
    for (std::size_t i = 0; i < m; ++i) {
      a += xi[i] * pv[i];
      b += xi_prime[i].scaled(v[i]);
    }
    total += a * b.tilde();
  }
  return total;
}

AsymptoticDatum spectral_lemma_datum(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2) {
  const PeriodFunctions pf = regularized_period_and_C(F, 0);
  const RatFunc lambda = spherical_fourier(F, f1) * spherical_fourier(F, f2).tilde();
  return {lambda * pf.P, pf.P, lambda * pf.C1, lambda * pf.Cw, pf.C1, pf.Cw};
}

SpectralAsymptote spectral_asymptote(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                     const Rational& formal_degree,
                                     const std::vector<SpectralDatumPlugin>& plugins) {
  // Ramified characters have no spherical vector; spherical test functions see
  // them as zero, but the records must still be complete and admissible.
  for (const auto& p : plugins) admit_plugin(p);
  const AsymptoticDatum d = spectral_lemma_datum(F, f1, f2);
  SpectralAsymptote out;
  out.lemma = lemma_expansion(d, Rational(1, 2 * F.q()));
  out.formal_degree = formal_degree;
  const Rational half_d = formal_degree / Rational(2);
  out.slope = half_d * out.lemma.slope.value;
  out.intercept = half_d * out.lemma.intercept.value;
  const PeriodFunctions pf = regularized_period_and_C(F, 0);
  out.m_C1C1_at_1 = generalized_matrix_coefficient(F, pf.C1, pf.C1, f1, f2).eval(Rational(1));
  return out;
}

Rational spectral_kernel_value(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                               const Rational& formal_degree, long n) {
  const AsymptoticDatum d = spectral_lemma_datum(F, f1, f2);
  const auto ti = truncated_integral(d, n, IntegralRoute::exact);
  return formal_degree / Rational(2) * ti.exact->value;
}

Rational formal_degree_from_slope(const LocalField& F, const Rational& indicator_slope) {
  const Rational lambda1 = spherical_fourier(F, HeckeFunction::indicator(0)).eval(Rational(1));
  const Rational a = Rational(1) + qinv(F);
  return indicator_slope / (lambda1.pow(2) * a * a);
}

int plugin_case(const SpectralDatumPlugin& p) {
  if (!p.trivial_on_Fx) return p.trivial_on_E1 ? 2 : 1;
  return p.trivial_on_E1 ? 4 : 3;
}

void admit_plugin(const SpectralDatumPlugin& p) {
  if (!p.p || !p.c1 || !p.cw) throw MissingDataError("plug-in '" + p.label + "' lacks p, c1 or cw");
  const Rational one(1);
  const auto fail = [&](const std::string& why) {
    throw PreconditionError("plug-in '" + p.label + "' violates case " + std::to_string(plugin_case(p)) + ": " + why);
  };
  switch (plugin_case(p)) {
    case 1:
      if (!p.c1->is_zero() || !p.cw->is_zero() || !p.p->is_zero()) fail("expected P = C1 = Cw = 0");
      break;
    case 2:
      if (!p.c1->is_zero() || !p.cw->is_zero()) fail("expected C1 = Cw = 0");
      break;
    case 3:
      if (!p.p->is_zero()) fail("expected P = 0");
      if (p.c1->has_pole_at(one) || p.cw->has_pole_at(one) || p.c1->eval(one) != p.cw->eval(one))
        fail("expected C1(1) = Cw(1)");
      break;
    default:
      if (p.c1->has_pole_at(one) || p.cw->has_pole_at(one) || p.c1->eval(one) != -p.cw->eval(one))
        fail("expected C1(1) = -Cw(1)");
      if (p.p->pole_order(one) > 1) fail("P has a multiple pole at 1");
      if (rf_residue(*p.p, one) != -p.c1->eval(one) + p.cw->eval(one)) fail("residue of P at 1");
      break;
  }
}

RatFunc plugin_truncated_period(const SpectralDatumPlugin& p, long n) {
  admit_plugin(p);
  return *p.p - period_tail(*p.c1, *p.cw, n);
}

bool discrete_series_limit_check(const LocalField& F, const std::vector<Rational>& cells, const Rational& limit) {
  Rational partial(0);
  Rational prev_gap(-1);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    partial += sphere_measure(F, static_cast<long>(r), FieldKind::F) * cells[r];
    const Rational gap = (limit - partial).abs();
    if (r > 0 && !(gap < prev_gap)) return false;
    prev_gap = gap;
  }
  return true;
}

}  // namespace relform
