#include "relform/asymptotics.hpp"

#include <numbers>
#include <random>

#include "relform/errors.hpp"

namespace relform {

namespace {

const Rational kOne(1);

// (1 - z)(1 - 1/z)
RatFunc d_factor() {
  const RatFunc one_minus_z = RatFunc(1) - RatFunc::z();
  return one_minus_z * one_minus_z.tilde();
}

void require_annulus_regular(const RatFunc& f, const char* name, double lo, double hi,
                             HypothesisReport& rep) {
  if (f.has_pole_in_annulus(lo, hi))
    rep.violations.push_back(std::string(name) + " has a pole on the annulus");
}

void require_simple_at_one(const RatFunc& f, const char* name, double lo, double hi,
                           HypothesisReport& rep) {
  if (f.pole_order(kOne) > 1) rep.violations.push_back(std::string(name) + " has a multiple pole at 1");
  if (f.has_pole_in_annulus(lo, hi, &kOne))
    rep.violations.push_back(std::string(name) + " has a pole on the annulus other than 1");
}

}  // namespace

bool AsymptoticDatum::all_zero() const {
  return p.is_zero() && p_prime.is_zero() && c1.is_zero() && cw.is_zero() && c1_prime.is_zero() &&
         cw_prime.is_zero();
}

RatFunc build_pn(const AsymptoticDatum& d, Side side, long n) {
  const bool un = side == Side::unprimed;
  const RatFunc& p = un ? d.p : d.p_prime;
  const RatFunc& c1 = un ? d.c1 : d.c1_prime;
  const RatFunc& cw = un ? d.cw : d.cw_prime;
  const RatFunc z = RatFunc::z();
  const RatFunc plus = RatFunc::monomial(kOne, n + 1) / (RatFunc(1) - z);
  const RatFunc minus = RatFunc::monomial(kOne, -(n + 1)) / (RatFunc(1) - z.tilde());
  return p - (plus * c1 + minus * cw);
}

HypothesisReport check_hypotheses(const AsymptoticDatum& d, const Rational& eta) {
  HypothesisReport rep;
  const double lo = 1.0 - eta.to_double();
  const double hi = 1.0 + eta.to_double();
  require_annulus_regular(d.c1, "c1", lo, hi, rep);
  require_annulus_regular(d.cw, "cw", lo, hi, rep);
  require_annulus_regular(d.c1_prime, "c1'", lo, hi, rep);
  require_annulus_regular(d.cw_prime, "cw'", lo, hi, rep);
  require_simple_at_one(d.p, "p", lo, hi, rep);
  require_simple_at_one(d.p_prime, "p'", lo, hi, rep);
  if (!rep.violations.empty()) {
    rep.ok = false;
    return rep;
  }
  const Rational c1 = d.c1.eval(kOne), cw = d.cw.eval(kOne);
  const Rational c1p = d.c1_prime.eval(kOne), cwp = d.cw_prime.eval(kOne);
  if (rf_residue(d.p, kOne) != -c1 + cw)
    rep.violations.push_back("residue of p at 1 is " + rf_residue(d.p, kOne).str() + ", expected " +
                             (-c1 + cw).str());
  if (rf_residue(d.p_prime, kOne) != -c1p + cwp)
    rep.violations.push_back("residue of p' at 1 is " + rf_residue(d.p_prime, kOne).str() +
                             ", expected " + (-c1p + cwp).str());
  const bool p_zero = d.p.is_zero() && d.p_prime.is_zero();
  if (!p_zero && (c1 != -cw || c1p != -cwp))
    rep.violations.push_back("p nonzero but c(1,1) != -c(w,1) on some side");
  if (d.all_zero()) {
    rep.degenerate = true;
  } else if (c1.is_zero() || cw.is_zero() || c1p.is_zero() || cwp.is_zero()) {
    rep.violations.push_back("some c(s,1) vanishes");
  }
  rep.ok = rep.violations.empty();
  return rep;
}

AsymptoticExpansion lemma_expansion(const AsymptoticDatum& d, const Rational& eta) {
  const HypothesisReport rep = check_hypotheses(d, eta);
  if (!rep.ok) {
    std::string msg = "lemma hypotheses fail:";
    for (const auto& v : rep.violations) msg += " " + v + ";";
    throw PreconditionError(msg);
  }
  const RatFunc z = RatFunc::z();
  const RatFunc pt = d.p_prime.tilde();
  const RatFunc c1t = d.c1_prime.tilde();
  const RatFunc cwt = d.cw_prime.tilde();
  const RatFunc D = d_factor();

  // Contour term over the inner circle.
  const RatFunc inner = (d.p * pt + (d.c1 * c1t + d.cw * cwt) / D).times_z(-1);
  const TwoPiIMultiple t27 = contour_minus(inner);

  // Derivative terms at 1; the products are regular there by hypothesis.
  const RatFunc zm1 = z - RatFunc(1);
  const RatFunc g1 = d.cw * c1t;
  const RatFunc g2 = d.cw * zm1 * pt + c1t * zm1 * d.p;
  if (g1.has_pole_at(kOne) || g2.has_pole_at(kOne))
    throw InternalConsistencyError("derivative term singular at 1");
  const Rational t28 = -g1.derivative().eval(kOne) + g2.derivative().eval(kOne);

  // Linear part.
  const Rational cw1 = d.cw.eval(kOne);
  const Rational c1t1 = c1t.eval(kOne);
  const Rational res = cw1 * rf_residue(pt, kOne) + c1t1 * rf_residue(d.p, kOne);
  const Rational lead = cw1 * c1t1;

  AsymptoticExpansion e;
  e.slope = {Rational(2) * lead - res};
  e.intercept = {t27.value + t28 + lead - res};
  return e;
}

TruncatedIntegral truncated_integral(const AsymptoticDatum& d, long n, IntegralRoute route,
                                     int quadrature_nodes) {
  const RatFunc pn = build_pn(d, Side::unprimed, n);
  const RatFunc pnt = build_pn(d, Side::primed, n).tilde();
  const RatFunc integrand = (pn * pnt).times_z(-1);
  TruncatedIntegral out;
  if (route != IntegralRoute::numeric) {
    if (pn.is_laurent() && pnt.is_laurent()) {
      out.exact = TwoPiIMultiple{laurent_constant_coeff(pn.to_laurent() * pnt.to_laurent())};
      out.route = "laurent";
    } else {
      try {
        // The integrand is regular on |z| = 1 so the inner contour is the unit circle.
        out.exact = contour_minus(integrand);
        out.route = "residue";
      } catch (const FactorizationError&) {
        if (route == IntegralRoute::exact) throw;
      }
    }
  }
  if (out.exact) {
    out.numeric = out.exact->to_complex();
  } else {
    out.numeric = numeric_quadrature(integrand, 1.0, quadrature_nodes);
    out.route = "quadrature";
  }
  return out;
}

std::optional<long> onset_index(const AsymptoticDatum& d, const AsymptoticExpansion& e, long n_max) {
  std::optional<long> onset;
  for (long n = n_max; n >= 0; --n) {
    const auto ti = truncated_integral(d, n, IntegralRoute::exact);
    if (!ti.exact || !(*ti.exact == e.at(n))) break;
    onset = n;
  }
  return onset;
}

namespace {

RatFunc random_c(std::mt19937_64& rng) {
  static const Rational kA[] = {Rational(1, 2), Rational(-1, 2), Rational(1, 3),
                                Rational(-1, 3), Rational(1, 4), Rational(-1, 4)};
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_int_distribution<int> pick(0, 5);
  std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : c) x = Rational(coef(rng));
  c[0] += Rational(4);  // keeps c(1) away from zero in most draws
  return RatFunc(Poly(c), Poly(Rational(1))) / RatFunc::one_minus(kA[pick(rng)]);
}

// c1, cw with c1(1) = -cw(1) != 0.
void random_pair(std::mt19937_64& rng, RatFunc& c1, RatFunc& cw) {
  for (;;) {
    c1 = random_c(rng);
    cw = random_c(rng);
    const Rational a = c1.eval(kOne), b = cw.eval(kOne);
    if (a.is_zero() || b.is_zero()) continue;
    cw = cw.scaled(-a / b);
    return;
  }
}

RatFunc random_p(std::mt19937_64& rng, const RatFunc& c1, const RatFunc& cw) {
  // Res_{z=1} r/(1-z) = -r.
  const Rational r = c1.eval(kOne) - cw.eval(kOne);
  std::uniform_int_distribution<int> coef(-2, 2);
  const RatFunc extra = RatFunc(Rational(coef(rng))) + RatFunc::z().scaled(Rational(coef(rng), 3));
  return RatFunc(r) / (RatFunc(1) - RatFunc::z()) + extra / RatFunc::one_minus(Rational(1, 3));
}

}  // namespace

AsymptoticDatum random_datum(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AsymptoticDatum d;
  random_pair(rng, d.c1, d.cw);
  random_pair(rng, d.c1_prime, d.cw_prime);
  d.p = random_p(rng, d.c1, d.cw);
  d.p_prime = random_p(rng, d.c1_prime, d.cw_prime);
  return d;
}

std::vector<WorkedExample> worked_examples() {
  const RatFunc z = RatFunc::z();
  const RatFunc p = RatFunc(2) / (RatFunc(1) - z);
  return {{"constant", {0, 0, 1, 1, 1, 1}, {{Rational(2)}, {Rational(1)}}},
          {"c_w=z", {0, 0, 1, z, 1, z}, {{Rational(2)}, {Rational(0)}}},
          {"case4", {p, p, 1, -1, 1, -1}, {{Rational(2)}, {Rational(1)}}}};
}

}  // namespace relform
