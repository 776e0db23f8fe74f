#include <cmath>
#include <random>

#include "app.hpp"
#include "relform/asymptotics.hpp"
#include "relform/errors.hpp"
#include "relform/kernel.hpp"
#include "relform/spectral.hpp"

namespace relform::app {

namespace {

std::string rs(const Rational& r) { return r.str(); }

Mat2 diag_power(const LocalField& F, long r) { return Mat2::base(F.uniformizer_pow(r), 0, 0, 1, F.eps()); }

json pair_json(const HeckeFunction& f1, const HeckeFunction& f2) {
  return {{"f1", hecke_to_json(f1)}, {"f2", hecke_to_json(f2)}};
}

bool is_indicator_pair(const HeckeFunction& f1, const HeckeFunction& f2) {
  const HeckeFunction one = HeckeFunction::indicator(0);
  return f1.coeffs == one.coeffs && f2.coeffs == one.coeffs;
}

// ---------------------------------------------------------------------------------------------

void suite_asymptotics(const RunConfig& cfg, SuiteReport& rep) {
  for (const auto& ex : worked_examples()) {
    const AsymptoticExpansion e = lemma_expansion(ex.datum);
    json residuals = json::array();
    bool zero = true;
    for (long n = 1; n <= 25; ++n) {
      const Rational r = truncated_integral(ex.datum, n, IntegralRoute::exact).exact->value - e.at(n).value;
      residuals.push_back(rs(r));
      zero = zero && r.is_zero();
    }
    const bool shape = e.slope == ex.expected.slope && e.intercept == ex.expected.intercept;
    rep.add("worked example " + ex.name, shape && zero,
            {{"slope", rs(e.slope.value)}, {"intercept", rs(e.intercept.value)}, {"residuals_n1_to_25", residuals}});
  }

  json failures = json::array();
  double worst = 0;
  for (long seed = 1; seed <= cfg.random_data; ++seed) {
    const AsymptoticDatum d = random_datum(static_cast<std::uint64_t>(seed));
    const auto hyp = check_hypotheses(d);
    if (!hyp.ok) {
      failures.push_back({{"seed", seed}, {"violations", hyp.violations}});
      continue;
    }
    const AsymptoticExpansion e = lemma_expansion(d);
    const auto num = truncated_integral(d, 60, IntegralRoute::numeric);
    const double resid = std::abs(num.numeric - e.at(60).to_complex());
    worst = std::max(worst, resid);
    std::vector<Rational> ex;
    for (long n : {20L, 40L, 60L}) ex.push_back((truncated_integral(d, n, IntegralRoute::exact).exact->value - e.at(n).value).abs());
    const bool decays = (ex[0].is_zero() && ex[1].is_zero() && ex[2].is_zero()) || (ex[1] < ex[0] && ex[2] < ex[1]);
    if (resid > 1e-6 || !decays)
      failures.push_back({{"seed", seed},
                          {"numeric_residual_n60", resid},
                          {"exact_residuals_n20_40_60", {ex[0].to_double(), ex[1].to_double(), ex[2].to_double()}}});
  }
  rep.add("random admissible data", failures.empty(),
          {{"count", cfg.random_data}, {"max_numeric_residual_n60", worst}, {"failures", failures}});
}

// ---------------------------------------------------------------------------------------------

void suite_periods(const RunConfig& cfg, SuiteReport& rep) {
  const LocalField F = cfg.field();
  const long n0 = detect_n0(F, 6);
  const PeriodFunctions pf = regularized_period_and_C(F, n0);
  json bad = json::array();
  for (long n = n0; n <= n0 + 5; ++n)
    if (!(pf.P - pf.Pn.at(n) - period_tail(pf.C1, pf.Cw, n)).is_zero()) bad.push_back(n);
  rep.add("period relation", bad.empty(), {{"n0", n0}, {"failing_n", bad}});
  rep.data["P"] = pf.P.str();
  rep.data["C1"] = pf.C1.str();
  rep.data["Cw"] = pf.Cw.str();

  const Rational one(1);
  const Rational c0_at_1 = normalized_c_scalar(F).eval(one);
  const long mu_order = mu_function(F).zero_order(one);
  const long p_order = pf.P.pole_order(one);
  const double eta = 1.0 / (2.0 * static_cast<double>(F.q()));
  const bool other_poles = pf.P.has_pole_in_annulus(1 - eta, 1 + eta, &one);
  rep.add("c0(w,1), mu and P at z = 1", c0_at_1 == Rational(-1) && mu_order == 2 && p_order == 1 && !other_poles,
          {{"c0_w_at_1", rs(c0_at_1)}, {"mu_zero_order_at_1", mu_order}, {"P_pole_order_at_1", p_order},
           {"P_other_annulus_poles", other_poles}});

  const RatFunc shifted = translated_regularized_period(F, diag_power(F, 1), 2);
  rep.add("H-invariance x = diag(w, 1)", shifted == pf.P, {{"translate", shifted.str()}});

  std::mt19937_64 rng(2024);
  long failures = 0;
  json first = nullptr;
  for (int i = 0; i < 200; ++i) {
    const Mat2 h = random_H(F, 2, rng);
    const auto s = shift_constant(F, h);
    for (long r = s.N0; r <= s.N0 + 6; ++r)
      if (cartan_height(F, diag_power(F, r) * h) != r + s.X_h) {
        ++failures;
        if (first.is_null()) first = {{"h", h.str()}, {"r", r}, {"N0", s.N0}, {"X_h", s.X_h}};
      }
  }
  rep.add("shifted Cartan heights", failures == 0, {{"samples", 200}, {"failures", failures}, {"first_failure", first}});
}

// ---------------------------------------------------------------------------------------------

void suite_geometry(const RunConfig& cfg, SuiteReport& rep, std::ostream& log) {
  const LocalField F = cfg.field();
  const long eps = F.eps();
  const Mat2 I = Mat2::identity(eps);
  const Constants k = ensure_constants(cfg, log);
  const auto inst = torus_instances(cfg, k);

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> coef(-25, 25);
  long delta_fail = 0, tried = 0;
  while (tried < 50) {
    const ExtScalar zeta(Rational(coef(rng)), Rational(coef(rng)), eps);
    if (zeta.is_zero()) continue;
    const ExtScalar u = zeta / zeta.conj();
    if (u.b().is_zero()) continue;
    ++tried;
    const Mat2 g = Mat2::of(u, ExtScalar(Rational(0), eps), ExtScalar(Rational(0), eps), ExtScalar(Rational(1), eps));
    if (delta_sigma(F, g) != delta_sigma_closed_form(u)) ++delta_fail;
  }
  rep.add("Delta_sigma closed form on 50 norm-one points", delta_fail == 0, {{"failures", delta_fail}});

  json brute = json::array();
  bool brute_ok = true;
  const auto& msamp = inst[0].sampler;
  for (std::size_t i = 0; i < msamp.size(); i += 3)
    for (long h : {0L, 1L}) {
      const HeckeFunction f = HeckeFunction::indicator(h);
      const Rational a = orbital_integral(F, f, TorusKind::split_M, I, msamp[i].gamma, 3).raw;
      const Rational b = orbital_integral_bruteforce(F, f, TorusKind::split_M, I, msamp[i].gamma, 3);
      brute_ok = brute_ok && a == b;
      brute.push_back({{"gamma", msamp[i].label}, {"height", h}, {"folded", rs(a)}, {"brute", rs(b)}});
    }
  rep.add("orbital integral vs brute force at radius 3", brute_ok, {{"cases", brute}});

  json unstable = json::array();
  for (const auto& t : inst)
    for (const auto& pt : t.sampler) {
      const HeckeFunction one = HeckeFunction::indicator(0);
      const long R = orbital_radius(F, one, t.kind, I, pt.gamma);
      if (R > cfg.max_tree_radius_F || !orbital_integral(F, one, t.kind, I, pt.gamma, R).stable)
        unstable.push_back(pt.label);
    }
  rep.add("radius stability on all sampled torus points", unstable.empty(), {{"unstable", unstable}});

  std::uniform_int_distribution<long> zr(-5, 5), nr(0, 10);
  long lim_fail = 0;
  long double worst = 0;
  for (int i = 0; i < 30; ++i) {
    const long zp = zr(rng), zpb = zr(rng), n = nr(rng);
    const auto r = vM_limit_check(F.q(), zp, zpb, n);
    worst = std::max(worst, r.error);
    if (!r.ok) ++lim_fail;
  }
  rep.add("weight limit identity on 30 random triples", lim_fail == 0,
          {{"failures", lim_fail}, {"max_extrapolation_error", static_cast<double>(worst)}});

  const Mat2 n_up = Mat2::base(1, F.uniformizer_pow(-1), 0, 1, eps);
  const Mat2 n_lo = Mat2::base(1, 0, F.uniformizer_pow(-1), 1, eps);
  auto D = [&](long a) { return diag_power(F, a); };
  // Hand evaluation: h_P = h_Pbar = a on diag(w^a, 1); (h_P, h_Pbar) = (0, -2) on n_up, (2, 0) on n_lo.
  const std::vector<std::pair<std::array<Mat2, 4>, long>> fixed{
      {{I, I, I, I}, 0},          {{D(1), I, D(1), I}, 0},     {{D(1), I, I, I}, -1},
      {{I, D(1), I, I}, -1},      {{D(2), I, I, D(1)}, -3},    {{n_up, I, I, I}, -2},
      {{I, n_lo, I, I}, -2},      {{D(-1), I, D(-1), I}, 0},   {{D(1), D(1), I, I}, 0},
      {{I, n_up, D(3), I}, -3}};
  long wfail = 0;
  for (const auto& [m, expect] : fixed)
    if (weight_vM0(F, m[0], m[1], m[2], m[3]) != expect) ++wfail;
  rep.add("weight_vM0 on 10 hand-evaluated cases", wfail == 0, {{"failures", wfail}});

  bool wbrute = true;
  for (std::size_t i = 0; i < msamp.size(); i += 4) {
    const HeckeFunction one = HeckeFunction::indicator(0);
    wbrute = wbrute && weighted_orbital_integral(F, one, one, I, msamp[i].gamma, 2).raw ==
                           weighted_orbital_bruteforce(F, one, one, I, msamp[i].gamma, 2);
  }
  rep.add("weighted orbital integral vs brute force at radius 2", wbrute);

  const std::vector<SigmaTorusInstance> split{inst[0]};
  std::optional<Rational> ratio;
  bool same = true;
  long used = 0;
  json rows = json::array();
  for (const auto& [f1, f2] : cfg.pairs) {
    const Rational m = spectral_asymptote(F, f1, f2, k.formal_degree).m_C1C1_at_1;
    if (m.is_zero()) continue;
    const Rational r = geometric_asymptote(F, f1, f2, split).bilinear_M / m;
    if (!ratio) ratio = r;
    same = same && r == *ratio;
    ++used;
    rows.push_back({{"pair", pair_json(f1, f2)}, {"ratio", rs(r)}});
  }
  rep.add("geometric bilinear form / m_C(1)C(1) is pair-independent", same && used >= 3,
          {{"pairs_used", used}, {"rows", rows}});
}

// ---------------------------------------------------------------------------------------------

void suite_kernel(const RunConfig& cfg, SuiteReport& rep, std::ostream& log) {
  const LocalField F = cfg.field();
  const Constants k = ensure_constants(cfg, log);
  const auto inst = torus_instances(cfg, k);
  for (std::size_t i = 0; i < cfg.pairs.size(); ++i) {
    const auto& [f1, f2] = cfg.pairs[i];
    const auto sa = spectral_asymptote(F, f1, f2, k.formal_degree);
    const auto ga = geometric_asymptote(F, f1, f2, inst);
    const KernelReport kr =
        compare_report(F, f1, f2, cfg.n_max, {sa.slope, sa.intercept}, LinearPrediction{ga.slope, ga.intercept});
    const std::string tag = "pair" + std::to_string(i);
    json rows = json::array();
    for (const auto& r : kr.rows)
      rows.push_back({{"n", r.n},
                      {"K_n", rs(r.K)},
                      {"spectral_pred", rs(r.spectral_pred)},
                      {"geometric_pred", rs(*r.geometric_pred)},
                      {"residual_spectral", rs(r.residual_spectral)},
                      {"residual_geometric", rs(*r.residual_geometric)},
                      {"first_difference", r.first_difference ? json(rs(*r.first_difference)) : json(nullptr)}});
    const json table = {{"pair", pair_json(f1, f2)}, {"onset", kr.onset}, {"rows", rows}};
    rep.files.emplace_back("kernel_" + tag + ".csv", kr.csv());
    rep.files.emplace_back("kernel_" + tag + ".json", table.dump(2) + "\n");
    rep.data[tag] = table;

    const long bound = std::max(0L, f1.max_height()) + std::max(0L, f2.max_height()) + 1;
    const bool zero_pair = f1.coeffs.empty() || f2.coeffs.empty();
    rep.add(tag + " slope matches spectral", zero_pair || (kr.slope_matches_spectral && kr.onset <= bound),
            {{"spectral_slope", rs(sa.slope)}, {"onset", kr.onset}, {"onset_bound", bound}});
    rep.add(tag + " slope matches geometric", zero_pair || kr.slope_matches_geometric.value_or(false),
            {{"geometric_slope", rs(ga.slope)}});
    bool oracle = true;
    for (long n = 0; n <= 2; ++n) oracle = oracle && truncated_kernel(F, f1, f2, n) == truncated_kernel_unfolded(F, f1, f2, n);
    rep.add(tag + " cell path equals unfolded enumeration for n <= 2", oracle);
    if (is_indicator_pair(f1, f2)) {
      bool exact = true;
      for (const auto& r : kr.rows) exact = exact && r.residual_spectral.is_zero();
      rep.add(tag + " indicator residual identically zero", exact);
    }
  }
}

// ---------------------------------------------------------------------------------------------

void suite_trace_formula(const RunConfig& cfg, SuiteReport& rep, std::ostream& log) {
  const LocalField F = cfg.field();
  const Constants k = ensure_constants(cfg, log);
  const auto inst = torus_instances(cfg, k);
  const long n = cfg.n_max;
  for (std::size_t i = 0; i < cfg.pairs.size(); ++i) {
    const auto& [f1, f2] = cfg.pairs[i];
    const auto sa = spectral_asymptote(F, f1, f2, k.formal_degree);
    const auto ga = geometric_asymptote(F, f1, f2, inst);
    const Rational kn = truncated_kernel(F, f1, f2, n), km = truncated_kernel(F, f1, f2, n - 1);
    const Rational slope = kn - km, intercept = kn - slope * Rational(n);
    const std::string tag = "pair" + std::to_string(i);
    rep.add(tag + " kernel, spectral and geometric slopes agree", slope == sa.slope && slope == ga.slope,
            {{"pair", pair_json(f1, f2)},
             {"kernel_slope", rs(slope)},
             {"spectral_slope", rs(sa.slope)},
             {"geometric_slope", rs(ga.slope)}});
    rep.add(tag + " kernel intercept matches spectral", intercept == sa.intercept,
            {{"kernel_intercept", rs(intercept)},
             {"spectral_intercept", rs(sa.intercept)},
             {"geometric_intercept", rs(ga.intercept)},
             {"geometric_intercept_residual", rs(intercept - ga.intercept)}});
    rep.add(tag + " spectral slope equals d m_C(1)C(1)(f)", sa.slope == k.formal_degree * sa.m_C1C1_at_1);
  }

  const RatFunc z = RatFunc::z();
  const std::vector<SpectralDatumPlugin> plugins{
      {"case1", false, false, RatFunc(), RatFunc(), RatFunc()},
      {"case2", false, true, RatFunc(3) / (RatFunc(1) - z.scaled(Rational(1, 3))), RatFunc(), RatFunc()},
      {"case3", true, false, RatFunc(), RatFunc(2), RatFunc(2) + z - RatFunc(1)},
      {"case4", true, true, RatFunc(4) / (RatFunc(1) - z), RatFunc(2), RatFunc(-2)}};
  const auto& [f1, f2] = cfg.pairs.front();
  const auto with = spectral_asymptote(F, f1, f2, k.formal_degree, plugins);
  const auto without = spectral_asymptote(F, f1, f2, k.formal_degree);
  bool missing_rejected = false;
  try {
    spectral_asymptote(F, f1, f2, k.formal_degree, {{"missing", true, true, std::nullopt, RatFunc(2), RatFunc(-2)}});
  } catch (const MissingDataError&) {
    missing_rejected = true;
  }
  rep.add("ramified plug-ins do not change the spherical asymptote",
          with.slope == without.slope && with.intercept == without.intercept && missing_rejected);
}

}  // namespace

bool SuiteReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

void SuiteReport::add(std::string name, bool ok, json detail) { checks.push_back({std::move(name), ok, std::move(detail)}); }

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"asymptotics", "periods", "geometry", "kernel", "trace-formula"};
  return names;
}

SuiteReport run_suite(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  SuiteReport rep;
  rep.suite = name;
  if (name == "asymptotics") suite_asymptotics(cfg, rep);
  else if (name == "periods") suite_periods(cfg, rep);
  else if (name == "geometry") suite_geometry(cfg, rep, log);
  else if (name == "kernel") suite_kernel(cfg, rep, log);
  else if (name == "trace-formula") suite_trace_formula(cfg, rep, log);
  else throw ConfigError("unknown suite: " + name);
  return rep;
}

}  // namespace relform::app
