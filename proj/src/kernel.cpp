#include "relform/kernel.hpp"

#include <sstream>

#include "relform/errors.hpp"
#include "relform/parallel.hpp"

namespace relform {

namespace {

void add_to(HeckeElement& acc, long t, const Rational& c) {
  if (c.is_zero()) return;
  Rational& slot = acc[t];
  slot += c;
  if (slot.is_zero()) acc.erase(t);
}

HeckeElement times_T1(const HeckeElement& x, long kappa) {
  HeckeElement out;
  for (const auto& [t, c] : x) {
    add_to(out, t + 1, c);
    if (t == 1) add_to(out, 0, c * Rational(kappa + 1));
    if (t >= 2) add_to(out, t - 1, c * Rational(kappa));
  }
  return out;
}

HeckeElement combine(const HeckeElement& x, const Rational& a, const HeckeElement& y, const Rational& b) {
  HeckeElement out;
  for (const auto& [t, c] : x) add_to(out, t, a * c);
  for (const auto& [t, c] : y) add_to(out, t, b * c);
  return out;
}

// T_a · y via T_{a+1} = T_1 T_a - c_a T_{a-1}, c_1 = κ + 1, c_a = κ after.
HeckeElement basis_times(long a, const HeckeElement& y, long kappa) {
  if (a == 0) return y;
  HeckeElement prev = y, cur = times_T1(y, kappa);
  for (long k = 1; k < a; ++k) {
    const long c = k == 1 ? kappa + 1 : kappa;
    HeckeElement next = combine(times_T1(cur, kappa), Rational(1), prev, Rational(-c));
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

long kappa_E(const LocalField& F) { return branching(F, FieldKind::E); }

void check_cap(long n, long cap, const char* what) {
  if (n < 0) throw PreconditionError(std::string(what) + ": negative height");
  if (n > cap) throw ResourceError(std::string(what) + ": height " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

// Pairs (v, w) with v = g·o, w = g·y·o for d(o, y·o) = s, weighted by f2(d(o, v)).
struct UnfoldedTerm {
  TreeVertex w;
  Rational weight;
};

std::vector<UnfoldedTerm> unfolded_terms(const LocalField& F, const HeckeFunction& f2, long s) {
  std::vector<UnfoldedTerm> out;
  if (f2.coeffs.empty()) return out;
  const auto sphere = tree_sphere(F, s, FieldKind::E);
  for (const auto& [a, c] : f2.coeffs) {
    if (c.is_zero()) continue;
    for (const auto& v : tree_sphere(F, a, FieldKind::E)) {
      const Mat2 gv = v.matrix(F);
      for (const auto& u : sphere) out.push_back({vertex_of(F, gv * u.matrix(F)), c});
    }
  }
  return out;
}

Rational unfolded_sum(const LocalField& F, const HeckeFunction& f1, const std::vector<UnfoldedTerm>& terms,
                      const TreeVertex& xo, long s) {
  Rational acc(0);
  for (const auto& t : terms) {
    const Rational v1 = f1.at(vertex_distance(F, xo, t.w));
    if (!v1.is_zero()) acc += t.weight * v1;
  }
  return acc / sphere_measure(F, s, FieldKind::E);
}

}  // namespace

HeckeElement hecke_basis(long t) { return {{t, Rational(1)}}; }

HeckeElement hecke_product(const HeckeElement& x, const HeckeElement& y, long kappa) {
  HeckeElement out;
  for (const auto& [a, c] : x)
    for (const auto& [t, d] : basis_times(a, y, kappa)) add_to(out, t, c * d);
  return out;
}

Rational kernel_value(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long r, long s) {
  check_cap(r, kKernelCellCap, "kernel_value");
  check_cap(s, kKernelCellCap, "kernel_value");
  const long kappa = kappa_E(F);
  HeckeElement e1, e2;
  for (const auto& [h, c] : f1.coeffs) add_to(e1, h, c);
  for (const auto& [h, c] : f2.coeffs) add_to(e2, h, c);
  // Σ_{v,w} f2(d(o,v)) [d(v,w) = s] f1(d(w, m_r o)) is the (o, m_r o) entry of T(f2) T_s T(f1).
  const HeckeElement prod = hecke_product(hecke_product(e2, hecke_basis(s), kappa), e1, kappa);
  const auto it = prod.find(r);
  if (it == prod.end()) return Rational(0);
  return it->second / sphere_measure(F, s, FieldKind::E);
}

Rational kernel_value_unfolded(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                               const Mat2& x, const Mat2& y) {
  const long s = cartan_height(F, y);
  check_cap(s, kKernelUnfoldedCap, "kernel_value_unfolded");
  return unfolded_sum(F, f1, unfolded_terms(F, f2, s), vertex_of(F, x), s);
}

Rational truncated_kernel(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long n) {
  check_cap(n, kKernelCellCap, "truncated_kernel");
  const std::size_t m = static_cast<std::size_t>(n + 1);
  std::vector<Rational> cells(m * m);
  parallel_for(m * m, [&](std::size_t i) {
    const long r = static_cast<long>(i / m), s = static_cast<long>(i % m);
    cells[i] = sphere_measure(F, r, FieldKind::F) * sphere_measure(F, s, FieldKind::F) * kernel_value(F, f1, f2, r, s);
  });
  Rational acc(0);
  for (const auto& c : cells) acc += c;
  return acc;
}

Rational truncated_kernel_unfolded(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long n) {
  check_cap(n, kKernelUnfoldedCap, "truncated_kernel_unfolded");
  const auto ball = tree_ball(F, n, FieldKind::F, kKernelUnfoldedCap);
  std::vector<std::vector<UnfoldedTerm>> terms;
  for (long s = 0; s <= n; ++s) terms.push_back(unfolded_terms(F, f2, s));
  // K_f(x, y) sees y only through s = d(o, y·o), so one inner sum per (x, s).
  std::vector<Rational> per_x(ball.size() * terms.size());
  parallel_for(per_x.size(), [&](std::size_t i) {
    const std::size_t xi = i / terms.size();
    const long s = static_cast<long>(i % terms.size());
    per_x[i] = unfolded_sum(F, f1, terms[static_cast<std::size_t>(s)], ball[xi], s);
  });
  Rational acc(0);
  for (std::size_t xi = 0; xi < ball.size(); ++xi)
    for (const auto& y : ball) acc += per_x[xi * terms.size() + static_cast<std::size_t>(cartan_height(F, y.matrix(F)))];
  return acc;
}

KernelReport compare_report(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long n_max,
                            const LinearPrediction& spectral, const std::optional<LinearPrediction>& geometric) {
  check_cap(n_max, kKernelCellCap, "compare_report");
  KernelReport rep;
  rep.spectral = spectral;
  rep.geometric = geometric;
  for (long n = 0; n <= n_max; ++n) {
    KernelRow row;
    row.n = n;
    row.K = truncated_kernel(F, f1, f2, n);
    row.spectral_pred = spectral.at(n);
    row.residual_spectral = row.K - row.spectral_pred;
    if (geometric) {
      row.geometric_pred = geometric->at(n);
      row.residual_geometric = row.K - *row.geometric_pred;
    }
    if (n > 0) row.first_difference = row.K - rep.rows.back().K;
    rep.rows.push_back(row);
  }
  for (long n = n_max; n >= 1; --n) {
    if (*rep.rows[static_cast<std::size_t>(n)].first_difference != spectral.slope) break;
    rep.onset = n;
  }
  // A single trailing difference is too weak to call the slope stable.
  rep.slope_matches_spectral = rep.onset != -1 && rep.onset < n_max;
  if (geometric) rep.slope_matches_geometric = rep.slope_matches_spectral && geometric->slope == spectral.slope;
  return rep;
}

std::string KernelReport::csv() const {
  std::ostringstream os;
  os << "n,K_n,spectral_pred,geometric_pred,residual_spectral,residual_geometric\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.K.str() << ',' << r.spectral_pred.str() << ','
       << (r.geometric_pred ? r.geometric_pred->str() : "") << ',' << r.residual_spectral.str() << ','
       << (r.residual_geometric ? r.residual_geometric->str() : "") << '\n';
  }
  return os.str();
}

}  // namespace relform
