#include "relform/geometric.hpp"

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "relform/errors.hpp"
#include "relform/parallel.hpp"

namespace relform {

namespace {

using Row6 = std::array<Rational, 6>;

Rational det_rational(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    const Rational inv = a[c][c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      const Rational m = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
    }
  }
  return det;
}

// Coordinates of a traceless matrix in the F-basis {H, √ε H, E12, √ε E12, E21, √ε E21}.
Row6 pgl2_coords(const Mat2& z) {
  return {z(0, 0).a(), z(0, 0).b(), z(0, 1).a(), z(0, 1).b(), z(1, 0).a(), z(1, 0).b()};
}

Mat2 pgl2_basis(std::size_t i, long eps) {
  const ExtScalar zero(Rational(0), eps);
  const ExtScalar s = (i % 2 == 0) ? ExtScalar(Rational(1), eps) : ExtScalar(Rational(0), Rational(1), eps);
  switch (i / 2) {
    case 0: return Mat2::of(s, zero, zero, -s);
    case 1: return Mat2::of(zero, s, zero, zero);
    default: return Mat2::of(zero, zero, s, zero);
  }
}

Mat2 diag_power(const LocalField& F, long k) { return Mat2::base(F.uniformizer_pow(k), 0, 0, 1, F.eps()); }

// Index k of the standard-apartment vertex nearest to v.
long apartment_projection(const LocalField& F, const TreeVertex& v) {
  long best_k = 0, best_d = -1;
  for (long k = -v.dist; k <= v.dist; ++k) {
    const long d = vertex_distance(F, v, vertex_of(F, diag_power(F, k)));
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best_k = k;
    }
  }
  return best_k;
}

long apartment_projection_matrix(const LocalField& F, const Mat2& h, long reach) {
  long best_k = 0, best_d = -1;
  for (long k = -reach; k <= reach; ++k) {
    const long d = cartan_height(F, diag_power(F, -k) * h);
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best_k = k;
    }
  }
  return best_k;
}

Rational q_power(const LocalField& F, long v, long denom) {
  if (v % denom != 0) throw DomainError("|Δ_σ| normalization is not a rational power of q");
  return pow_int(F.q(), -v / denom);
}

struct FoldedPair {
  Rational value;
  long hP1, hPb1, hP2, hPb2;
  Mat2 m1, m2;
  bool inner;  // both vertices within radius - 1
};

// Pairs (v, w) of F-vertices within radius with f(d(v, g w)) != 0; v restricted to the
// fundamental domain of the apartment translations when folding.
std::vector<FoldedPair> folded_pairs(const LocalField& F, const HeckeFunction& f, const Mat2& g, long radius,
                                     bool fold) {
  std::vector<FoldedPair> out;
  if (f.coeffs.empty() || radius < 0) return out;
  const auto ball = tree_ball(F, radius, FieldKind::F, kMaxTreeRadiusF);
  std::vector<TreeVertex> gw;
  gw.reserve(ball.size());
  for (const auto& w : ball) gw.push_back(vertex_of(F, g * w.matrix(F)));
  std::vector<std::vector<FoldedPair>> per_v(ball.size());
  parallel_for(ball.size(), [&](std::size_t i) {
    const TreeVertex& v = ball[i];
    if (fold && apartment_projection(F, v) != 0) return;
    const Mat2 mv = v.matrix(F);
    const auto hv = iwasawa_heights(F, mv);
    for (std::size_t j = 0; j < ball.size(); ++j) {
      const Rational c = f.at(vertex_distance(F, v, gw[j]));
      if (c.is_zero()) continue;
      const Mat2 mw = ball[j].matrix(F);
      const auto hw = iwasawa_heights(F, mw);
      const bool inner = v.dist < radius && ball[j].dist < radius;
      per_v[i].push_back({c, hv.h_P, hv.h_Pbar, hw.h_P, hw.h_Pbar, mv, mw, inner});
    }
  });
  for (auto& v : per_v)
    for (auto& p : v) out.push_back(std::move(p));
  return out;
}

// Raw sums at radius and radius - 1.
std::pair<Rational, Rational> raw_orbital(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& g,
                                          long radius) {
  Rational outer(0), inner(0);
  for (const auto& p : folded_pairs(F, f, g, radius, kind == TorusKind::split_M)) {
    outer += p.value;
    if (p.inner) inner += p.value;
  }
  return {outer, inner};
}

std::pair<Rational, Rational> raw_weighted(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                           const Mat2& g, long radius, const WeightFn& weight) {
  const auto p1 = folded_pairs(F, f1, g, radius, true);
  const auto p2 = folded_pairs(F, f2, g, radius, true);
  Rational outer(0), inner(0);
  for (const auto& x : p1)
    for (const auto& y : p2) {
      Rational w;
      if (weight) {
        w = weight(x.m1, y.m1, x.m2, y.m2);
      } else {
        const long zP = std::min(x.hPb1 - y.hP1, x.hPb2 - y.hP2);
        const long zPbar = -std::min(y.hPb1 - x.hP1, y.hPb2 - x.hP2);
        w = Rational(zP - zPbar);
      }
      const Rational term = x.value * y.value * w;
      outer += term;
      if (x.inner && y.inner) inner += term;
    }
  return {outer, inner};
}

std::optional<Mat2> torus_conj(const LocalField& F, TorusKind kind) {
  if (kind == TorusKind::anisotropic) return anisotropic_conjugator(F);
  return std::nullopt;
}

// Canonical diag(A)-orbit representatives of pairs within radius, by matrices only.
std::map<std::string, std::pair<Rational, std::pair<Mat2, Mat2>>> brute_pairs(const LocalField& F,
                                                                               const HeckeFunction& f,
                                                                               const Mat2& g, long radius) {
  std::map<std::string, std::pair<Rational, std::pair<Mat2, Mat2>>> orbits;
  const auto ball = tree_ball(F, radius, FieldKind::F, kMaxTreeRadiusF);
  for (const auto& h : ball)
    for (const auto& l : ball) {
      const Mat2 mh = h.matrix(F), ml = l.matrix(F);
      const Rational c = f.at(cartan_height(F, mh.adj() * g * ml));
      if (c.is_zero()) continue;
      const long k = apartment_projection_matrix(F, mh, radius);
      const Mat2 th = diag_power(F, -k) * mh, tl = diag_power(F, -k) * ml;
      const TreeVertex vh = vertex_of(F, th), vl = vertex_of(F, tl);
      orbits.emplace(vh.key() + "|" + vl.key(), std::make_pair(c, std::make_pair(vh.matrix(F), vl.matrix(F))));
    }
  return orbits;
}

}  // namespace

Mat2 anisotropic_conjugator(const LocalField& F) {
  const long eps = F.eps();
  return Mat2::of(ExtScalar(Rational(0), Rational(1), eps), ExtScalar(Rational(0), Rational(-1), eps),
                  ExtScalar(Rational(1), eps), ExtScalar(Rational(1), eps));
}

Rational delta_sigma(const LocalField& F, const Mat2& g, const std::optional<Mat2>& conj) {
  Mat2 y = g.inverse() * g.conj();
  if (conj) y = conj->inverse() * y * *conj;
  const Mat2 yinv = y.inverse();
  std::array<Row6, 6> cols;
  for (std::size_t i = 0; i < 6; ++i) cols[i] = pgl2_coords(y * pgl2_basis(i, F.eps()) * yinv);
  // Ad(y) must map s = span{H, √ε H} into itself.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t r = 2; r < 6; ++r)
      if (!cols[i][r].is_zero()) throw PreconditionError("delta_sigma: Ad(g^-1 σ(g)) does not preserve the torus");
  std::vector<std::vector<Rational>> block(4, std::vector<Rational>(4));
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) block[r][c] = (r == c ? Rational(1) : Rational(0)) - cols[c + 2][r + 2];
  return det_rational(block);
}

Rational delta_sigma_closed_form(const ExtScalar& u) {
  const ExtScalar one(Rational(1), u.eps());
  return galois_norm(one - u * u) * galois_norm(one - (u * u).inverse());
}

std::vector<ExtScalar> norm_one_classes(const LocalField& F, long k) {
  const long q = F.q(), eps = F.eps();
  long qk = 1;
  for (long i = 0; i < k; ++i) qk *= q;
  std::vector<ExtScalar> out;
  std::set<std::string> seen;
  for (long a = 0; a < qk; ++a)
    for (long b = 0; b < qk; ++b) {
      if (a % q == 0 && b % q == 0) continue;
      const ExtScalar zeta(Rational(a), Rational(b), eps);
      const ExtScalar u = zeta / zeta.conj();
      if (seen.insert(reduce_mod(F, u, k).str()).second) out.push_back(u);
    }
  return out;
}

std::vector<TorusPoint> sample_M_sigma(const LocalField& F, long k) {
  if (k < 1) throw ConfigError("congruence level k must be >= 1");
  const auto classes = norm_one_classes(F, k);
  const Rational w(1, static_cast<long>(classes.size()));
  const ExtScalar one(Rational(1), F.eps()), zero(Rational(0), F.eps());
  std::vector<TorusPoint> out;
  for (const auto& u : classes) {
    if (reduce_mod(F, u - one, k).is_zero() || reduce_mod(F, u + one, k).is_zero()) continue;
    out.push_back({Mat2::of(u, zero, zero, one), w, "u=" + u.str()});
  }
  return out;
}

std::vector<TorusPoint> sample_anisotropic_sigma(const LocalField& F, long k, long m_max) {
  if (k < 1) throw ConfigError("congruence level k must be >= 1");
  const long q = F.q(), eps = F.eps();
  long qk = 1;
  for (long i = 0; i < k; ++i) qk *= q;
  const Rational w(1, (q - 1) * (qk / q));
  const Mat2 c = anisotropic_conjugator(F), cinv = c.inverse();
  std::vector<TorusPoint> out;
  for (long m = -m_max; m <= m_max; ++m)
    for (long u = 1; u < qk; ++u) {
      if (u % q == 0) continue;
      if (m == 0 && ((u - 1) % qk == 0 || (u + 1) % qk == 0)) continue;
      const Rational s = F.uniformizer_pow(m) * Rational(u);
      out.push_back({c * Mat2::base(s, 0, 0, 1, eps) * cinv, w, "s=" + s.str()});
    }
  return out;
}

long orbital_radius(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& x_m, const Mat2& gamma) {
  const Mat2 g = x_m * gamma;
  const Rational delta = delta_sigma(F, g, torus_conj(F, kind));
  if (delta.is_zero()) throw DomainError("orbital_radius: point is not σ-regular");
  const long depth = std::abs(F.v(delta)) / 4;
  return std::max(0L, f.max_height()) + depth + cartan_height(F, g) + 1;
}

OrbitalResult orbital_integral(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& x_m,
                               const Mat2& gamma, long radius) {
  const Mat2 g = x_m * gamma;
  const Rational delta = delta_sigma(F, g, torus_conj(F, kind));
  if (delta.is_zero()) throw DomainError("orbital_integral: point is not σ-regular");
  OrbitalResult out;
  out.radius = radius;
  out.delta_valuation = F.v(delta);
  const auto [outer, inner] = raw_orbital(F, f, kind, g, radius);
  out.raw = outer;
  out.stable = radius > 0 && inner == outer;
  out.value = out.raw * q_power(F, out.delta_valuation, 4);
  return out;
}

Rational orbital_integral_bruteforce(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& x_m,
                                     const Mat2& gamma, long radius) {
  const Mat2 g = x_m * gamma;
  Rational acc(0);
  if (kind == TorusKind::split_M) {
    for (const auto& [key, entry] : brute_pairs(F, f, g, radius)) acc += entry.first;
    return acc;
  }
  const auto ball = tree_ball(F, radius, FieldKind::F, kMaxTreeRadiusF);
  for (const auto& h : ball)
    for (const auto& l : ball) acc += f.at(cartan_height(F, h.matrix(F).adj() * g * l.matrix(F)));
  return acc;
}

long weight_vM0(const LocalField& F, const Mat2& x1, const Mat2& y1, const Mat2& x2, const Mat2& y2) {
  const auto hx1 = iwasawa_heights(F, x1), hy1 = iwasawa_heights(F, y1);
  const auto hx2 = iwasawa_heights(F, x2), hy2 = iwasawa_heights(F, y2);
  const long z_P = std::min(hx1.h_Pbar - hy1.h_P, hx2.h_Pbar - hy2.h_P);
  const long z_Pbar = -std::min(hy1.h_Pbar - hx1.h_P, hy2.h_Pbar - hx2.h_P);
  return z_P - z_Pbar;
}

VMLimitResult vM_limit_check(long q, long z_P, long z_Pbar, long n) {
  const long double lq = std::log(static_cast<long double>(q));
  auto value = [&](long double lam) {
    const long double t1 = std::exp(lam * (n + z_P) * lq) / (1 - std::exp(-2 * lam * lq)) * (1 + std::exp(-lam * lq));
    const long double t2 = std::exp(lam * (-n + z_Pbar) * lq) / (1 - std::exp(2 * lam * lq)) * (1 + std::exp(lam * lq));
    return t1 + t2;
  };
  const long double v3 = value(1e-3L), v4 = value(1e-4L), v5 = value(1e-5L);
  const long double r1 = (10 * v4 - v3) / 9, r2 = (10 * v5 - v4) / 9;
  VMLimitResult out;
  out.extrapolated = (100 * r2 - r1) / 99;
  out.expected = 2 * n + 1 + z_P - z_Pbar;
  out.error = std::fabs(out.extrapolated - static_cast<long double>(out.expected));
  out.ok = out.error < 1e-6L;
  return out;
}

OrbitalResult weighted_orbital_integral(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                        const Mat2& x_m, const Mat2& gamma, long radius, const WeightFn& weight) {
  const Mat2 g = x_m * gamma;
  const Rational delta = delta_sigma(F, g);
  if (delta.is_zero()) throw DomainError("weighted_orbital_integral: point is not σ-regular");
  OrbitalResult out;
  out.radius = radius;
  out.delta_valuation = F.v(delta);
  const auto [outer, inner] = raw_weighted(F, f1, f2, g, radius, weight);
  out.raw = outer;
  out.stable = radius > 0 && inner == outer;
  out.value = out.raw * q_power(F, out.delta_valuation, 2);
  return out;
}

Rational weighted_orbital_bruteforce(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                     const Mat2& x_m, const Mat2& gamma, long radius) {
  const Mat2 g = x_m * gamma;
  const auto p1 = brute_pairs(F, f1, g, radius), p2 = brute_pairs(F, f2, g, radius);
  Rational acc(0);
  for (const auto& [k1, x] : p1)
    for (const auto& [k2, y] : p2)
      acc += x.first * y.first *
             Rational(weight_vM0(F, x.second.first, y.second.first, x.second.second, y.second.second));
  return acc;
}

Rational torus_product_integral(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                const SigmaTorusInstance& inst, std::size_t m, bool* stable) {
  Rational acc(0);
  for (const auto& pt : inst.sampler) {
    const long r1 = orbital_radius(F, f1, inst.kind, inst.x_m[m], pt.gamma);
    const long r2 = orbital_radius(F, f2, inst.kind, inst.x_m[m], pt.gamma);
    const auto a = orbital_integral(F, f1, inst.kind, inst.x_m[m], pt.gamma, r1);
    const auto b = orbital_integral(F, f2, inst.kind, inst.x_m[m], pt.gamma, r2);
    if (stable && !(a.stable && b.stable)) *stable = false;
    acc += pt.weight * a.value * b.value;
  }
  return acc;
}

Rational torus_weighted_integral(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                 const SigmaTorusInstance& inst, std::size_t m, bool* stable) {
  if (inst.kind != TorusKind::split_M) throw PreconditionError("weighted orbital integrals live on the split torus");
  Rational acc(0);
  for (const auto& pt : inst.sampler) {
    const long r = std::max(orbital_radius(F, f1, inst.kind, inst.x_m[m], pt.gamma),
                            orbital_radius(F, f2, inst.kind, inst.x_m[m], pt.gamma));
    const auto w = weighted_orbital_integral(F, f1, f2, inst.x_m[m], pt.gamma, r);
    if (stable && !w.stable) *stable = false;
    acc += pt.weight * w.value;
  }
  return acc;
}

GeometricAsymptote geometric_asymptote(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                       const std::vector<SigmaTorusInstance>& instances) {
  GeometricAsymptote out;
  for (const auto& inst : instances) {
    if (inst.x_m.empty() || inst.c0.size() != inst.x_m.size())
      throw ConfigError("torus instance needs one c0 constant per representative x_m");
    for (std::size_t m = 0; m < inst.x_m.size(); ++m) {
      const Rational mm = inst.c0[m] * torus_product_integral(F, f1, f2, inst, m, &out.stable);
      out.unweighted += mm;
      if (inst.kind == TorusKind::split_M) {
        out.bilinear_M += mm;
        out.weighted += inst.c0[m] * torus_weighted_integral(F, f1, f2, inst, m, &out.stable);
      }
    }
  }
  out.slope = Rational(2) * out.bilinear_M;
  out.intercept = out.unweighted + out.weighted;
  return out;
}

std::vector<SigmaTorusInstance> default_instances(const LocalField& F, long k, const Rational& c0_M,
                                                  const Rational& c0_aniso, long m_max) {
  const Mat2 one = Mat2::identity(F.eps());
  return {{TorusKind::split_M, sample_M_sigma(F, k), {one}, {c0_M}},
          {TorusKind::anisotropic, sample_anisotropic_sigma(F, k, m_max), {one}, {c0_aniso}}};
}

GeometricCalibration calibrate_geometric(const LocalField& F, long k, const Rational& indicator_slope,
                                         const Rational& indicator_intercept, long m_max) {
  const auto inst = default_instances(F, k, Rational(1), Rational(1), m_max);
  const HeckeFunction one = HeckeFunction::indicator(0);
  const Rational qm = torus_product_integral(F, one, one, inst[0], 0);
  const Rational qw = torus_weighted_integral(F, one, one, inst[0], 0);
  const Rational qa = torus_product_integral(F, one, one, inst[1], 0);
  if (qm.is_zero() || qa.is_zero()) throw InternalConsistencyError("calibration: vanishing indicator orbital integral");
  GeometricCalibration out;
  out.c0_M = indicator_slope / (Rational(2) * qm);
  out.c0_aniso = (indicator_intercept - out.c0_M * (qm + qw)) / qa;
  return out;
}

}  // namespace relform
