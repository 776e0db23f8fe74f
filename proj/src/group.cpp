#include "relform/group.hpp"

#include <algorithm>

#include "relform/errors.hpp"

namespace relform {

Mat2 Mat2::diag(const ExtScalar& a, const ExtScalar& d) {
  const ExtScalar zero(Rational(0), a.eps());
  return of(a, zero, zero, d);
}

Mat2 Mat2::adj() const {
  const Mat2& m = *this;
  return of(m(1, 1), -m(0, 1), -m(1, 0), m(0, 0));
}

Mat2 Mat2::inverse() const {
  const ExtScalar d = det();
  if (d.is_zero()) throw DomainError("singular matrix");
  return adj().scaled(d.inverse());
}

Mat2 Mat2::conj() const {
  Mat2 r;
  for (std::size_t i = 0; i < 4; ++i) r.e[i] = e[i].conj();
  return r;
}

Mat2 Mat2::scaled(const ExtScalar& s) const {
  Mat2 r;
  for (std::size_t i = 0; i < 4; ++i) r.e[i] = e[i] * s;
  return r;
}

bool Mat2::is_base() const {
  return std::all_of(e.begin(), e.end(), [](const ExtScalar& x) { return x.is_base(); });
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2::of(x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0), x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1),
                  x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0), x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1));
}

std::string Mat2::str() const {
  return "[" + e[0].str() + ", " + e[1].str() + "; " + e[2].str() + ", " + e[3].str() + "]";
}

long min_entry_valuation(const LocalField& F, const Mat2& g) {
  long m = kInfValuation;
  for (const auto& x : g.e) m = std::min(m, valuation(F, x));
  return m;
}

GroupElement::GroupElement(const LocalField& F, const Mat2& m) {
  if (m.det().is_zero()) throw DomainError("singular matrix is not a group element");
  const long mv = min_entry_valuation(F, m);
  for (const auto& x : m.e) {
    if (valuation(F, x) == mv) {
      m_ = m.scaled(x.inverse());
      return;
    }
  }
}

long cartan_height(const LocalField& F, const Mat2& g) {
  const ExtScalar d = g.det();
  if (d.is_zero()) throw DomainError("cartan height of a singular matrix");
  return valuation(F, d) - 2 * min_entry_valuation(F, g);
}

IwasawaHeights iwasawa_heights(const LocalField& F, const Mat2& x) {
  const long vd = valuation(F, x.det());
  const long bottom = std::min(valuation(F, x(1, 0)), valuation(F, x(1, 1)));
  const long top = std::min(valuation(F, x(0, 0)), valuation(F, x(0, 1)));
  return {vd - 2 * bottom, -(vd - 2 * top)};
}

int truncation_u(const LocalField& F, const Mat2& x, long n) { return cartan_height(F, x) <= n ? 1 : 0; }

ShiftConstant shift_constant(const LocalField& F, const Mat2& h) {
  const long vd = valuation(F, h.det());
  const long bottom = std::min(valuation(F, h(1, 0)), valuation(F, h(1, 1)));
  const long top = std::min(valuation(F, h(0, 0)), valuation(F, h(0, 1)));
  return {std::max(0L, bottom - top), vd - 2 * bottom};
}

Mat2 TreeVertex::matrix(const LocalField& F) const {
  const long eps = b.eps();
  return Mat2::of(ExtScalar(F.uniformizer_pow(e), eps), b, ExtScalar(Rational(0), eps),
                  ExtScalar(Rational(1), eps));
}

bool operator<(const TreeVertex& x, const TreeVertex& y) {
  if (x.dist != y.dist) return x.dist < y.dist;
  if (x.e != y.e) return x.e < y.e;
  if (x.b.a() != y.b.a()) return x.b.a() < y.b.a();
  return x.b.b() < y.b.b();
}

std::string TreeVertex::key() const { return std::to_string(e) + ":" + b.a().str() + ":" + b.b().str(); }

TreeVertex vertex_of(const LocalField& F, const Mat2& g_in) {
  // Column operations (right action of K) bring g to (α, β; 0, δ).
  Mat2 g = g_in;
  if (g.det().is_zero()) throw DomainError("vertex of a singular matrix");
  if (valuation(F, g(1, 1)) > valuation(F, g(1, 0))) {
    std::swap(g(0, 0), g(0, 1));
    std::swap(g(1, 0), g(1, 1));
  }
  const ExtScalar t = g(1, 0) / g(1, 1);
  g(0, 0) = g(0, 0) - t * g(0, 1);
  g(1, 0) = ExtScalar(Rational(0), g(1, 0).eps());
  const ExtScalar dinv = g(1, 1).inverse();
  const ExtScalar alpha = g(0, 0) * dinv;
  const ExtScalar beta = g(0, 1) * dinv;
  TreeVertex v;
  v.e = valuation(F, alpha);
  v.b = reduce_mod(F, beta, v.e);
  v.dist = v.e - 2 * std::min({v.e, valuation(F, v.b), 0L});
  return v;
}

long vertex_distance(const LocalField& F, const TreeVertex& x, const TreeVertex& y) {
  if (x.dist == 0) return y.dist;
  if (y.dist == 0) return x.dist;
  // adj(x) y = (ω^{e_y}, b_y - b_x; 0, ω^{e_x}).
  const ExtScalar db = y.b - x.b;
  const long m = std::min({x.e, y.e, db.is_zero() ? kInfValuation : valuation(F, db)});
  return x.e + y.e - 2 * m;
}

namespace {

// Residues of O/ω^a as the a-digit integers; over E, pairs of them.
void emit_sphere(const LocalField& F, long s, FieldKind k, std::vector<TreeVertex>& out) {
  const long q = F.q();
  const long eps = F.eps();
  if (s == 0) {
    out.push_back({0, ExtScalar(Rational(0), eps), 0});
    return;
  }
  for (long a = 0; a <= s; ++a) {
    // Lattice (ω^a, b; 0, ω^{s-a}) has normal form (ω^{2a-s}, b ω^{a-s}; 0, 1).
    const Rational scale = F.uniformizer_pow(a - s);
    long qa = 1;
    for (long i = 0; i < a; ++i) qa *= q;
    const long nb = (k == FieldKind::F) ? qa : qa * qa;
    for (long idx = 0; idx < nb; ++idx) {
      const long b1 = idx % qa;
      const long b2 = (k == FieldKind::F) ? 0 : idx / qa;
      if (a > 0 && a < s && b1 % q == 0 && b2 % q == 0) continue;
      if (a == 0 && idx > 0) continue;
      TreeVertex v;
      v.e = 2 * a - s;
      v.b = ExtScalar(Rational(b1) * scale, Rational(b2) * scale, eps);
      v.dist = s;
      out.push_back(std::move(v));
    }
  }
}

}  // namespace

std::vector<TreeVertex> tree_sphere(const LocalField& F, long r, FieldKind k) {
  std::vector<TreeVertex> out;
  emit_sphere(F, r, k, out);
  return out;
}

std::vector<TreeVertex> tree_ball(const LocalField& F, long r, FieldKind k, long max_radius) {
  if (r < 0) throw PreconditionError("negative radius");
  if (r > max_radius)
    throw ResourceError("tree radius " + std::to_string(r) + " exceeds cap " + std::to_string(max_radius));
  std::vector<TreeVertex> out;
  for (long s = 0; s <= r; ++s) emit_sphere(F, s, k, out);
  return out;
}

Rational ball_size(const LocalField& F, long r, FieldKind k) {
  Rational total(0);
  for (long s = 0; s <= r; ++s) total += sphere_measure(F, s, k);
  return total;
}

Rational sphere_measure(const LocalField& F, long r, FieldKind k) {
  if (r < 0) return Rational(0);
  if (r == 0) return Rational(1);
  const long kappa = branching(F, k);
  return Rational(kappa + 1) * pow_int(kappa, r - 1);
}

Rational HeckeFunction::at(long h) const {
  auto it = coeffs.find(h);
  return it == coeffs.end() ? Rational(0) : it->second;
}

Mat2 random_K(const LocalField& F, FieldKind k, std::mt19937_64& rng) {
  const long q = F.q();
  const long eps = F.eps();
  std::uniform_int_distribution<long> entry(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  auto draw = [&]() {
    // Denominators prime to q keep entries integral.
    long d = den(rng);
    while (d % q == 0) d = den(rng);
    const Rational a(entry(rng), d);
    const Rational b = (k == FieldKind::E) ? Rational(entry(rng), d) : Rational(0);
    return ExtScalar(a, b, eps);
  };
  for (;;) {
    Mat2 m = Mat2::of(draw(), draw(), draw(), draw());
    const ExtScalar d = m.det();
    if (!d.is_zero() && valuation(F, d) == 0) return m;
  }
}

Mat2 random_H(const LocalField& F, long max_height, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> h(0, max_height);
  const long eps = F.eps();
  const Mat2 m = Mat2::diag(ExtScalar(F.uniformizer_pow(h(rng)), eps), ExtScalar(Rational(1), eps));
  return random_K(F, FieldKind::F, rng) * m * random_K(F, FieldKind::F, rng);
}

}  // namespace relform
