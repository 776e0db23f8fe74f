#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "relform/padic.hpp"

namespace relform {

enum class FieldKind { F, E };

/// Default radius caps for tree enumeration.
inline constexpr long kMaxTreeRadiusF = 8;
inline constexpr long kMaxTreeRadiusE = 5;

/// 2x2 matrix over E (entries with b = 0 model F). Row-major.
struct Mat2 {
  std::array<ExtScalar, 4> e;

  const ExtScalar& operator()(int i, int j) const { return e[static_cast<std::size_t>(2 * i + j)]; }
  ExtScalar& operator()(int i, int j) { return e[static_cast<std::size_t>(2 * i + j)]; }

  static Mat2 of(const ExtScalar& a, const ExtScalar& b, const ExtScalar& c, const ExtScalar& d) {
    return {{a, b, c, d}};
  }
  static Mat2 base(const Rational& a, const Rational& b, const Rational& c, const Rational& d, long eps) {
    return of({a, eps}, {b, eps}, {c, eps}, {d, eps});
  }
  static Mat2 identity(long eps) { return base(1, 0, 0, 1, eps); }
  static Mat2 diag(const ExtScalar& a, const ExtScalar& d);

  ExtScalar det() const { return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0); }
  /// Adjugate; equals the inverse in PGL(2).
  Mat2 adj() const;
  Mat2 inverse() const;
  Mat2 conj() const;
  Mat2 scaled(const ExtScalar& s) const;
  bool is_base() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend bool operator==(const Mat2& x, const Mat2& y) { return x.e == y.e; }
  std::string str() const;
};

/// PGL(2) element stored in canonical scaling: divided by its first entry of
/// minimal valuation, so that entry is 1 and all entries are integral.
class GroupElement {
 public:
  GroupElement(const LocalField& F, const Mat2& m);
  const Mat2& matrix() const { return m_; }
  friend bool operator==(const GroupElement& x, const GroupElement& y) { return x.m_ == y.m_; }

 private:
  Mat2 m_;
};

long min_entry_valuation(const LocalField& F, const Mat2& g);

/// Tree distance of g·o from o: v(det g) - 2 min v(g_ij).
long cartan_height(const LocalField& F, const Mat2& g);

/// The M-height over E, twice the tree distance.
inline long g_height_E(long tree_distance) { return 2 * tree_distance; }

struct IwasawaHeights {
  long h_P;
  long h_Pbar;
};
IwasawaHeights iwasawa_heights(const LocalField& F, const Mat2& x);

/// 1 iff cartan_height(x) <= n.
int truncation_u(const LocalField& F, const Mat2& x, long n);

struct ShiftConstant {
  long N0;
  long X_h;
};
ShiftConstant shift_constant(const LocalField& F, const Mat2& h);

/// Vertex g·o in normal form (ω^e, b; 0, 1) with b reduced mod ω^e.
struct TreeVertex {
  long e = 0;
  ExtScalar b;
  long dist = 0;  // distance to the base vertex

  Mat2 matrix(const LocalField& F) const;
  friend bool operator==(const TreeVertex& x, const TreeVertex& y) { return x.e == y.e && x.b == y.b; }
  friend bool operator<(const TreeVertex& x, const TreeVertex& y);
  std::string key() const;
};

/// Normal form of the vertex g·o.
TreeVertex vertex_of(const LocalField& F, const Mat2& g);
long vertex_distance(const LocalField& F, const TreeVertex& x, const TreeVertex& y);

inline long branching(const LocalField& F, FieldKind k) { return k == FieldKind::F ? F.q() : F.q() * F.q(); }

/// All vertices within distance r. Throws ResourceError above max_radius.
std::vector<TreeVertex> tree_ball(const LocalField& F, long r, FieldKind k, long max_radius);
/// Vertices at exactly distance r (no cap).
std::vector<TreeVertex> tree_sphere(const LocalField& F, long r, FieldKind k);
/// Number of vertices within distance r.
Rational ball_size(const LocalField& F, long r, FieldKind k);

/// Haar measure of the Cartan cell of height r: 1 at r = 0, (κ+1)κ^{r-1} after.
Rational sphere_measure(const LocalField& F, long r, FieldKind k);

/// Bi-K-invariant function: height -> coefficient.
struct HeckeFunction {
  std::map<long, Rational> coeffs;

  Rational at(long h) const;
  long max_height() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }
  static HeckeFunction indicator(long h) { return {{{h, Rational(1)}}}; }
};

/// Random element of K = GL(2, O) over F (b = 0) or E, with small entries.
Mat2 random_K(const LocalField& F, FieldKind k, std::mt19937_64& rng);
/// Random element of H = GL(2, F) of Cartan height <= max_height.
Mat2 random_H(const LocalField& F, long max_height, std::mt19937_64& rng);

}  // namespace relform
