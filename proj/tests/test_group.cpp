#include <doctest.h>

#include <set>

#include "relform/errors.hpp"
#include "relform/group.hpp"

using namespace relform;

namespace {

Mat2 M(long a, long b, long c, long d, long eps = -1) { return Mat2::base(a, b, c, d, eps); }

Mat2 diag_q(const LocalField& F, long r) {
  return Mat2::base(F.uniformizer_pow(r), 0, 0, 1, F.eps());
}

// Smith normal form over Z_(q) for integer matrices: height = v(d2) - v(d1).
long smith_height(const LocalField& F, long a, long b, long c, long d) {
  const long v1 = std::min({F.v(Rational(a)), F.v(Rational(b)), F.v(Rational(c)), F.v(Rational(d))});
  const long vdet = F.v(Rational(a * d - b * c));
  return vdet - 2 * v1;
}

}  // namespace

TEST_CASE("cartan_height examples") {
  const LocalField F(3);
  CHECK(cartan_height(F, diag_q(F, 2)) == 2);
  CHECK(cartan_height(F, M(0, 1, 3, 0)) == 1);
  CHECK(cartan_height(F, M(1, 1, 1, 4)) == 1);
  CHECK(smith_height(F, 0, 1, 3, 0) == 1);
}

TEST_CASE("canonical scaling") {
  const LocalField F(3);
  const GroupElement g(F, M(3, 6, 9, 12));
  CHECK(g.matrix()(0, 0).a() == Rational(1));
  CHECK(min_entry_valuation(F, g.matrix()) == 0);
  CHECK(GroupElement(F, M(3, 6, 9, 12)) == GroupElement(F, M(1, 2, 3, 4)));
  CHECK_THROWS_AS(GroupElement(F, M(1, 2, 2, 4)), DomainError);
}

TEST_CASE("cartan_height is inverse- and bi-K-invariant") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    std::mt19937_64 rng(static_cast<std::uint64_t>(q) * 17);
    for (int i = 0; i < 50; ++i) {
      const Mat2 g = random_H(F, 4, rng);
      const long h = cartan_height(F, g);
      CHECK(cartan_height(F, g.inverse()) == h);
      const Mat2 k1 = random_K(F, FieldKind::F, rng), k2 = random_K(F, FieldKind::F, rng);
      CHECK(cartan_height(F, k1 * g * k2) == h);
      const Mat2 ke = random_K(F, FieldKind::E, rng);
      CHECK(cartan_height(F, ke * g) == h);
      CHECK(cartan_height(F, g * ke) == h);
    }
  }
}

TEST_CASE("iwasawa_heights examples") {
  const LocalField F(3);
  const auto d = iwasawa_heights(F, diag_q(F, 1));
  CHECK(d.h_P == 1);
  CHECK(d.h_Pbar == 1);
  std::mt19937_64 rng(2);
  const auto k = iwasawa_heights(F, random_K(F, FieldKind::F, rng));
  CHECK(k.h_P == 0);
  CHECK(k.h_Pbar == 0);
  const auto u = iwasawa_heights(F, Mat2::base(1, 0, Rational(1, 3), 1, -1));
  CHECK(u.h_P == 2);
  for (long r = 0; r < 6; ++r) {
    const auto m = iwasawa_heights(F, diag_q(F, r));
    CHECK(m.h_P == r);
    CHECK(m.h_Pbar == r);
  }
}

TEST_CASE("iwasawa h_P agrees with an explicit decomposition") {
  // x = n m k with m = diag(m1, m2): the bottom row of x is m2 times a primitive row.
  const LocalField F(3);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Mat2 x = random_H(F, 3, rng);
    const long vb = std::min(F.v(x(1, 0).a()), F.v(x(1, 1).a()));
    const long vm1 = F.v(x.det().a()) - vb;
    CHECK(iwasawa_heights(F, x).h_P == vm1 - vb);
  }
}

TEST_CASE("truncation_u examples") {
  const LocalField F(3);
  CHECK(truncation_u(F, Mat2::identity(-1), 0) == 1);
  CHECK(truncation_u(F, diag_q(F, 3), 2) == 0);
  CHECK(truncation_u(F, diag_q(F, 3), 3) == 1);
}

TEST_CASE("shift_constant examples") {
  const LocalField F(3);
  std::mt19937_64 rng(8);
  CHECK(shift_constant(F, random_K(F, FieldKind::F, rng)).X_h == 0);
  CHECK(shift_constant(F, M(1, 1, 1, 4)).X_h == 1);
  const auto s = shift_constant(F, Mat2::base(1, 0, 0, 3, -1));
  CHECK(s.X_h == -1);
  for (long r = 1; r < 8; ++r) CHECK(cartan_height(F, diag_q(F, r) * Mat2::base(1, 0, 0, 3, -1)) == r - 1);
}

TEST_CASE("shift constant property on random H elements") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    std::mt19937_64 rng(static_cast<std::uint64_t>(q) + 100);
    for (int i = 0; i < 200; ++i) {
      const Mat2 h = random_H(F, 2, rng);
      const auto s = shift_constant(F, h);
      for (long r = s.N0; r <= s.N0 + 6; ++r)
        CHECK(cartan_height(F, diag_q(F, r) * h) == r + s.X_h);
      if (s.N0 > 0) CHECK(cartan_height(F, diag_q(F, s.N0 - 1) * h) != s.N0 - 1 + s.X_h);
    }
  }
}

TEST_CASE("tree_ball examples and counts") {
  const LocalField F(3);
  CHECK(tree_ball(F, 2, FieldKind::F, 8).size() == 17);
  CHECK(tree_ball(F, 0, FieldKind::E, 5).size() == 1);
  CHECK(tree_ball(F, 1, FieldKind::E, 5).size() == 11);
  CHECK_THROWS_AS(tree_ball(F, 9, FieldKind::F, 8), ResourceError);
  for (long R = 0; R <= 6; ++R)
    CHECK(Rational(static_cast<long>(tree_ball(F, R, FieldKind::F, 8).size())) == ball_size(F, R, FieldKind::F));
  for (long R = 0; R <= 3; ++R)
    CHECK(Rational(static_cast<long>(tree_ball(F, R, FieldKind::E, 5).size())) == ball_size(F, R, FieldKind::E));
}

TEST_CASE("tree vertices are distinct, normalized, at the stated distance") {
  for (long q : {3L, 5L}) {
    const LocalField F(q);
    const long R = q == 3 ? 4 : 3;
    for (FieldKind k : {FieldKind::F, FieldKind::E}) {
      const auto ball = tree_ball(F, k == FieldKind::E ? R - 1 : R, k, 8);
      std::set<std::string> keys;
      for (const auto& v : ball) {
        keys.insert(v.key());
        CHECK(cartan_height(F, v.matrix(F)) == v.dist);
        const TreeVertex w = vertex_of(F, v.matrix(F));
        CHECK(w == v);
        CHECK(w.dist == v.dist);
      }
      CHECK(keys.size() == ball.size());
    }
  }
}

TEST_CASE("vertex_of is right-K-invariant") {
  const LocalField F(3);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const Mat2 g = random_H(F, 3, rng) * random_K(F, FieldKind::E, rng);
    const TreeVertex v = vertex_of(F, g);
    CHECK(vertex_of(F, g * random_K(F, FieldKind::E, rng)) == v);
    CHECK(v.dist == cartan_height(F, g));
  }
}

TEST_CASE("sphere_measure examples") {
  const LocalField F(3);
  CHECK(sphere_measure(F, 0, FieldKind::F) == Rational(1));
  CHECK(sphere_measure(F, 1, FieldKind::F) == Rational(4));
  CHECK(sphere_measure(F, 3, FieldKind::F) == Rational(36));
  CHECK(sphere_measure(F, 3, FieldKind::F) == Rational(4, 3) * Rational(27));
  CHECK(sphere_measure(F, 2, FieldKind::E) == Rational(90));
}

TEST_CASE("vertex distance is a tree metric on a small ball") {
  const LocalField F(3);
  const auto ball = tree_ball(F, 2, FieldKind::F, 8);
  for (std::size_t i = 0; i < ball.size(); i += 3)
    for (std::size_t j = 0; j < ball.size(); j += 2) {
      const long d = vertex_distance(F, ball[i], ball[j]);
      CHECK(d == vertex_distance(F, ball[j], ball[i]));
      CHECK(d <= ball[i].dist + ball[j].dist);
      CHECK((d + ball[i].dist + ball[j].dist) % 2 == 0);
      CHECK((d == 0) == (ball[i] == ball[j]));
      CHECK(d == cartan_height(F, ball[i].matrix(F).adj() * ball[j].matrix(F)));
    }
}
