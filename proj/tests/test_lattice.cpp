#include <gtest/gtest.h>

#include <random>
#include <set>

#include "contact/lattice.hpp"
#include "contact/named_lattices.hpp"

using namespace contact;

namespace {

std::set<QVector, QVectorLess> ambient_set(const std::vector<LatticeVector>& v) {
  std::set<QVector, QVectorLess> s;
  for (const auto& x : v) s.insert(x.ambient);
  return s;
}

QVector qv(std::initializer_list<Rational> l) { return QVector(l); }

}  // namespace

TEST(ShortestVectors, Z1) {
  const auto m = shortest_vectors(build_named_lattice("zn 1"));
  EXPECT_EQ(m.min_norm_sq, Rational(1));
  EXPECT_EQ(ambient_set(m.vectors), (std::set<QVector, QVectorLess>{qv({-1}), qv({1})}));
}

TEST(ShortestVectors, A2MatchesCoefficientBox) {
  const Lattice l = build_named_lattice("an 2");
  const auto m = shortest_vectors(l);
  EXPECT_EQ(m.min_norm_sq, Rational(2));
  std::set<QVector, QVectorLess> brute;
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b)
      if ((a || b) && l.norm_sq(l.ambient({a, b})) == 2) brute.insert(l.ambient({a, b}));
  EXPECT_EQ(m.size(), 6u);
  EXPECT_EQ(ambient_set(m.vectors), brute);
}

TEST(ShortestVectors, RootLatticeCounts) {
  EXPECT_EQ(shortest_vectors(build_named_lattice("d4")).size(), 24u);
  EXPECT_EQ(shortest_vectors(build_named_lattice("e6")).size(), 72u);
  EXPECT_EQ(shortest_vectors(build_named_lattice("e7")).size(), 126u);
  EXPECT_EQ(shortest_vectors(build_named_lattice("e8")).size(), 240u);
}

TEST(ShortestVectors, NegationClosedAndNormUniform) {
  for (const char* name : {"an 3", "d5", "e7", "zn 3"}) {
    const Lattice l = build_named_lattice(name);
    const auto m = shortest_vectors(l);
    const auto s = ambient_set(m.vectors);
    for (const auto& v : m.vectors) {
      EXPECT_EQ(l.norm_sq(v.ambient), m.min_norm_sq) << name;
      EXPECT_TRUE(s.count(-v.ambient)) << name;
    }
  }
}

TEST(ShortestVectors, IndependentOfBasis) {
  const Lattice l = build_named_lattice("d4");
  // b1 += b2, b3 -= 2 b4: unimodular
  QMatrix u = QMatrix::identity(4);
  u(0, 1) = Rational(1);
  u(2, 3) = Rational(-2);
  const Lattice t("d4 other", u * l.basis(), l.form());
  EXPECT_EQ(ambient_set(shortest_vectors(l).vectors), ambient_set(shortest_vectors(t).vectors));
}

TEST(VectorsInBall, Z2Unit) {
  const auto pts = vectors_in_ball(build_named_lattice("zn 2"), qv({0, 0}), Rational(1));
  EXPECT_EQ(pts.size(), 5u);
}

TEST(VectorsInBall, A2DeepHole) {
  const Lattice l = build_named_lattice("an 2");
  const QVector hole = qv({Rational(1, 3), Rational(1, 3)});
  EXPECT_EQ(l.norm_sq(hole), Rational(2, 3));
  EXPECT_EQ(vectors_in_ball(l, hole, Rational(2, 3)).size(), 3u);
  EXPECT_EQ(closest_vectors(l, hole).first, Rational(2, 3));
}

TEST(VectorsInBall, MonotoneAndExact) {
  const Lattice l = build_named_lattice("e6");
  const QVector c = qv({Rational(1, 2), Rational(1, 3), 0, Rational(-1, 4), 0, 1});
  std::size_t prev = 0;
  for (int r = 1; r <= 6; ++r) {
    const auto pts = vectors_in_ball(l, c, Rational(r, 2));
    EXPECT_GE(pts.size(), prev);
    prev = pts.size();
    for (const auto& p : pts) EXPECT_LE(l.norm_sq(p.ambient - c), Rational(r, 2));
    // the complement within a larger ball lies outside
    for (const auto& p : vectors_in_ball(l, c, Rational(r + 1, 2)))
      if (!std::binary_search(pts.begin(), pts.end(), p)) EXPECT_GT(l.norm_sq(p.ambient - c), Rational(r, 2));
  }
}

TEST(ClosestVectors, LatticePointAndMidpoint) {
  const Lattice l = build_named_lattice("an 3");
  const QVector p = l.ambient({1, -2, 3});
  auto [d, pts] = closest_vectors(l, p);
  EXPECT_EQ(d, Rational(0));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].ambient, p);
  auto [d1, pts1] = closest_vectors(build_named_lattice("zn 1"), qv({Rational(1, 2)}));
  EXPECT_EQ(d1, Rational(1, 4));
  EXPECT_EQ(ambient_set(pts1), (std::set<QVector, QVectorLess>{qv({0}), qv({1})}));
}

TEST(ClosestVectors, NeverFartherThanOrigin) {
  const Lattice l = build_named_lattice("e7");
  const LatticeEnumerator en(l);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    QVector x(7);
    for (auto& c : x) c = Rational(static_cast<long long>(rng() % 13) - 6, 1 + static_cast<long long>(rng() % 5));
    auto [d, pts] = en.closest_vectors(x);
    EXPECT_LE(d, l.norm_sq(x));
    const bool origin_closest = std::any_of(pts.begin(), pts.end(), [](const LatticeVector& p) { return is_zero(p.ambient); });
    EXPECT_EQ(d == l.norm_sq(x), origin_closest);
  }
}

TEST(VoronoiRelevant, Counts) {
  EXPECT_EQ(voronoi_relevant_vectors(build_named_lattice("zn 1")).size(), 2u);
  EXPECT_EQ(voronoi_relevant_vectors(build_named_lattice("an 2")).size(), 6u);
  EXPECT_EQ(voronoi_relevant_vectors(build_named_lattice("d4")).size(), 24u);
  // Z^3: 6 unit vectors; the face diagonals and cube diagonals are not relevant
  EXPECT_EQ(voronoi_relevant_vectors(build_named_lattice("zn 3")).size(), 6u);
  EXPECT_THROW(voronoi_relevant_vectors(build_named_lattice("e8"), 6), ResourceLimit);
}

TEST(NamedLattices, Grams) {
  EXPECT_EQ(build_named_lattice("an 2").gram(), QMatrix::from_ints({{2, 1}, {1, 2}}));
  EXPECT_EQ(determinant(build_named_lattice("e8").gram()), Rational(1));
  EXPECT_EQ(determinant(build_named_lattice("e6").gram()), Rational(3));
  EXPECT_EQ(determinant(build_named_lattice("d5").gram()), Rational(4));
}

TEST(NamedLattices, ParseNames) {
  EXPECT_EQ(parse_lattice_name("A2").canonical(), "an 2");
  EXPECT_EQ(parse_lattice_name("e 8").canonical(), "e 8");
  EXPECT_EQ(parse_lattice_name("LeechMOG").canonical(), "leech");
  EXPECT_THROW(parse_lattice_name("e9"), ConfigError);
  EXPECT_THROW(parse_lattice_name("d2"), ConfigError);
}

TEST(NamedLattices, AutomorphismGeneratorsAreIsometries) {
  for (const char* name : {"zn 3", "an 3", "d4", "d5", "e6", "e7", "e8"}) {
    const Lattice l = build_named_lattice(name);
    for (const auto& g : named_automorphism_group(name)) {
      EXPECT_EQ(g.transpose() * l.form() * g, l.form()) << name;
      // maps the basis into the lattice
      const QMatrix img = l.basis() * g.transpose();
      const QMatrix coords = img * *inverse(l.basis());
      for (std::size_t i = 0; i < coords.rows(); ++i)
        for (std::size_t j = 0; j < coords.cols(); ++j) EXPECT_TRUE(coords(i, j).is_integer()) << name;
    }
  }
}

TEST(Lll, ReducedGramIsEquivalent) {
  const QMatrix g = QMatrix::from_ints({{5, 16, 1}, {16, 53, 4}, {1, 4, 3}});
  const auto r = lll_reduce(g);
  QMatrix u(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) u(i, j) = Rational(r.transform[i][j]);
  EXPECT_EQ(u * g * u.transpose(), r.gram);
  EXPECT_EQ(abs(determinant(u)), Rational(1));
  EXPECT_LE(r.gram(0, 0), Rational(3));
}

TEST(Lattice, RejectsBadInput) {
  EXPECT_THROW(Lattice("x", QMatrix(2, 3), QMatrix::identity(2)), ShapeError);
  EXPECT_THROW(Lattice("x", QMatrix::identity(2), QMatrix::from_ints({{1, 2}, {2, 1}})), ShapeError);
}
