#include <gtest/gtest.h>

#include <random>
#include <set>

#include "contact/golay.hpp"
#include "contact/named_lattices.hpp"
#include "contact/polytope.hpp"

using namespace contact;

namespace {

QVector qv(std::initializer_list<Rational> l) { return QVector(l); }

HPolytope box(std::size_t n, long long r) {
  std::vector<QVector> a;
  QVector b;
  for (std::size_t i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      QVector e(n);
      e[i] = s;
      a.push_back(e);
      b.push_back(r);
    }
  return HPolytope(n, a, b);
}

HPolytope random_polytope(std::mt19937_64& rng, std::size_t n, std::size_t extra) {
  const HPolytope cube = box(n, 3);
  std::vector<QVector> a = cube.normals();
  QVector b;
  for (std::size_t i = 0; i < cube.size(); ++i) b.push_back(cube.rhs(i));
  std::uniform_int_distribution<int> d(-3, 3);
  while (a.size() < 2 * n + extra) {
    QVector r(n);
    for (auto& x : r) x = d(rng);
    if (is_zero(r)) continue;
    a.push_back(r);
    b.push_back(1 + static_cast<long long>(rng() % 4));
  }
  return HPolytope(n, a, b);
}

std::set<QVector, QVectorLess> as_set(const std::vector<QVector>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(ContactPolar, SmallLattices) {
  const HPolytope a2 = contact_polar(build_named_lattice("an 2"));
  EXPECT_EQ(a2.size(), 6u);
  for (std::size_t i = 0; i < a2.size(); ++i) EXPECT_EQ(a2.rhs(i), Rational(1));
  const HPolytope z2 = contact_polar(build_named_lattice("zn 2"));
  EXPECT_EQ(z2.size(), 4u);
  EXPECT_EQ(dual_description(z2).vertices.size(), 4u);
}

TEST(ContactPolar, LeechIncidences) {
  const Lattice l = build_leech();
  const HPolytope h = contact_polar(l, leech_min_vectors(l));
  EXPECT_EQ(h.size(), 196560u);
  EXPECT_EQ(h.rhs(0), Rational(2));
  const auto t2 = read_table(std::string(CONTACT_DATA_DIR) + "/table2.txt");
  const IncidenceSet e = incidence_set(h, t2[0].vector.ambient());
  EXPECT_EQ(e.size(), 552u);
  EXPECT_TRUE(e.vertex);
  EXPECT_EQ(incidence_set(h, t2[1].vector.ambient()).size(), 101u);
  const HPolytope cone = tangent_cone(h, t2[0].vector.ambient());
  EXPECT_EQ(cone.size(), 552u);
  EXPECT_EQ(cone.dim(), 24u);
  EXPECT_TRUE(cone.is_cone());
}

TEST(LpVertex, Examples) {
  LpOptions o;
  o.objective = qv({1, 1});
  const auto sq = lp_vertex(box(2, 1), o);
  EXPECT_EQ(sq.vertex, qv({1, 1}));
  // standard simplex x, y >= 0, x + y <= 1
  const HPolytope simplex(2, {qv({-1, 0}), qv({0, -1}), qv({1, 1})}, qv({0, 0, 1}));
  o.objective = qv({1, 0});
  EXPECT_EQ(lp_vertex(simplex, o).vertex, qv({1, 0}));
}

TEST(LpVertex, HexagonVertexIsSimple) {
  const HPolytope h = contact_polar(build_named_lattice("an 2"));
  const auto verts = as_set(dual_description(h).vertices);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    LpOptions o;
    o.seed = seed;
    const auto v = lp_vertex(h, o);
    EXPECT_EQ(v.tight.size(), 2u);
    EXPECT_TRUE(verts.count(v.vertex));
  }
}

TEST(LpVertex, SeedIsReproducible) {
  const HPolytope h = contact_polar(build_named_lattice("e6"));
  LpOptions o;
  o.seed = 42;
  EXPECT_EQ(lp_vertex(h, o).vertex, lp_vertex(h, o).vertex);
}

TEST(LpVertex, Infeasible) {
  const HPolytope empty(1, {qv({1}), qv({-1})}, qv({-1, -1}));
  EXPECT_THROW(lp_vertex(empty), Infeasible);
}

TEST(DualDescription, Examples) {
  EXPECT_EQ(dual_description(box(3, 1)).vertices.size(), 8u);
  const HPolytope quadrant(2, {qv({1, 0}), qv({0, 1})}, qv({0, 0}));
  const auto v = dual_description(quadrant);
  EXPECT_TRUE(v.vertices.empty());
  EXPECT_EQ(v.rays.size(), 2u);
  EXPECT_EQ(dual_description(contact_polar(build_named_lattice("d4"))).vertices.size(), 24u);
}

TEST(DualDescription, LimitsNeedBothExceeded) {
  const HPolytope cube = box(3, 1);
  EXPECT_NO_THROW(dual_description(cube, {2, 100}));
  EXPECT_NO_THROW(dual_description(cube, {100, 2}));
  EXPECT_THROW(dual_description(cube, {2, 2}), ResourceLimit);
}

TEST(DualDescription, AgreesWithNaiveOracle) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 2 + rng() % 3;
    const HPolytope h = random_polytope(rng, n, 10 - 2 * n);
    EXPECT_EQ(dual_description(h).vertices, naive_vertices(h)) << format_hpolytope(h);
  }
}

TEST(DualDescription, RoundTripRecoversIrredundantFacets) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 2 + rng() % 3;
    const HPolytope h = random_polytope(rng, n, 10 - 2 * n);
    const VPolytope v = dual_description(h);
    const HPolytope back = facets_of(v);
    std::set<QVector, QVectorLess> want, got;
    for (auto i : irredundant_indices(h, v)) {
      QVector r = h.normal(i);
      r.push_back(h.rhs(i));
      want.insert(primitive(r));
    }
    for (std::size_t i = 0; i < back.size(); ++i) {
      QVector r = back.normal(i);
      r.push_back(back.rhs(i));
      got.insert(primitive(r));
    }
    EXPECT_EQ(got, want);
  }
}

TEST(DualDescription, PolarityForRootLattices) {
  for (const char* name : {"an 2", "an 3", "d4", "d5", "e6"}) {
    const Lattice l = build_named_lattice(name);
    const MinSet m = shortest_vectors(l);
    const HPolytope h = contact_polar(l, m);
    for (const auto& x : dual_description(h).vertices) {
      for (const auto& w : m.vectors) EXPECT_LE(l.inner(x, w.ambient), m.min_norm_sq / 2);
      EXPECT_TRUE(incidence_set(h, x).vertex);
    }
  }
}

TEST(DualDescription, RootLatticePolarIsVoronoiCell) {
  for (const char* name : {"an 2", "an 3", "d4", "e6"}) {
    const Lattice l = build_named_lattice(name);
    std::vector<QVector> a;
    QVector b;
    for (const auto& v : voronoi_relevant_vectors(l)) {
      a.push_back(l.form() * v.ambient);
      b.push_back(l.norm_sq(v.ambient) / 2);
    }
    const HPolytope dv(l.dim(), a, b);
    EXPECT_EQ(dual_description(contact_polar(l)).vertices, dual_description(dv).vertices) << name;
  }
}

TEST(IncidenceSet, SquareCorner) {
  const HPolytope sq = box(2, 1);
  const auto inc = incidence_set(sq, qv({1, 1}));
  EXPECT_EQ(inc.indices, (std::vector<std::uint32_t>{0, 2}));
  EXPECT_TRUE(inc.vertex);
  EXPECT_FALSE(incidence_set(sq, qv({1, 0})).vertex);
  EXPECT_THROW(incidence_set(sq, qv({2, 0})), NotInPolytope);
  EXPECT_THROW(incidence_set(sq, qv({1})), DimensionError);
}

TEST(EdgeWalk, Examples) {
  EXPECT_EQ(edge_walk(box(2, 1), qv({1, 1}), qv({-1, 0})), qv({-1, 1}));
  EXPECT_EQ(edge_walk(box(3, 1), qv({1, 1, 1}), qv({0, 0, -1})), qv({1, 1, -1}));
  const HPolytope quadrant(2, {qv({1, 0}), qv({0, 1})}, qv({0, 0}));
  EXPECT_THROW(edge_walk(quadrant, qv({0, 0}), qv({-1, 0})), UnboundedEdge);
}

TEST(EdgeWalk, HexagonNeighbours) {
  const HPolytope h = contact_polar(build_named_lattice("an 2"));
  const auto verts = as_set(dual_description(h).vertices);
  for (const auto& v : verts) {
    const auto rays = dual_description(tangent_cone(h, v)).rays;
    ASSERT_EQ(rays.size(), 2u);
    const auto tv = incidence_set(h, v).indices;
    for (const auto& r : rays) {
      const QVector u = edge_walk(h, v, r);
      EXPECT_TRUE(verts.count(u));
      const auto tu = incidence_set(h, u).indices;
      std::vector<std::uint32_t> common;
      std::set_intersection(tv.begin(), tv.end(), tu.begin(), tu.end(), std::back_inserter(common));
      EXPECT_EQ(common.size(), 1u);
    }
  }
}

TEST(EdgeWalk, ReversedWalkReturns) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + rng() % 3;
    const HPolytope h = random_polytope(rng, n, 10 - 2 * n);
    for (const auto& v : dual_description(h).vertices)
      for (const auto& r : dual_description(tangent_cone(h, v)).rays) {
        const QVector u = edge_walk(h, v, r);
        EXPECT_EQ(edge_walk(h, u, -r), v);
      }
  }
}

TEST(TangentCone, Examples) {
  const HPolytope c = tangent_cone(box(2, 1), qv({1, 1}));
  EXPECT_EQ(dual_description(c).rays, (std::vector<QVector>{qv({-1, 0}), qv({0, -1})}));
  EXPECT_EQ(dual_description(tangent_cone(box(4, 1), qv({1, 1, 1, 1}))).rays.size(), 4u);
  EXPECT_THROW(tangent_cone(box(2, 1), qv({1, 0})), NotAVertex);
}

TEST(ConeSection, LiftsRaysOfTheCone) {
  const HPolytope h = contact_polar(build_named_lattice("d4"));
  const QVector v = dual_description(h).vertices.front();
  const HPolytope cone = tangent_cone(h, v);
  QVector c(4);
  for (std::size_t i = 0; i < cone.size(); ++i) c = c - cone.normal(i);
  const ConeSection s = cone_section(cone, c);
  std::set<QVector, QVectorLess> lifted;
  for (const auto& y : dual_description(s.polytope).vertices) lifted.insert(primitive(s.lift(y)));
  std::set<QVector, QVectorLess> rays;
  for (const auto& r : dual_description(cone).rays) rays.insert(primitive(r));
  EXPECT_EQ(lifted, rays);
}

TEST(Formats, RoundTrip) {
  const HPolytope h = contact_polar(build_named_lattice("an 3"));
  const HPolytope back = parse_hpolytope(format_hpolytope(h));
  EXPECT_EQ(back.normals(), h.normals());
  const VPolytope v = dual_description(HPolytope(2, {qv({1, 0}), qv({0, 1}), qv({-1, -1})}, qv({1, 1, 0})));
  const VPolytope vb = parse_vpolytope(format_vpolytope(v));
  EXPECT_EQ(vb.vertices, v.vertices);
  EXPECT_EQ(vb.rays, v.rays);
  EXPECT_THROW(parse_hpolytope("H 2 1\n1 0"), ParseError);
  EXPECT_THROW(parse_vpolytope("V 2 1\n1 0\nextra"), ParseError);
}

TEST(HPolytope, RejectsZeroNormal) { EXPECT_THROW(HPolytope(2, {qv({0, 0})}, qv({1})), DimensionError); }
