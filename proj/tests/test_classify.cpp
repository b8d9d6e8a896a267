#include <gtest/gtest.h>

#include <random>

#include "contact/classify.hpp"
#include "contact/golay.hpp"
#include "contact/named_lattices.hpp"
#include "contact/verify.hpp"

using namespace contact;

namespace {

const std::string kData = CONTACT_DATA_DIR;

const LeechContext& leech() {
  static const LeechContext ctx;
  return ctx;
}

const std::vector<TableRow>& table(int t) {
  static const std::vector<TableRow> t1 = read_table(kData + "/table1.txt"), t2 = read_table(kData + "/table2.txt");
  return t == 1 ? t1 : t2;
}

ClassifiedRow classify_row(int t, std::size_t index) {
  const QVector x = table(t).at(index - 1).vector.ambient();
  std::vector<QVector> tight;
  for (auto i : incidence_set(leech().polar, x).indices) tight.push_back(leech().min.vectors[i].ambient);
  return classify_vertex(leech().enumerator, x, tight);
}

CoxeterDynkinDiagram path_diagram(std::size_t n) {
  CoxeterDynkinDiagram d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) d.set(i, i + 1, 3);
  return d;
}

Graph relabelled(const Graph& g, std::mt19937_64& rng) {
  std::vector<std::uint32_t> p(g.order());
  std::iota(p.begin(), p.end(), 0u);
  std::shuffle(p.begin(), p.end(), rng);
  Graph h(g.order());
  for (std::uint32_t u = 0; u < g.order(); ++u)
    for (auto v : g.adj[u])
      if (u < v) h.add_edge(p[u], p[v]);
  return h;
}

Graph with_uniform_subdivision(const Graph& g, std::size_t k) {
  WeightedGraph w;
  for (std::uint32_t u = 0; u < g.order(); ++u) w.nodes.push_back(u);
  for (std::uint32_t u = 0; u < g.order(); ++u)
    for (auto v : g.adj[u])
      if (u < v) w.edges.push_back({u, v, k});
  return subdivide(w);
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

// Higman-Sims graph: the point and the 22 points and 77 blocks of S(3,6,22)
// derived from the octads of the Golay code through two fixed coordinates.
Graph higman_sims() {
  const GolayCode code = build_golay();
  std::vector<std::vector<int>> blocks;
  for (auto o : code.octads)
    if ((o >> 22 & 1) && (o >> 23 & 1)) {
      std::vector<int> b;
      for (int i = 0; i < 22; ++i)
        if (o >> i & 1) b.push_back(i);
      blocks.push_back(b);
    }
  Graph g(100);
  for (std::uint32_t i = 0; i < 22; ++i) g.add_edge(0, 1 + i);
  for (std::uint32_t b = 0; b < blocks.size(); ++b) {
    for (int i : blocks[b]) g.add_edge(1 + i, 23 + b);
    for (std::uint32_t c = b + 1; c < blocks.size(); ++c) {
      std::vector<int> common;
      std::set_intersection(blocks[b].begin(), blocks[b].end(), blocks[c].begin(), blocks[c].end(), std::back_inserter(common));
      if (common.empty()) g.add_edge(23 + b, 23 + c);
    }
  }
  return g;
}

// Coxeter graph: 3-subsets of a 7-set that are not Fano lines, adjacent when disjoint.
Graph coxeter_graph() {
  const int lines[7][3] = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
  std::vector<unsigned> nodes;
  for (unsigned m = 0; m < 128; ++m) {
    if (__builtin_popcount(m) != 3) continue;
    bool line = false;
    for (const auto& l : lines) line = line || m == ((1u << l[0]) | (1u << l[1]) | (1u << l[2]));
    if (!line) nodes.push_back(m);
  }
  Graph g(nodes.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i)
    for (std::uint32_t j = i + 1; j < nodes.size(); ++j)
      if (!(nodes[i] & nodes[j])) g.add_edge(i, j);
  return g;
}

// Tutte-Coxeter graph: incidence graph of points and lines of the generalized quadrangle W(2),
// i.e. the 15 duads and 15 synthemes of a 6-set.
Graph tutte_coxeter() {
  std::vector<std::pair<int, int>> duads;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) duads.emplace_back(a, b);
  std::vector<std::vector<int>> synthemes;
  for (int i = 0; i < 15; ++i)
    for (int j = i + 1; j < 15; ++j)
      for (int k = j + 1; k < 15; ++k) {
        const unsigned m = (1u << duads[i].first) | (1u << duads[i].second) | (1u << duads[j].first) | (1u << duads[j].second) |
                           (1u << duads[k].first) | (1u << duads[k].second);
        if (m == 63) synthemes.push_back({i, j, k});
      }
  Graph g(30);
  for (std::uint32_t s = 0; s < synthemes.size(); ++s)
    for (int d : synthemes[s]) g.add_edge(d, 15 + s);
  return g;
}

}  // namespace

TEST(Diagram, PathIsA) {
  const auto c = classify_diagram(path_diagram(3));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].name, "a3");
  EXPECT_FALSE(c[0].affine);
  EXPECT_EQ(c[0].definiteness, Definiteness::PositiveDefinite);
}

TEST(Diagram, InfinityPairIsAffineA1) {
  CoxeterDynkinDiagram d(2);
  d.set(0, 1, CoxeterDynkinDiagram::kInfinity);
  const auto c = classify_diagram(d);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].name, "A1");
  EXPECT_TRUE(c[0].affine);
  EXPECT_EQ(c[0].definiteness, Definiteness::PositiveSemidefinite);
}

TEST(Diagram, CycleIsAffineA) {
  for (std::size_t n : {3, 4, 7}) {
    CoxeterDynkinDiagram d = path_diagram(n);
    d.set(0, n - 1, 3);
    EXPECT_EQ(diagram_name(classify_diagram(d)), "A" + std::to_string(n - 1));
  }
}

TEST(Diagram, ForkShapes) {
  auto fork = [](std::size_t p, std::size_t q, std::size_t r) {
    CoxeterDynkinDiagram d(1 + p + q + r);
    std::size_t next = 1;
    for (std::size_t arm : {p, q, r}) {
      std::size_t prev = 0;
      for (std::size_t k = 0; k < arm; ++k) {
        d.set(prev, next, 3);
        prev = next++;
      }
    }
    return diagram_name(classify_diagram(d));
  };
  EXPECT_EQ(fork(3, 1, 1), "d6");
  EXPECT_EQ(fork(2, 2, 1), "e6");
  EXPECT_EQ(fork(3, 2, 1), "e7");
  EXPECT_EQ(fork(4, 2, 1), "e8");
  EXPECT_EQ(fork(2, 2, 2), "E6");
  EXPECT_EQ(fork(3, 3, 1), "E7");
  EXPECT_EQ(fork(5, 2, 1), "E8");
}

TEST(Diagram, AffineD) {
  CoxeterDynkinDiagram star(5);
  for (int i = 1; i < 5; ++i) star.set(0, i, 3);
  EXPECT_EQ(diagram_name(classify_diagram(star)), "D4");
  // two forks joined by a path
  CoxeterDynkinDiagram d(7);
  d.set(0, 2, 3);
  d.set(1, 2, 3);
  d.set(2, 3, 3);
  d.set(3, 4, 3);
  d.set(4, 5, 3);
  d.set(4, 6, 3);
  EXPECT_EQ(diagram_name(classify_diagram(d)), "D6");
}

TEST(Diagram, ComponentsAndPowers) {
  CoxeterDynkinDiagram d(5);
  d.set(0, 1, 3);
  EXPECT_EQ(diagram_name(classify_diagram(d)), "a1^3 a2");
}

TEST(Diagram, PermutationInvariant) {
  CoxeterDynkinDiagram d = path_diagram(8);
  d.set(2, 7, 2);
  d.set(5, 6, 2);
  d.set(1, 6, 3);
  const std::string want = diagram_name(classify_diagram(d));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    std::vector<std::size_t> p(8);
    std::iota(p.begin(), p.end(), 0u);
    std::shuffle(p.begin(), p.end(), rng);
    CoxeterDynkinDiagram e(8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j) e.set(p[i], p[j], d.m[i][j]);
    EXPECT_EQ(diagram_name(classify_diagram(e)), want);
  }
}

TEST(Diagram, RejectsBadEntries) {
  CoxeterDynkinDiagram d(2);
  d.m[0][1] = 4;
  EXPECT_THROW(classify_diagram(d), ShapeError);
}

TEST(GraphName, Trees) {
  EXPECT_EQ(identify_graph_component(path_graph(9)), "a9");
  Graph t(8);  // arms of 3, 2, 2 nodes: degree-2 counts 2, 1, 1
  t.add_edge(0, 1);
  t.add_edge(1, 2);
  t.add_edge(2, 3);
  t.add_edge(0, 4);
  t.add_edge(4, 5);
  t.add_edge(0, 6);
  t.add_edge(6, 7);
  EXPECT_EQ(identify_graph_component(t), "T^{2}_{1}1");
}

TEST(GraphName, TwoForkOrientation) {
  // fork A with legs 1, 0, fork B with legs 0, 0, joined through 4 degree-2 nodes
  Graph g(13);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 3);
  for (std::uint32_t k = 4; k <= 8; ++k) g.add_edge(k == 4 ? 0 : k - 1, k);
  g.add_edge(8, 9);
  g.add_edge(9, 10);
  g.add_edge(9, 11);
  g.add_edge(11, 12);
  std::mt19937_64 rng(1);
  const std::string name = identify_graph_component(g);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(identify_graph_component(relabelled(g, rng)), name);
  EXPECT_EQ(name.substr(0, 2), "T^");
}

TEST(GraphName, StronglyRegular) {
  const Graph hs = higman_sims();
  ASSERT_EQ(srg_parameters(hs), (SrgParameters{100, 22, 0, 6}));
  EXPECT_EQ(identify_graph_component(hs), "HS100");
}

TEST(GraphName, DistanceRegular) {
  const Graph c = coxeter_graph();
  ASSERT_EQ(c.order(), 28u);
  EXPECT_EQ(identify_graph_component(c), "Cox");
  EXPECT_EQ(identify_graph_component(tutte_coxeter()), "(3,8)");
  EXPECT_EQ(identify_graph_component(petersen_graph()), "(3,5)");
}

TEST(GraphName, J74) {
  const Graph j = j74_graph();
  EXPECT_EQ(j.order(), 35u);
  EXPECT_EQ(j.edge_count(), 70u);
  std::mt19937_64 rng(8);
  EXPECT_EQ(identify_graph_component(relabelled(j, rng)), "J(7,4)");
  // complements: disjoint 3-subsets
  EXPECT_EQ(identify_graph_component(johnson_graph(7, 3, 0)), "J(7,4)");
}

TEST(GraphName, SubdividedGraphs) {
  EXPECT_EQ(identify_graph_component(with_uniform_subdivision(petersen_graph(), 1)), "G25,30");
  EXPECT_EQ(identify_graph_component(with_uniform_subdivision(complete_bipartite(3, 3), 2)), "G24,27");
  EXPECT_EQ(identify_graph_component(with_uniform_subdivision(complete_graph(4), 3)), "G22,24");
  EXPECT_EQ(identify_graph_component(cycle_graph(15)), "G15,15");
}

TEST(Suppression, RoundTripIsIsomorphic) {
  std::mt19937_64 rng(6);
  for (const Graph& g : {with_uniform_subdivision(petersen_graph(), 2), with_uniform_subdivision(complete_graph(4), 3), cycle_graph(9),
                         with_uniform_subdivision(complete_bipartite(3, 3), 1)}) {
    const Graph h = relabelled(g, rng);
    EXPECT_TRUE(isomorphic(subdivide(suppress_degree_two(h)), g));
  }
  const WeightedGraph w = suppress_degree_two(with_uniform_subdivision(complete_graph(4), 3));
  EXPECT_EQ(w.nodes.size(), 4u);
  for (const auto& e : w.edges) EXPECT_EQ(e.weight, 3u);
}

TEST(Canonical, DistinguishesNonIsomorphic) {
  EXPECT_FALSE(isomorphic(petersen_graph(), johnson_graph(5, 2)));
  EXPECT_FALSE(isomorphic(cycle_graph(6), complete_bipartite(3, 3)));
  std::mt19937_64 rng(2);
  EXPECT_TRUE(isomorphic(coxeter_graph(), relabelled(coxeter_graph(), rng)));
  EXPECT_THROW(canonical_certificate(complete_graph(9), 10), ResourceLimit);
}

TEST(Names, Multisets) {
  EXPECT_EQ(name_multiset("a1^3 d4"), (std::vector<std::string>{"a1", "a1", "a1", "d4"}));
  EXPECT_TRUE(same_name("HS100 a1", "a1 HS100"));
  EXPECT_FALSE(same_name("a1^2", "a1"));
  EXPECT_EQ(compose_name({"a2", "G15,15", "a1", "a1", "d4", "A1"}), "G15,15 A1 a1^2 a2 d4");
}

TEST(LeechRows, SharedExamples) {
  const auto r1 = classify_row(1, 1);
  EXPECT_EQ(r1.name, "A1^24");
  EXPECT_TRUE(r1.affine);
  EXPECT_EQ(r1.delone_count, 48u);
  EXPECT_EQ(classify_row(1, 2).name, "D4^6");
  EXPECT_EQ(classify_row(1, 103).name, "a1 e6^4");
  const auto r124 = classify_row(1, 124);
  EXPECT_EQ(r124.name, "a1 d6^4");
  EXPECT_EQ(r124.incidence, 24u);
  EXPECT_EQ(r124.delone_count, 25u);
  EXPECT_FALSE(r124.affine);
  EXPECT_EQ(classify_row(1, 163).name, "a1^25");
  EXPECT_EQ(classify_row(1, 164).name, "a1^25");
}

TEST(LeechRows, Row161ComputesA1Power22A3) {
  const auto r = classify_row(1, 161);
  EXPECT_EQ(r.name, "a1^22 a3");
  EXPECT_EQ(r.delone_count, 25u);
  EXPECT_EQ(classify_row(1, 162).name, "a1^23 a2");
}

TEST(LeechRows, AdditionalExamples) {
  const auto e = classify_row(2, 1);
  EXPECT_EQ(e.name, "exceptional");
  EXPECT_EQ(e.incidence, 552u);
  EXPECT_FALSE(e.shared);
  EXPECT_EQ(classify_row(2, 2).name, "HS100 a1");
  EXPECT_EQ(classify_row(2, 3).name, "HS50 a2");
  EXPECT_EQ(classify_row(2, 4).name, "J(7,4) a3");
  EXPECT_EQ(classify_row(2, 16).name, "G15,15 a9");
}

TEST(LeechRows, SubdividedK4Components) {
  for (std::size_t row : {17, 23}) {
    const QVector x = table(2).at(row - 1).vector.ambient();
    std::vector<QVector> tight;
    for (auto i : incidence_set(leech().polar, x).indices) tight.push_back(leech().min.vectors[i].ambient);
    const FacetGraph f = facet_graph(x, tight, leech().lattice.form());
    ASSERT_TRUE(f.applicable);
    bool found = false;
    for (const auto& c : f.graph.components())
      if (c.size() == 22) {
        found = true;
        EXPECT_TRUE(isomorphic(f.graph.induced(c), with_uniform_subdivision(complete_graph(4), 3)));
      }
    EXPECT_TRUE(found) << row;
  }
}

TEST(LeechRows, RuleDomain) {
  const Lattice e8 = build_named_lattice("e8");
  EXPECT_THROW(delone_diagram(e8, QVector(8)), RuleDomainError);
}

TEST(LeechRows, AllRowsVerify) {
  VerifyOptions o;
  o.errata = parse_errata(read_file(kData + "/errata.txt"));
  std::size_t errata = 0;
  for (int t : {1, 2})
    for (const auto& row : table(t)) {
      const RowVerdict v = verify_row(leech(), t, row, o);
      EXPECT_TRUE(v.ok()) << format_verdict(v);
      if (!v.note.empty()) ++errata;
      if (t == 1) EXPECT_EQ(v.computed.affine, row.norm_sq == 2) << row.index;
    }
  EXPECT_EQ(errata, o.errata.size());
}

TEST(LeechRows, ErratumMustMatchComputedName) {
  VerifyOptions o;
  o.errata = {{1, 161, "a1^25", "wrong"}};
  EXPECT_FALSE(verify_row(leech(), 1, table(1).at(160), o).ok());
  o.errata = {};
  EXPECT_FALSE(verify_row(leech(), 1, table(1).at(160), o).ok());
}

TEST(Errata, ParseFormat) {
  const auto e = parse_errata("# comment\ntable2 | 17 | G22,24 d5 | why\n");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].table, 2);
  EXPECT_EQ(e[0].row, 17u);
  EXPECT_EQ(e[0].computed, "G22,24 d5");
  EXPECT_THROW(parse_errata("table3 | 1 | x | y"), ParseError);
}
