#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "contact/named_lattices.hpp"
#include "contact/symmetry.hpp"
#include "contact/verify.hpp"

using namespace contact;

namespace {

struct Small {
  Lattice lattice;
  MinSet min;
  PermAction action;
  PermGroup group;

  explicit Small(const std::string& name)
      : lattice(build_named_lattice(name)), min(shortest_vectors(lattice)), action(action_on_min(named_automorphism_group(name), min, lattice)),
        group(make_group(action)) {}
};

std::set<Perm> closure(const std::vector<Perm>& gens, std::size_t n) {
  std::set<Perm> seen{identity_perm(n)};
  std::vector<Perm> todo{identity_perm(n)};
  while (!todo.empty()) {
    const Perm p = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      Perm q = compose(g, p);
      if (seen.insert(q).second) todo.push_back(std::move(q));
    }
  }
  return seen;
}

std::vector<std::uint32_t> random_subset(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TEST(Action, NegationIsAnInvolution) {
  const Lattice l = build_named_lattice("an 2");
  const MinSet m = shortest_vectors(l);
  QMatrix neg = QMatrix::identity(2);
  neg(0, 0) = neg(1, 1) = Rational(-1);
  const PermAction a = action_on_min({neg}, m, l);
  const PointSet& pts = *a.points;
  for (std::uint32_t k = 0; k < pts.size(); ++k) {
    EXPECT_NE(a.perms[0][k], k);
    EXPECT_EQ(a.perms[0][a.perms[0][k]], k);
    EXPECT_EQ(pts.point(a.perms[0][k]), -pts.point(k));
  }
  EXPECT_EQ(group_order(a), Integer(2));
}

TEST(Action, RejectsNonSymmetry) {
  const Lattice l = build_named_lattice("an 2");
  const MinSet m = shortest_vectors(l);
  QMatrix twice = QMatrix::identity(2);
  twice(0, 0) = Rational(2);
  EXPECT_THROW(action_on_min({QMatrix::identity(2), twice}, m, l), NotASymmetry);
  EXPECT_FALSE(is_lattice_automorphism(l, twice));
  EXPECT_THROW(check_lattice_automorphisms(l, {twice}), NotASymmetry);
}

TEST(GroupOrder, SmallExamples) {
  EXPECT_EQ(Small("an 2").group.order(), Integer(12));
  EXPECT_EQ(PermGroup(5, {}).order(), Integer(1));
  EXPECT_EQ(Small("d4").group.order(), Integer(1152));
  EXPECT_EQ(Small("e6").group.order(), named_automorphism_order(parse_lattice_name("e6")));
}

TEST(GroupOrder, AgreesWithBruteForceClosure) {
  for (const char* name : {"an 2", "an 3", "zn 3", "d4"}) {
    const Small s(name);
    const auto all = closure(s.action.perms, s.action.degree());
    EXPECT_EQ(Integer(static_cast<unsigned long>(all.size())), s.group.order()) << name;
    for (const auto& p : all) EXPECT_TRUE(s.group.contains(p));
  }
}

TEST(GroupOrder, DeterministicCertificate) {
  const Small s("d4");
  EXPECT_EQ(s.group.certificate(), OrderCertificate::kSchreierGenerators);
  EXPECT_FALSE(s.group.contains(identity_perm(5)));
}

TEST(Orbits, RootSystemsAreTransitive) {
  for (const char* name : {"an 3", "d4", "e6", "zn 3"}) {
    const Small s(name);
    EXPECT_EQ(orbit(s.action, 0).size(), s.min.size()) << name;
    EXPECT_EQ(s.group.orbit(0).size(), s.min.size()) << name;
  }
}

TEST(SetStabilizer, HexagonAntipodalPair) {
  const Small s("an 2");
  const PointSet& pts = *s.action.points;
  const std::uint32_t v = 0, w = *pts.find(-pts.point(0));
  const auto r = set_stabilizer(s.group, pts, {std::min(v, w), std::max(v, w)});
  EXPECT_EQ(r.status, SearchStatus::kFound);
  EXPECT_EQ(r.order, Integer(4));
}

TEST(SetTransporter, HexagonPairs) {
  const Small s("an 2");
  const PointSet& pts = *s.action.points;
  std::vector<std::vector<std::uint32_t>> adjacent, opposite;
  for (std::uint32_t i = 0; i < 6; ++i)
    for (std::uint32_t j = i + 1; j < 6; ++j) {
      if (pts.inner(i, j) == Rational(1)) adjacent.push_back({i, j});
      if (pts.inner(i, j) == Rational(-1)) opposite.push_back({i, j});
    }
  ASSERT_EQ(adjacent.size(), 6u);
  for (const auto& t : adjacent) {
    const auto r = set_transporter(s.group, pts, adjacent[0], t);
    ASSERT_EQ(r.status, SearchStatus::kFound);
    EXPECT_EQ(image_of_set(r.element, adjacent[0]), t);
    EXPECT_TRUE(s.group.contains(r.element));
  }
  EXPECT_EQ(set_transporter(s.group, pts, adjacent[0], opposite[0]).status, SearchStatus::kNotEquivalent);
}

TEST(SetTransporter, KeyMismatchIsNotEquivalent) {
  // {e1, e2} and {e1, -e1}
  const Small s("zn 3");
  const PointSet& pts = *s.action.points;
  auto idx = [&](std::initializer_list<Rational> x) { return *pts.find(QVector(x)); };
  std::vector<std::uint32_t> a{idx({1, 0, 0}), idx({0, 1, 0})}, b{idx({1, 0, 0}), idx({-1, 0, 0})};
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_NE(set_key(pts, a), set_key(pts, b));
  EXPECT_EQ(set_transporter(s.group, pts, a, b).status, SearchStatus::kNotEquivalent);
}

TEST(SetKey, InvariantUnderRandomElements) {
  const Small s("e6");
  const PointSet& pts = *s.action.points;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const auto set = random_subset(rng, pts.size(), 1 + rng() % 12);
    const Perm g = s.group.random_element(rng);
    const auto img = image_of_set(g, set);
    EXPECT_EQ(set_key(pts, set), set_key(pts, img));
    EXPECT_EQ(set_key(pts, set).hash(), set_key(pts, img).hash());
  }
}

TEST(SetTransporter, FindsRandomConjugates) {
  const Small s("e6");
  const PointSet& pts = *s.action.points;
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    const auto set = random_subset(rng, pts.size(), 2 + rng() % 8);
    const auto img = image_of_set(s.group.random_element(rng), set);
    const auto r = set_transporter(s.group, pts, set, img, {}, s.action.witness);
    ASSERT_EQ(r.status, SearchStatus::kFound);
    EXPECT_EQ(image_of_set(r.element, set), img);
  }
}

TEST(SetStabilizer, ClosedAndSatisfiesOrbitStabilizer) {
  const Small s("d4");
  const PointSet& pts = *s.action.points;
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const auto set = random_subset(rng, pts.size(), 1 + rng() % 6);
    const auto r = set_stabilizer(s.group, pts, set);
    ASSERT_EQ(r.status, SearchStatus::kFound);
    for (const auto& g : r.generators) EXPECT_EQ(image_of_set(g, set), set);
    EXPECT_EQ(s.group.order() % r.order, 0);
    EXPECT_EQ(PermGroup(pts.size(), r.generators).order(), r.order);
    std::set<std::vector<std::uint32_t>> orb{set};
    std::vector<std::vector<std::uint32_t>> todo{set};
    while (!todo.empty()) {
      const auto x = todo.back();
      todo.pop_back();
      for (const auto& g : s.action.perms)
        if (auto y = image_of_set(g, x); orb.insert(y).second) todo.push_back(y);
    }
    EXPECT_EQ(Integer(static_cast<unsigned long>(orb.size())) * r.order, s.group.order());
  }
}

TEST(SetSearch, BudgetGivesUndecided) {
  const Small s("e6");
  const PointSet& pts = *s.action.points;
  SearchOptions o;
  o.budget = 1;
  std::mt19937_64 rng(3);
  const auto set = random_subset(rng, pts.size(), 10);
  EXPECT_EQ(set_stabilizer(s.group, pts, set, o).status, SearchStatus::kUndecided);
}

TEST(GroupFile, RoundTripAndErrors) {
  const MatrixGroupGens gens = named_automorphism_group("d4");
  const MatrixGroupGens back = parse_group(format_group(gens));
  ASSERT_EQ(back.size(), gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) EXPECT_EQ(back[k], gens[k]);
  EXPECT_THROW(parse_group("G 2 1\n1 0\n0"), ParseError);
  EXPECT_THROW(parse_group("X 2 1\n1 0\n0 1"), ParseError);
  EXPECT_THROW(parse_group("G 2 1\n1 0\n0 x"), ParseError);
}

TEST(GroupFile, ChecksumMismatch) {
  const auto dir = std::filesystem::temp_directory_path() / "contact_symmetry_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "g.txt").string();
  std::ofstream(path) << "G 1 1\n-1\n";
  std::ofstream(path + ".fnv1a") << "0000000000000000\n";
  EXPECT_THROW(read_group_file(path), ConfigError);
  std::filesystem::remove(path + ".fnv1a");
  EXPECT_EQ(read_group_file(path).size(), 1u);
  std::filesystem::remove_all(dir);
}

TEST(Co0, ActsOnLeechMinimalVectors) {
  const LeechContext ctx;
  const auto gens = read_group_file(std::string(CONTACT_DATA_DIR) + "/co0.txt");
  check_lattice_automorphisms(ctx.lattice, gens);
  const LeechGroup g(ctx, gens);
  EXPECT_EQ(g.group.order(), co0_order());
  EXPECT_EQ(orbit(g.action, 0).size(), 196560u);
  // the stabilizer of a minimal vector is Co2
  const auto r = set_stabilizer(g.group, *g.action.points, {0}, {}, g.action.witness);
  EXPECT_EQ(r.order, Integer("42305421312000"));
}
