#include <gtest/gtest.h>

#include <set>

#include "contact/golay.hpp"
#include "contact/lattice.hpp"

using namespace contact;

namespace {

const std::string kData = CONTACT_DATA_DIR;

const Lattice& leech() {
  static const Lattice l = build_leech();
  return l;
}

const MinSet& leech_min() {
  static const MinSet m = leech_min_vectors(leech());
  return m;
}

}  // namespace

TEST(Golay, Parameters) {
  const GolayCode g = build_golay();
  EXPECT_EQ(g.codewords.size(), 4096u);
  EXPECT_EQ(g.octads.size(), 759u);
  EXPECT_EQ(g.min_weight(), 8u);
  const auto w = g.weight_distribution();
  EXPECT_EQ(w[12], 2576u);
  EXPECT_EQ(w[16], 759u);
  EXPECT_EQ(w[24], 1u);
}

TEST(Golay, GeneratorFileMatchesBuiltIn) {
  const auto gens = read_golay_generators(kData + "/golay.txt");
  EXPECT_EQ(gens, std::vector<Codeword>(kGolayGenerators.begin(), kGolayGenerators.end()));
}

TEST(Golay, RejectsWrongGenerators) {
  auto gens = std::vector<Codeword>(kGolayGenerators.begin(), kGolayGenerators.end());
  gens[11] = 0x3;
  EXPECT_THROW(build_golay(gens), ConfigError);
}

TEST(Leech, MinimalVectorShapes) {
  const auto pts = leech_min_points(build_golay());
  const auto c = leech_shape_counts(pts);
  EXPECT_EQ(c.four_four, 1104u);
  EXPECT_EQ(c.octad_twos, 97152u);
  EXPECT_EQ(c.odd, 98304u);
  EXPECT_EQ(c.total(), 196560u);
}

TEST(Leech, MinimalVectorsHaveNormFourAndLieInLattice) {
  const GolayCode code = build_golay();
  const MinSet& m = leech_min();
  EXPECT_EQ(m.size(), 196560u);
  EXPECT_EQ(m.min_norm_sq, Rational(4));
  std::set<QVector, QVectorLess> all;
  for (const auto& v : m.vectors) all.insert(v.ambient);
  for (std::size_t k = 0; k < m.size(); k += 97) {
    const auto& v = m.vectors[k];
    EXPECT_EQ(leech().norm_sq(v.ambient), Rational(4));
    EXPECT_EQ(leech().ambient(v.coords), v.ambient);
    std::vector<long long> ints;
    for (const auto& x : v.ambient) ints.push_back(x.numerator().get_si());
    EXPECT_TRUE(in_leech(code, ints));
    EXPECT_TRUE(all.count(-v.ambient));
  }
}

TEST(Leech, EnumerationAgreesWithConstruction) {
  const MinSet e = shortest_vectors(leech());
  EXPECT_EQ(e.min_norm_sq, Rational(4));
  EXPECT_EQ(e.vectors, leech_min().vectors);
}

TEST(Leech, Unimodular) {
  EXPECT_EQ(determinant(leech().gram()), Rational(1));
  EXPECT_EQ(leech().name(), "leech");
}

TEST(Leech, Membership) {
  const GolayCode code = build_golay();
  std::vector<long long> x(24, 0);
  x[0] = 4;
  x[5] = -4;
  EXPECT_TRUE(in_leech(code, x));
  x[5] = 4;
  x[6] = 8;
  EXPECT_TRUE(in_leech(code, x));
  x[6] = 4;
  EXPECT_FALSE(in_leech(code, x));  // coordinate sum 12
  std::vector<long long> odd(24, 1);
  odd[0] = -3;
  EXPECT_TRUE(in_leech(code, odd));
  odd[1] = -3;
  EXPECT_FALSE(in_leech(code, odd));  // coordinate sum 16
}

TEST(TableRows, ExceptionalRow) {
  const auto rows = read_table(kData + "/table2.txt");
  ASSERT_EQ(rows.size(), 68u);
  const TableRow& r = rows[0];
  EXPECT_EQ(r.name, "exceptional");
  EXPECT_EQ(r.norm_sq, Rational(8, 3));
  EXPECT_EQ(r.n, 552u);
  EXPECT_EQ(r.stabilizer_order, Integer("495766656000"));
  EXPECT_EQ(r.vector.alpha, Rational(1, 3));
  EXPECT_EQ(r.vector.entries[5], -6);
}

TEST(TableRows, SharedTableEnds) {
  const auto rows = read_table(kData + "/table1.txt");
  ASSERT_EQ(rows.size(), 164u);
  EXPECT_EQ(rows[0].norm_sq, Rational(2));
  EXPECT_EQ(rows[0].n, 48u);
  EXPECT_EQ(leech().norm_sq(rows[0].vector.ambient()), Rational(2));
  EXPECT_EQ(rows[163].norm_sq, Rational(48, 25));
  EXPECT_EQ(rows[163].stabilizer_order, Integer("244823040"));
}

TEST(TableRows, VectorsAreLeechNormsOfTheRow) {
  for (const char* t : {"/table1.txt", "/table2.txt"})
    for (const auto& r : read_table(kData + t)) EXPECT_EQ(leech().norm_sq(r.vector.ambient()), r.norm_sq) << t << " " << r.index;
}

TEST(TableRows, FacetTotal) {
  const Integer co0("8315553613086720000");
  Integer total = 0;
  std::size_t rows = 0;
  for (const char* t : {"/table1.txt", "/table2.txt"})
    for (const auto& r : read_table(kData + t)) {
      ASSERT_EQ(co0 % r.stabilizer_order, 0) << t << " " << r.index;
      total += co0 / r.stabilizer_order;
      ++rows;
    }
  EXPECT_EQ(rows, 232u);
  EXPECT_EQ(total, Integer("1197362269604214277200"));
}

TEST(TableRows, PerturbedNormIsRejected) {
  const std::string good = "A1^24 | 2 | 48 | 20891566080 | 1/2 | 0 2 0 2 0 -2 2 0 -2 0 0 2 -2 0 -2 0 2 0 0 2 -2 0 2 4";
  EXPECT_NO_THROW(parse_table_row(good));
  std::string bad = good;
  bad.replace(bad.find("| 2 |"), 5, "| 3 |");
  EXPECT_THROW(parse_table_row(bad), TableConsistencyError);
}

TEST(TableRows, MalformedRows) {
  EXPECT_THROW(parse_table_row("x | 2 | 48 | 1 | 1/2 | 1 2 3"), ParseError);
  EXPECT_THROW(parse_table_row("x | 2 | 48 | 1 | 1/2"), ParseError);
  EXPECT_THROW(parse_table_row("x | 2 | -4 | 1 | 1/2 | 0 2 0 2 0 -2 2 0 -2 0 0 2 -2 0 -2 0 2 0 0 2 -2 0 2 4"), ParseError);
  EXPECT_THROW(parse_table_row("x | 2 | 48 | 0 | 1/2 | 0 2 0 2 0 -2 2 0 -2 0 0 2 -2 0 -2 0 2 0 0 2 -2 0 2 4"), ParseError);
}
