#include <gtest/gtest.h>

#include <random>

#include "contact/linalg.hpp"
#include "contact/rational.hpp"

using namespace contact;

namespace {

QMatrix mat(const std::vector<std::vector<long long>>& rows) { return QMatrix::from_ints(rows); }

QMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int span) {
  std::uniform_int_distribution<int> d(-span, span);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Rational(d(rng), 1 + std::abs(d(rng)));
  return m;
}

// Sylvester: PD iff all leading minors > 0; PSD iff all principal minors >= 0.
Definiteness brute_definiteness(const QMatrix& m) {
  const std::size_t n = m.rows();
  bool all_positive = true;
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix s(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) s(i, j) = m(i, j);
    if (determinant(s).sign() <= 0) all_positive = false;
  }
  if (all_positive) return Definiteness::PositiveDefinite;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) idx.push_back(i);
    QMatrix s(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = m(idx[i], idx[j]);
    if (determinant(s).sign() < 0) return Definiteness::Indefinite;
  }
  return Definiteness::PositiveSemidefinite;
}

}  // namespace

TEST(Rational, NormalForm) {
  EXPECT_EQ(Rational(6, -4).str(), "-3/2");
  EXPECT_EQ(Rational(0, 7).str(), "0");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("+3"), Rational(3));
  EXPECT_EQ(Rational(4, 2).denominator(), 1);
}

TEST(Rational, ParseRejectsGarbage) {
  EXPECT_THROW(Rational::parse("1/0"), ParseError);
  EXPECT_THROW(Rational::parse(""), ParseError);
  EXPECT_THROW(Rational::parse("1.5"), ParseError);
  EXPECT_THROW(Rational::parse("3/-2"), ParseError);
}

TEST(Rational, PromotesPastInt64) {
  Rational x(std::numeric_limits<long long>::max() - 1);
  Rational y = x * x * x;
  EXPECT_FALSE(y.is_small());
  EXPECT_EQ(y / x / x, x);
  EXPECT_TRUE((y / x / x).is_small());
  EXPECT_EQ(Rational::parse("123456789012345678901234567890/3").str(), "41152263004115226300411522630");
}

TEST(Rational, RandomNormalFormIsUnique) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> d(-1000, 1000);
  for (int k = 0; k < 2000; ++k) {
    long long a = d(rng), b = d(rng), s = d(rng);
    if (b == 0 || s == 0) continue;
    const Rational x(a, b), y(a * s, b * s);
    EXPECT_EQ(x, y);
    EXPECT_EQ(x.str(), y.str());
    EXPECT_EQ(std::hash<Rational>{}(x), std::hash<Rational>{}(y));
  }
}

TEST(SolveLinear, Examples) {
  const auto x = solve_linear(QMatrix::identity(3), {Rational(1), Rational(2), Rational(3)});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (QVector{Rational(1), Rational(2), Rational(3)}));
  const auto y = solve_linear(mat({{1, 1}, {1, -1}}), {Rational(2), Rational(0)});
  ASSERT_TRUE(y);
  EXPECT_EQ(*y, (QVector{Rational(1), Rational(1)}));
  EXPECT_FALSE(solve_linear(mat({{1, 1}, {2, 2}}), {Rational(1), Rational(3)}));
}

TEST(SolveLinear, SolutionReproducesRhs) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const QMatrix a = random_matrix(rng, r, c, 4);
    QVector b(r);
    for (auto& v : b) v = Rational(static_cast<long long>(rng() % 9) - 4);
    if (auto x = solve_linear(a, b)) EXPECT_EQ(a * *x, b);
    else EXPECT_LT(rank(a), r);
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(QMatrix::identity(4)), 4u);
  EXPECT_EQ(rank(QMatrix(3, 3)), 0u);
  EXPECT_EQ(rank(mat({{1, -1}, {-1, 1}})), 1u);
}

TEST(Rank, EqualsRankOfTranspose) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    QMatrix a = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6, 2);
    if (a.rows() > 1 && rng() % 2)
      for (std::size_t j = 0; j < a.cols(); ++j) a(0, j) = a(1, j) * Rational(2);
    EXPECT_EQ(rank(a), rank(a.transpose()));
  }
}

TEST(Definiteness, Examples) {
  QMatrix a2(2, 2);
  a2(0, 0) = a2(1, 1) = Rational(1);
  a2(0, 1) = a2(1, 0) = Rational(-1, 2);
  EXPECT_EQ(definiteness(a2), Definiteness::PositiveDefinite);
  EXPECT_EQ(definiteness(mat({{1, -1}, {-1, 1}})), Definiteness::PositiveSemidefinite);
  EXPECT_EQ(definiteness(mat({{0, 1}, {1, 0}})), Definiteness::Indefinite);
}

TEST(Definiteness, AgreesWithPrincipalMinors) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + rng() % 6;
    const QMatrix b = random_matrix(rng, n, 1 + rng() % n, 2);
    QMatrix m = b * b.transpose();  // PSD, often singular
    if (rng() % 3 == 0) m(0, 0) -= Rational(1);
    EXPECT_EQ(definiteness(m), brute_definiteness(m));
  }
}

TEST(Inverse, RoundTrip) {
  const QMatrix a = mat({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  const auto inv = inverse(a);
  ASSERT_TRUE(inv);
  EXPECT_EQ(a * *inv, QMatrix::identity(3));
  EXPECT_EQ(determinant(a), Rational(4));
  EXPECT_FALSE(inverse(mat({{1, 2}, {2, 4}})));
}

TEST(NullSpace, KillsMatrix) {
  const QMatrix a = mat({{1, 2, 3}, {2, 4, 6}});
  const auto ns = null_space(a);
  EXPECT_EQ(ns.size(), 2u);
  for (const auto& v : ns) EXPECT_TRUE(is_zero(a * v));
}

TEST(Primitive, ScalesToCoprimeIntegers) {
  EXPECT_EQ(primitive({Rational(1, 2), Rational(-3, 4), Rational(0)}), (QVector{Rational(2), Rational(-3), Rational(0)}));
}
