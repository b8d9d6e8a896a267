#pragma once

// Dense exact linear algebra over the rationals.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "contact/error.hpp"
#include "contact/rational.hpp"

namespace contact {

using QVector = std::vector<Rational>;

inline QVector zeros(std::size_t n) { return QVector(n); }

inline QVector to_qvector(std::span<const long long> v) {
  QVector r;
  r.reserve(v.size());
  for (long long x : v) r.emplace_back(x);
  return r;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionError("dot of lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    s += a[i] * b[i];
  }
  return s;
}

inline QVector operator+(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVector operator-(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVector operator-(const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline QVector operator*(const Rational& s, const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
}

/** Lexicographic order on equal-length vectors. */
inline bool lex_less(const QVector& a, const QVector& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = compare(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

struct QVectorLess {
  bool operator()(const QVector& a, const QVector& b) const { return lex_less(a, b); }
};

struct QVectorHash {
  std::size_t operator()(const QVector& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& x : v) h = (h ^ x.hash()) * 0x100000001b3ULL;
    return h;
  }
};

/** Scales a nonzero vector to the primitive integer vector on the same ray. */
inline QVector primitive(const QVector& v) {
  Integer l = 1, g = 0;
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    l = lcm(l, x.denominator());
  }
  std::vector<Integer> ints;
  ints.reserve(v.size());
  for (const auto& x : v) {
    Integer n = x.numerator() * (l / x.denominator());
    g = gcd(g, n);
    ints.push_back(std::move(n));
  }
  if (g == 0) return v;
  QVector r;
  r.reserve(v.size());
  for (auto& n : ints) r.emplace_back(Integer(n / g));
  return r;
}

inline std::string to_string(const QVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + ")";
}

/** Row-major dense rational matrix. */
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit QMatrix(const std::vector<QVector>& rows) : rows_(rows.size()), cols_(rows.empty() ? 0 : rows[0].size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("ragged matrix rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }
  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static QMatrix from_ints(const std::vector<std::vector<long long>>& rows) {
    std::vector<QVector> q;
    for (const auto& r : rows) q.push_back(to_qvector(r));
    return QMatrix(q);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  QVector row_vector(std::size_t i) const { return QVector(row(i).begin(), row(i).end()); }
  QVector col_vector(std::size_t j) const {
    QVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product " + a.shape() + " * " + b.shape());
    QMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
      }
    return r;
  }

  /** Matrix-vector product A*x. */
  friend QVector operator*(const QMatrix& a, const QVector& x) {
    if (a.cols_ != x.size()) throw DimensionError("matrix-vector product " + a.shape());
    QVector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) r[i] = dot(a.row(i), x);
    return r;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/** Row echelon data: reduced matrix, pivot column per pivot row. */
struct Echelon {
  QMatrix reduced;
  std::vector<std::size_t> pivot_cols;
};

/**
 * Gauss-Jordan elimination to reduced row echelon form. Pivots are the first
 * nonzero entry in row-major scan order of the remaining submatrix, so the
 * result is deterministic.
 */
inline Echelon rref(QMatrix m) {
  Echelon e;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.reduced = std::move(m);
  return e;
}

inline std::size_t rank(const QMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  // Forward elimination only; cheaper than full rref.
  QMatrix m = a;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = m(r, c).inverse();
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      const Rational f = m(i, c) * inv;
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

inline std::size_t rank(const std::vector<QVector>& rows) {
  if (rows.empty()) return 0;
  return rank(QMatrix(rows));
}

/**
 * Solves A x = b exactly. Returns nullopt when the system is inconsistent.
 * Free variables are set to zero.
 */
inline std::optional<QVector> solve_linear(const QMatrix& a, const QVector& b) {
  if (a.rows() != b.size())
    throw DimensionError("solve_linear: " + a.shape() + " with rhs of length " + std::to_string(b.size()));
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = rref(std::move(aug));
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == a.cols()) return std::nullopt;
  QVector x(a.cols());
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) x[e.pivot_cols[r]] = e.reduced(r, a.cols());
  return x;
}

/** Basis of the right null space {x : A x = 0}. */
inline std::vector<QVector> null_space(const QMatrix& a) {
  Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector x(a.cols());
    x[f] = 1;
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) x[e.pivot_cols[r]] = -e.reduced(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

inline std::optional<QMatrix> inverse(const QMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("inverse of non-square " + a.shape());
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = rref(std::move(aug));
  if (e.pivot_cols.size() < n || e.pivot_cols[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

inline Rational determinant(QMatrix m) {
  if (m.rows() != m.cols()) throw ShapeError("determinant of non-square " + m.shape());
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const Rational inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const Rational f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "PositiveDefinite";
    case Definiteness::PositiveSemidefinite: return "PositiveSemidefinite";
    case Definiteness::Indefinite: return "Indefinite";
  }
  return "?";
}

/**
 * Classifies a symmetric matrix by symmetric Gaussian elimination (LDL^T with
 * diagonal pivoting). A zero pivot whose row is not identically zero proves
 * indefiniteness; a zero row is dropped as part of the kernel.
 */
inline Definiteness definiteness(const QMatrix& m) {
  if (!m.is_symmetric()) throw ShapeError("definiteness requires a symmetric matrix, got " + m.shape());
  QMatrix a = m;
  const std::size_t n = a.rows();
  std::vector<bool> done(n, false);
  bool singular = false;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      if (a(i, i).sign() < 0) return Definiteness::Indefinite;
      if (p == n && a(i, i).sign() > 0) p = i;
    }
    if (p == n) {
      // Remaining diagonal is zero: PSD only if the remaining block vanishes.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && !a(i, j).is_zero()) return Definiteness::Indefinite;
      singular = true;
      break;
    }
    done[p] = true;
    const Rational inv = a(p, p).inverse();
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || a(i, p).is_zero()) continue;
      const Rational f = a(i, p) * inv;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) a(i, j) -= f * a(p, j);
    }
  }
  return singular ? Definiteness::PositiveSemidefinite : Definiteness::PositiveDefinite;
}

inline std::ostream& operator<<(std::ostream& os, const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  return os;
}

}  // namespace contact
