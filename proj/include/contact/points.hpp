#pragma once

// A finite point set (typically Min L) stored as integer rows over a common
// denominator, with exact integer inner products and index lookup.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contact/error.hpp"
#include "contact/lattice.hpp"
#include "contact/linalg.hpp"

namespace contact {

class PointSet {
 public:
  PointSet() = default;

  /** Points given as ambient vectors with the inner product <x,y> = x^T form y. */
  PointSet(const std::vector<QVector>& points, const QMatrix& form) : dim_(form.rows()), count_(points.size()) {
    Integer den = 1;
    for (const auto& p : points) {
      if (p.size() != dim_) throw DimensionError("point of length " + std::to_string(p.size()) + " in a " + std::to_string(dim_) + "-dim set");
      for (const auto& x : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.denominator().get_mpz_t());
    }
    Integer fden = 1;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) mpz_lcm(fden.get_mpz_t(), fden.get_mpz_t(), form(i, j).denominator().get_mpz_t());
    if (!den.fits_slong_p() || !fden.fits_slong_p()) throw ResourceLimit("point denominators too large");
    den_ = den.get_si();
    form_den_ = fden.get_si();
    data_.resize(count_ * dim_);
    for (std::size_t k = 0; k < count_; ++k)
      for (std::size_t i = 0; i < dim_; ++i) {
        const Integer v = (points[k][i] * Rational(den_)).numerator();
        if (!v.fits_slong_p()) throw ResourceLimit("point coordinate too large");
        data_[k * dim_ + i] = v.get_si();
      }
    form_int_.resize(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        form_int_[i * dim_ + j] = (form(i, j) * Rational(form_den_)).numerator().get_si();
      }
    form_ = form;
    covec_.resize(count_ * dim_);
    for (std::size_t k = 0; k < count_; ++k)
      for (std::size_t j = 0; j < dim_; ++j) {
        long long s = 0;
        for (std::size_t i = 0; i < dim_; ++i) s += data_[k * dim_ + i] * form_int_[i * dim_ + j];
        covec_[k * dim_ + j] = s;
      }
    order_.resize(count_);
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return std::lexicographical_compare(row(a).begin(), row(a).end(), row(b).begin(), row(b).end()); });
    for (std::size_t k = 1; k < count_; ++k)
      if (std::equal(row(order_[k]).begin(), row(order_[k]).end(), row(order_[k - 1]).begin())) throw ShapeError("duplicate point in point set");
  }

  static PointSet from_min_set(const MinSet& m, const Lattice& l) { return PointSet(m.ambient(), l.form()); }

  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  long long denominator() const { return den_; }
  const QMatrix& form() const { return form_; }

  /** Integer coordinates of point k; the point is row(k) / denominator(). */
  std::span<const long long> row(std::size_t k) const { return {data_.data() + k * dim_, dim_}; }
  /** Integer covector of point k: form * row(k) * form_denominator. */
  std::span<const long long> covector(std::size_t k) const { return {covec_.data() + k * dim_, dim_}; }

  QVector point(std::size_t k) const {
    QVector v;
    v.reserve(dim_);
    for (long long x : row(k)) v.emplace_back(x, den_);
    return v;
  }

  /** Numerator of <p_a, p_b>; the inner product is ip(a,b) / ip_denominator(). */
  long long ip(std::size_t a, std::size_t b) const {
    const auto x = row(a);
    const auto y = covector(b);
    long long s = 0;
    for (std::size_t i = 0; i < dim_; ++i) s += x[i] * y[i];
    return s;
  }
  long long ip_denominator() const { return den_ * den_ * form_den_; }
  Rational inner(std::size_t a, std::size_t b) const { return Rational(ip(a, b), ip_denominator()); }

  /** Index of the point with integer coordinates x (over the same denominator). */
  std::optional<std::uint32_t> find(std::span<const long long> x) const {
    auto it = std::lower_bound(order_.begin(), order_.end(), x, [&](std::uint32_t k, std::span<const long long> v) {
      return std::lexicographical_compare(row(k).begin(), row(k).end(), v.begin(), v.end());
    });
    if (it == order_.end() || !std::equal(row(*it).begin(), row(*it).end(), x.begin())) return std::nullopt;
    return *it;
  }
  std::optional<std::uint32_t> find(const QVector& x) const {
    std::vector<long long> v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      const Rational s = x[i] * Rational(den_);
      if (!s.is_integer() || !s.numerator().fits_slong_p()) return std::nullopt;
      v[i] = s.numerator().get_si();
    }
    return find(v);
  }

  /** Indices of a maximal linearly independent subset, chosen greedily by index. */
  std::vector<std::uint32_t> spanning_indices() const {
    std::vector<std::uint32_t> out;
    std::vector<QVector> rows;
    for (std::size_t k = 0; k < count_ && out.size() < dim_; ++k) {
      rows.push_back(point(k));
      if (rank(rows) == rows.size()) out.push_back(static_cast<std::uint32_t>(k));
      else rows.pop_back();
    }
    return out;
  }

  /** Restriction to the given indices, in the given order. */
  PointSet subset(const std::vector<std::uint32_t>& idx) const {
    std::vector<QVector> pts;
    pts.reserve(idx.size());
    for (auto k : idx) pts.push_back(point(k));
    return PointSet(pts, form_);
  }

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  long long den_ = 1;
  long long form_den_ = 1;
  QMatrix form_;
  std::vector<long long> data_;
  std::vector<long long> form_int_;
  std::vector<long long> covec_;
  std::vector<std::uint32_t> order_;
};

}  // namespace contact
