#pragma once

// Lattices with exact Gram data and exact enumeration of lattice points in
// ellipsoids: shortest vectors, points in a ball, closest vectors, and
// Voronoi-relevant vectors.
//
// Enumeration is Fincke-Pohst over an LLL-reduced basis with Schnorr-Euchner
// zig-zag ordering. Every bound is checked in exact rational arithmetic, so
// the returned sets are exact.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contact/error.hpp"
#include "contact/linalg.hpp"

namespace contact {

/** Generators of a matrix group acting on column vectors: x -> M x. */
using MatrixGroupGens = std::vector<QMatrix>;

/** A lattice point: integer coefficients in the lattice basis plus its ambient coordinates. */
struct LatticeVector {
  std::vector<long long> coords;
  QVector ambient;

  friend bool operator==(const LatticeVector& a, const LatticeVector& b) { return a.coords == b.coords; }
  friend bool operator<(const LatticeVector& a, const LatticeVector& b) { return a.coords < b.coords; }
};

/** All shortest nonzero vectors of a lattice together with their squared norm. */
struct MinSet {
  std::vector<LatticeVector> vectors;
  Rational min_norm_sq;

  std::size_t size() const { return vectors.size(); }
  std::vector<QVector> ambient() const {
    std::vector<QVector> r;
    r.reserve(vectors.size());
    for (const auto& v : vectors) r.push_back(v.ambient);
    return r;
  }
};

/**
 * A full-rank lattice in Q^n. Basis vectors are the rows of `basis`. The
 * ambient inner product is <x,y> = x^T form y; the common case form = I/s is
 * recognized and evaluated without the matrix.
 */
class Lattice {
 public:
  Lattice(std::string name, QMatrix basis, QMatrix form) : name_(std::move(name)), basis_(std::move(basis)), form_(std::move(form)) {
    const std::size_t n = basis_.rows();
    if (n == 0 || basis_.cols() != n) throw ShapeError("lattice basis must be square, got " + basis_.shape());
    if (form_.rows() != n || form_.cols() != n) throw ShapeError("inner product form must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!form_.is_symmetric()) throw ShapeError("inner product form is not symmetric");
    scalar_form_ = true;
    for (std::size_t i = 0; i < n && scalar_form_; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && !form_(i, j).is_zero()) { scalar_form_ = false; break; }
        if (i == j && form_(i, i) != form_(0, 0)) { scalar_form_ = false; break; }
      }
    scale_ = form_(0, 0);
    gram_ = QMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        gram_(i, j) = inner(basis_.row_vector(i), basis_.row_vector(j));
        gram_(j, i) = gram_(i, j);
      }
    if (definiteness(gram_) != Definiteness::PositiveDefinite) throw ShapeError("gram matrix of '" + name_ + "' is not positive definite");
    basis_t_inv_ = *inverse(basis_);
  }

  /** Lattice with the scaled standard inner product (sum x_i y_i) / denominator. */
  static Lattice with_denominator(std::string name, QMatrix basis, long long denominator) {
    const std::size_t n = basis.rows();
    QMatrix form(n, n);
    for (std::size_t i = 0; i < n; ++i) form(i, i) = Rational(1, denominator);
    return Lattice(std::move(name), std::move(basis), std::move(form));
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.rows(); }
  const QMatrix& basis() const { return basis_; }
  const QMatrix& form() const { return form_; }
  const QMatrix& gram() const { return gram_; }

  /** s when the form is I/s, otherwise nullopt. */
  std::optional<Rational> inner_product_denominator() const {
    if (!scalar_form_) return std::nullopt;
    return scale_.inverse();
  }

  Rational inner(std::span<const Rational> x, std::span<const Rational> y) const {
    if (scalar_form_) return dot(x, y) * scale_;
    Rational s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].is_zero()) continue;
      Rational t;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (!form_(i, j).is_zero() && !y[j].is_zero()) t += form_(i, j) * y[j];
      s += x[i] * t;
    }
    return s;
  }
  Rational norm_sq(std::span<const Rational> x) const { return inner(x, x); }

  /** form * x: the vector a with a.y = <x,y> for all y. */
  QVector covector(const QVector& x) const {
    if (scalar_form_) return scale_ * x;
    return form_ * x;
  }

  QVector ambient(const std::vector<long long>& coords) const {
    QVector x(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (coords[i] == 0) continue;
      const Rational c(coords[i]);
      for (std::size_t j = 0; j < dim(); ++j)
        if (!basis_(i, j).is_zero()) x[j] += c * basis_(i, j);
    }
    return x;
  }

  /** Rational coefficients c with x = sum c_i b_i. */
  QVector coefficients(const QVector& x) const {
    // x^T = c^T B  =>  c^T = x^T B^{-1}
    QVector c(dim());
    for (std::size_t j = 0; j < dim(); ++j)
      for (std::size_t i = 0; i < dim(); ++i)
        if (!x[i].is_zero() && !basis_t_inv_(i, j).is_zero()) c[j] += x[i] * basis_t_inv_(i, j);
    return c;
  }

  bool contains(const QVector& x) const {
    const auto c = coefficients(x);
    return std::all_of(c.begin(), c.end(), [](const Rational& r) { return r.is_integer(); });
  }

  LatticeVector make_vector(std::vector<long long> coords) const {
    LatticeVector v{std::move(coords), {}};
    v.ambient = ambient(v.coords);
    return v;
  }

  /** Lattice vector at ambient point x, or nullopt when x is not in the lattice. */
  std::optional<LatticeVector> lattice_vector(const QVector& x) const {
    const auto c = coefficients(x);
    std::vector<long long> coords;
    for (const auto& r : c) {
      if (!r.is_integer()) return std::nullopt;
      coords.push_back(r.numerator().get_si());
    }
    return LatticeVector{std::move(coords), x};
  }

 private:
  std::string name_;
  QMatrix basis_;
  QMatrix form_;
  QMatrix gram_;
  QMatrix basis_t_inv_;
  bool scalar_form_ = false;
  Rational scale_;
};

/** Result of LLL reduction on a Gram matrix: reduced = transform * original basis. */
struct LllResult {
  std::vector<std::vector<long long>> transform;
  QMatrix gram;
};

/**
 * Exact LLL reduction of a positive definite Gram matrix with parameter delta
 * (default 3/4). Works on the Gram matrix only; the unimodular transform is
 * returned so callers can map coordinates back.
 */
inline LllResult lll_reduce(const QMatrix& gram, const Rational& delta = Rational(3, 4)) {
  const std::size_t n = gram.rows();
  QMatrix g = gram;
  std::vector<std::vector<long long>> u(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  QMatrix mu(n, n);
  std::vector<Rational> b(n);
  auto gram_schmidt_row = [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = g(i, j);
      for (std::size_t l = 0; l < j; ++l) s -= mu(j, l) * mu(i, l) * b[l];
      mu(i, j) = s / b[j];
    }
    Rational s = g(i, i);
    for (std::size_t l = 0; l < i; ++l) s -= mu(i, l) * mu(i, l) * b[l];
    b[i] = s;
  };
  for (std::size_t i = 0; i < n; ++i) gram_schmidt_row(i);

  auto reduce = [&](std::size_t k, std::size_t l) {
    if (abs(mu(k, l)) * 2 <= Rational(1)) return;
    const Integer qz = mu(k, l).round();
    const long long q = qz.get_si();
    const Rational qr(q);
    // b_k <- b_k - q b_l
    const Rational gkk = g(k, k) - 2 * qr * g(k, l) + qr * qr * g(l, l);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      g(k, j) -= qr * g(l, j);
      g(j, k) = g(k, j);
    }
    g(k, k) = gkk;
    for (std::size_t j = 0; j < n; ++j) u[k][j] -= q * u[l][j];
    mu(k, l) -= qr;
    for (std::size_t i = 0; i < l; ++i) mu(k, i) -= qr * mu(l, i);
  };

  auto swap_rows = [&](std::size_t k) {
    const std::size_t j = k - 1;
    for (std::size_t c = 0; c < n; ++c) std::swap(g(k, c), g(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(g(r, k), g(r, j));
    std::swap(u[k], u[j]);
    for (std::size_t c = 0; c < j; ++c) std::swap(mu(k, c), mu(j, c));
    const Rational m = mu(k, j);
    const Rational bb = b[k] + m * m * b[j];
    mu(k, j) = m * b[j] / bb;
    b[k] = b[j] * b[k] / bb;
    b[j] = bb;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational t = mu(i, k);
      mu(i, k) = mu(i, j) - m * t;
      mu(i, j) = t + mu(k, j) * mu(i, k);
    }
  };

  std::size_t k = 1;
  while (k < n) {
    reduce(k, k - 1);
    const Rational lhs = b[k];
    const Rational rhs = (delta - mu(k, k - 1) * mu(k, k - 1)) * b[k - 1];
    if (lhs < rhs) {
      swap_rows(k);
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
      ++k;
    }
  }
  return {std::move(u), std::move(g)};
}

namespace detail {

/**
 * Exact Fincke-Pohst enumeration of integer vectors x with
 * (x - t)^T G (x - t) <= bound, G given by its Gram-Schmidt data.
 */
class EllipsoidEnumerator {
 public:
  explicit EllipsoidEnumerator(const QMatrix& gram) : n_(gram.rows()), mu_(n_, n_), q_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Rational s = gram(i, j);
        for (std::size_t l = 0; l < j; ++l) s -= mu_(j, l) * mu_(i, l) * q_[l];
        mu_(i, j) = s / q_[j];
      }
      Rational s = gram(i, i);
      for (std::size_t l = 0; l < i; ++l) s -= mu_(i, l) * mu_(i, l) * q_[l];
      q_[i] = s;
    }
  }

  enum class Mode {
    kAll,        // every point within the fixed bound
    kShrinking,  // bound shrinks to the best value found; ties kept
  };

  /**
   * Visits lattice points with distance^2 <= bound. In shrinking mode the
   * bound is lowered whenever a closer point is reached. `skip_zero` excludes
   * x = 0; `half` enumerates one of each pair {x, -x} (only valid for t = 0).
   * Returns the number of enumeration nodes.
   */
  std::uint64_t run(const QVector& center, Rational bound, Mode mode, bool skip_zero, bool half,
                    const std::function<void(const std::vector<long long>&, const Rational&)>& visit,
                    Rational* final_bound = nullptr) const {
    const std::size_t n = n_;
    std::vector<long long> x(n, 0);
    std::vector<Rational> partial(n + 1);  // partial[i] = sum_{j >= i} q_j (x_j - c_j)^2
    std::vector<Rational> ctr(n);
    std::vector<bool> all_zero_above(n + 1, true);
    std::uint64_t nodes = 0;

    // c_i = t_i - sum_{j > i} mu_{j,i} (x_j - t_j)
    auto center_at = [&](std::size_t i) {
      Rational c = center[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (mu_(j, i).is_zero()) continue;
        const Rational y = Rational(x[j]) - center[j];
        if (!y.is_zero()) c -= mu_(j, i) * y;
      }
      return c;
    };

    std::function<void(std::size_t)> descend = [&](std::size_t i) {
      ctr[i] = center_at(i);
      const Rational& c = ctr[i];
      const long long x0 = c.round().get_si();
      const bool positive_only = half && all_zero_above[i + 1];
      auto try_value = [&](long long v) -> bool {
        const Rational d = Rational(v) - c;
        Rational p = partial[i + 1] + q_[i] * d * d;
        if (p > bound) return false;
        ++nodes;
        x[i] = v;
        if (i == 0) {
          const bool zero = all_zero_above[1] && v == 0;
          if (!(skip_zero && zero)) {
            if (mode == Mode::kShrinking && p < bound) bound = p;
            visit(x, p);
          }
        } else {
          partial[i] = std::move(p);
          all_zero_above[i] = all_zero_above[i + 1] && v == 0;
          descend(i - 1);
        }
        return true;
      };
      // Zig-zag outward from the nearest integer; each side stops at the first failure.
      long long up = x0, down = x0 - 1;
      bool up_open = true, down_open = true;
      if (positive_only) {
        if (up < 0) up = 0;
        down_open = down >= 0;
      }
      while (up_open || down_open) {
        bool take_up;
        if (up_open && down_open) {
          take_up = abs(Rational(up) - c) <= abs(Rational(down) - c);
        } else {
          take_up = up_open;
        }
        if (take_up) {
          up_open = try_value(up);
          ++up;
        } else {
          down_open = try_value(down);
          --down;
          if (positive_only && down < 0) down_open = false;
        }
      }
      x[i] = 0;
    };
    descend(n - 1);
    if (final_bound) *final_bound = bound;
    return nodes;
  }

 private:
  std::size_t n_;
  QMatrix mu_;
  std::vector<Rational> q_;
};

}  // namespace detail

/**
 * Enumeration front end bound to one lattice. Precomputes the LLL-reduced
 * basis and its Gram-Schmidt data; queries are const and thread-safe.
 */
class LatticeEnumerator {
 public:
  explicit LatticeEnumerator(const Lattice& lattice)
      : lattice_(&lattice), lll_(lll_reduce(lattice.gram())), enumerator_(lll_.gram) {
    const std::size_t n = lattice.dim();
    QMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u(i, j) = lll_.transform[i][j];
    reduced_basis_ = u * lattice.basis();
    reduced_t_inv_ = *inverse(reduced_basis_);
  }

  const Lattice& lattice() const { return *lattice_; }
  const QMatrix& reduced_gram() const { return lll_.gram; }

  /** All lattice points p with <p - center, p - center> <= r_sq, sorted by coordinates. */
  std::vector<LatticeVector> vectors_in_ball(const QVector& center, const Rational& r_sq) const {
    if (r_sq.sign() < 0) return {};
    std::vector<LatticeVector> out;
    enumerator_.run(reduced_coefficients(center), r_sq, Mode::kAll, false, false,
                    [&](const std::vector<long long>& y, const Rational&) { out.push_back(from_reduced(y)); });
    std::sort(out.begin(), out.end());
    return out;
  }

  /** Distance^2 from x to the lattice and every lattice point attaining it. */
  std::pair<Rational, std::vector<LatticeVector>> closest_vectors(const QVector& x) const {
    const QVector t = reduced_coefficients(x);
    // Babai rounding gives an initial upper bound.
    std::vector<long long> babai(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) babai[i] = t[i].round().get_si();
    const LatticeVector b = from_reduced(babai);
    Rational bound = lattice_->norm_sq(x - b.ambient);
    std::vector<std::pair<std::vector<long long>, Rational>> found;
    enumerator_.run(t, bound, Mode::kShrinking, false, false,
                    [&](const std::vector<long long>& y, const Rational& d) { found.emplace_back(y, d); }, &bound);
    std::vector<LatticeVector> out;
    for (auto& [y, d] : found)
      if (d == bound) out.push_back(from_reduced(y));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return {bound, std::move(out)};
  }

  /** The set of shortest nonzero vectors, negation-closed, sorted by coordinates. */
  MinSet shortest_vectors() const {
    const std::size_t n = lattice_->dim();
    Rational bound = lll_.gram(0, 0);
    for (std::size_t i = 1; i < n; ++i) bound = std::min(bound, lll_.gram(i, i));
    std::vector<std::pair<std::vector<long long>, Rational>> found;
    enumerator_.run(QVector(n), bound, Mode::kShrinking, true, true,
                    [&](const std::vector<long long>& y, const Rational& d) { found.emplace_back(y, d); }, &bound);
    MinSet m;
    m.min_norm_sq = bound;
    for (auto& [y, d] : found) {
      if (d != bound) continue;
      m.vectors.push_back(from_reduced(y));
      std::vector<long long> neg(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
      m.vectors.push_back(from_reduced(neg));
    }
    std::sort(m.vectors.begin(), m.vectors.end());
    return m;
  }

 private:
  using Mode = detail::EllipsoidEnumerator::Mode;

  QVector reduced_coefficients(const QVector& x) const {
    const std::size_t n = x.size();
    QVector c(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (!x[i].is_zero() && !reduced_t_inv_(i, j).is_zero()) c[j] += x[i] * reduced_t_inv_(i, j);
    return c;
  }

  LatticeVector from_reduced(const std::vector<long long>& y) const {
    const std::size_t n = y.size();
    std::vector<long long> coords(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) coords[j] += y[i] * lll_.transform[i][j];
    }
    return lattice_->make_vector(std::move(coords));
  }

  const Lattice* lattice_;
  LllResult lll_;
  detail::EllipsoidEnumerator enumerator_;
  QMatrix reduced_basis_;
  QMatrix reduced_t_inv_;
};

inline MinSet shortest_vectors(const Lattice& lattice) { return LatticeEnumerator(lattice).shortest_vectors(); }

inline std::vector<LatticeVector> vectors_in_ball(const Lattice& lattice, const QVector& center, const Rational& r_sq) {
  return LatticeEnumerator(lattice).vectors_in_ball(center, r_sq);
}

inline std::pair<Rational, std::vector<LatticeVector>> closest_vectors(const Lattice& lattice, const QVector& x) {
  return LatticeEnumerator(lattice).closest_vectors(x);
}

/**
 * Voronoi-relevant vectors: for each nonzero class v + 2L, the class minima
 * when they are exactly one pair +-v. Cost grows as 2^n, hence the limit.
 */
inline std::vector<LatticeVector> voronoi_relevant_vectors(const Lattice& lattice, std::size_t max_dim = 10) {
  const std::size_t n = lattice.dim();
  if (n > max_dim)
    throw ResourceLimit("voronoi_relevant_vectors on dimension " + std::to_string(n) + " exceeds limit " + std::to_string(max_dim));
  // Minima of c + 2L are 2 * (closest points of L to -c/2) + c.
  const LatticeEnumerator en(lattice);
  std::vector<LatticeVector> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<long long> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1;
    const QVector target = Rational(-1, 2) * lattice.ambient(c);
    auto [d, pts] = en.closest_vectors(target);
    if (pts.size() != 2) continue;
    for (const auto& p : pts) {
      std::vector<long long> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = 2 * p.coords[i] + c[i];
      out.push_back(lattice.make_vector(std::move(v)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace contact
