#pragma once

// Exact H- and V-representations, a rational active-set simplex for an
// initial vertex, double description conversion, and the incidence /
// edge-walk primitives used by the orbit engine.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "contact/error.hpp"
#include "contact/lattice.hpp"
#include "contact/linalg.hpp"
#include "contact/rational.hpp"

namespace contact {

/** Indices of the inequalities tight at a point, sorted. */
struct IncidenceSet {
  std::vector<std::uint32_t> indices;
  std::size_t rank = 0;    // rank of the tight normals
  bool vertex = false;     // rank == dim

  std::size_t size() const { return indices.size(); }
  friend bool operator==(const IncidenceSet& a, const IncidenceSet& b) { return a.indices == b.indices; }
};

namespace detail {

/** x = num / den with small integer entries, when possible. */
struct ScaledVector {
  std::vector<long long> num;
  long long den = 1;
  bool ok = false;
};

inline constexpr long kFastEntryLimit = 1L << 31;  // gmpxx has no long long overloads

inline ScaledVector scale_to_ints(const QVector& x) {
  ScaledVector s;
  Integer d = 1;
  for (const auto& v : x)
    if (!v.is_integer()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.denominator().get_mpz_t());
  if (!d.fits_slong_p() || d >= kFastEntryLimit) return s;
  s.den = d.get_si();
  s.num.reserve(x.size());
  for (const auto& v : x) {
    const Integer n = v.numerator() * (d / v.denominator());
    if (!n.fits_slong_p() || abs(n) >= kFastEntryLimit) return s;
    s.num.push_back(n.get_si());
  }
  s.ok = true;
  return s;
}

inline Rational rational_from(i128 n, i128 d) {
  if (fits_small(n) && fits_small(d)) return Rational(static_cast<long long>(n), static_cast<long long>(d));
  return Rational(mpz_from_i128(n), mpz_from_i128(d));
}

/** Sign of p1/q1 - p2/q2 for q1, q2 > 0. */
inline int compare_fractions(i128 p1, i128 q1, i128 p2, i128 q2) {
  constexpr i128 lim = static_cast<i128>(1) << 62;
  auto small = [&](i128 v) { return v < lim && v > -lim; };
  if (small(p1) && small(q1) && small(p2) && small(q2)) {
    const i128 l = p1 * q2, r = p2 * q1;
    return (l > r) - (l < r);
  }
  const mpz_class l = mpz_from_i128(p1) * mpz_from_i128(q2);
  const mpz_class r = mpz_from_i128(p2) * mpz_from_i128(q1);
  return cmp(l, r) > 0 ? 1 : (cmp(l, r) < 0 ? -1 : 0);
}

}  // namespace detail

/** Where a ray from x first leaves the polyhedron: step length and the inequalities hit. */
struct RayExit {
  Rational t;
  std::vector<std::uint32_t> hits;  // sorted
};

/** {x : a_i . x <= b_i}. */
class HPolytope {
 public:
  HPolytope() = default;

  HPolytope(std::size_t dim, std::vector<QVector> normals, QVector rhs) : dim_(dim), a_(std::move(normals)), b_(std::move(rhs)) {
    if (a_.size() != b_.size()) throw ShapeError(std::to_string(a_.size()) + " normals but " + std::to_string(b_.size()) + " right-hand sides");
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (a_[i].size() != dim_) throw DimensionError("inequality " + std::to_string(i) + " has length " + std::to_string(a_[i].size()));
      if (is_zero(a_[i])) throw DimensionError("inequality " + std::to_string(i) + " has a zero normal");
    }
    build_fast();
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return a_.size(); }
  const QVector& normal(std::size_t i) const { return a_[i]; }
  const Rational& rhs(std::size_t i) const { return b_[i]; }
  const std::vector<QVector>& normals() const { return a_; }
  const QVector& rhs() const { return b_; }

  bool is_cone() const {
    return std::all_of(b_.begin(), b_.end(), [](const Rational& r) { return r.is_zero(); });
  }

  /** a_i . x for every i. */
  std::vector<Rational> products(const QVector& x) const {
    check_dim(x);
    std::vector<Rational> out(size());
    const auto s = fast_ ? detail::scale_to_ints(x) : detail::ScaledVector{};
    if (s.ok) {
      const detail::i128 den = static_cast<detail::i128>(den_) * s.den;
      for (std::size_t i = 0; i < size(); ++i) out[i] = detail::rational_from(fast_dot(i, s.num), den);
    } else {
      for (std::size_t i = 0; i < size(); ++i) out[i] = dot(a_[i], x);
    }
    return out;
  }

  /** Sign of b_i - a_i . x for every i: 1 strict, 0 tight, -1 violated. */
  std::vector<int> slack_signs(const QVector& x) const {
    check_dim(x);
    std::vector<int> out(size());
    const auto s = fast_ ? detail::scale_to_ints(x) : detail::ScaledVector{};
    if (s.ok) {
      for (std::size_t i = 0; i < size(); ++i) {
        const detail::i128 v = static_cast<detail::i128>(b_int_[i]) * s.den - fast_dot(i, s.num);
        out[i] = (v > 0) - (v < 0);
      }
    } else {
      for (std::size_t i = 0; i < size(); ++i) out[i] = (b_[i] - dot(a_[i], x)).sign();
    }
    return out;
  }

  /**
   * Smallest t >= 0 with a_i . (x + t d) = b_i over the inequalities with
   * a_i . d > 0; nullopt when there is none. x must be feasible.
   */
  std::optional<RayExit> ray_exit(const QVector& x, const QVector& d) const {
    check_dim(x);
    check_dim(d);
    const auto sx = fast_ ? detail::scale_to_ints(x) : detail::ScaledVector{};
    const auto sd = sx.ok ? detail::scale_to_ints(d) : detail::ScaledVector{};
    if (sx.ok && sd.ok) return fast_ray_exit(sx, sd);
    std::optional<RayExit> best;
    for (std::size_t i = 0; i < size(); ++i) {
      const Rational ad = dot(a_[i], d);
      if (ad.sign() <= 0) continue;
      const Rational slack = b_[i] - dot(a_[i], x);
      if (slack.sign() < 0) throw NotInPolytope(i, "ray start is infeasible");
      const Rational t = slack / ad;
      if (!best || t < best->t) best = RayExit{t, {static_cast<std::uint32_t>(i)}};
      else if (t == best->t) best->hits.push_back(static_cast<std::uint32_t>(i));
    }
    return best;
  }

  /** Indices i whose inequality repeats an earlier one up to positive scaling. */
  std::vector<std::uint32_t> duplicates() const {
    std::vector<std::pair<QVector, std::uint32_t>> keyed;
    keyed.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) keyed.emplace_back(normalized(i), static_cast<std::uint32_t>(i));
    std::sort(keyed.begin(), keyed.end(), [](const auto& p, const auto& q) {
      return lex_less(p.first, q.first) || (p.first == q.first && p.second < q.second);
    });
    std::vector<std::uint32_t> dup;
    for (std::size_t k = 1; k < keyed.size(); ++k)
      if (keyed[k].first == keyed[k - 1].first) dup.push_back(keyed[k].second);
    std::sort(dup.begin(), dup.end());
    return dup;
  }

  /** Primitive integer vector (a, b) on the ray of inequality i. */
  QVector normalized(std::size_t i) const {
    QVector v = a_[i];
    v.push_back(b_[i]);
    return primitive(v);
  }

  HPolytope subsystem(const std::vector<std::uint32_t>& rows) const {
    std::vector<QVector> a;
    QVector b;
    for (auto r : rows) {
      a.push_back(a_[r]);
      b.push_back(b_[r]);
    }
    return HPolytope(dim_, std::move(a), std::move(b));
  }

 private:
  void check_dim(const QVector& x) const {
    if (x.size() != dim_) throw DimensionError("vector of length " + std::to_string(x.size()) + " for a " + std::to_string(dim_) + "-dim polytope");
  }

  // Integer copy of the system over one denominator, used when entries are small.
  void build_fast() {
    fast_ = false;
    Integer d = 1;
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& v : a_[i]) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.denominator().get_mpz_t());
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), b_[i].denominator().get_mpz_t());
      if (d >= detail::kFastEntryLimit) return;
    }
    den_ = d.get_si();
    a_int_.assign(size() * dim_, 0);
    b_int_.assign(size(), 0);
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        const Integer v = (a_[i][j] * Rational(den_)).numerator();
        if (abs(v) >= detail::kFastEntryLimit) return;
        a_int_[i * dim_ + j] = v.get_si();
      }
      const Integer v = (b_[i] * Rational(den_)).numerator();
      if (abs(v) >= detail::kFastEntryLimit) return;
      b_int_[i] = v.get_si();
    }
    fast_ = true;
  }

  detail::i128 fast_dot(std::size_t i, const std::vector<long long>& x) const {
    detail::i128 s = 0;
    const long long* a = a_int_.data() + i * dim_;
    for (std::size_t j = 0; j < dim_; ++j) s += static_cast<detail::i128>(a[j]) * x[j];
    return s;
  }

  std::optional<RayExit> fast_ray_exit(const detail::ScaledVector& sx, const detail::ScaledVector& sd) const {
    // t_i = p_i * dd / (q_i * dx) with p_i = B_i dx - A_i X and q_i = A_i R
    bool found = false;
    detail::i128 bp = 0, bq = 1;
    std::vector<std::uint32_t> hits;
    for (std::size_t i = 0; i < size(); ++i) {
      const detail::i128 q = fast_dot(i, sd.num);
      if (q <= 0) continue;
      const detail::i128 p = static_cast<detail::i128>(b_int_[i]) * sx.den - fast_dot(i, sx.num);
      if (p < 0) throw NotInPolytope(i, "ray start is infeasible");
      const int c = found ? detail::compare_fractions(p, q, bp, bq) : -1;
      if (c < 0) {
        found = true;
        bp = p;
        bq = q;
        hits.assign(1, static_cast<std::uint32_t>(i));
      } else if (c == 0) {
        hits.push_back(static_cast<std::uint32_t>(i));
      }
    }
    if (!found) return std::nullopt;
    const Integer num = detail::mpz_from_i128(bp) * static_cast<long>(sd.den);
    const Integer den = detail::mpz_from_i128(bq) * static_cast<long>(sx.den);
    return RayExit{Rational(num, den), std::move(hits)};
  }

  std::size_t dim_ = 0;
  std::vector<QVector> a_;
  QVector b_;
  bool fast_ = false;
  long long den_ = 1;
  std::vector<long long> a_int_;
  std::vector<long long> b_int_;
};

/** Vertices, plus rays for unbounded polyhedra and cones. */
struct VPolytope {
  std::size_t dim = 0;
  std::vector<QVector> vertices;
  std::vector<QVector> rays;
};

/** Cont(L)* = {x : <x,v> <= <v,v>/2 for v in Min L}; inequality i belongs to min.vectors[i]. */
inline HPolytope contact_polar(const Lattice& l, const MinSet& min) {
  std::vector<QVector> a;
  QVector b;
  a.reserve(min.size());
  b.reserve(min.size());
  const Rational half = min.min_norm_sq / Rational(2);
  for (const auto& v : min.vectors) {
    a.push_back(l.covector(l.ambient(v.coords)));
    b.push_back(half);
  }
  return HPolytope(l.dim(), std::move(a), std::move(b));
}

inline HPolytope contact_polar(const Lattice& l) { return contact_polar(l, shortest_vectors(l)); }

inline IncidenceSet incidence_set(const HPolytope& h, const QVector& x) {
  const auto s = h.slack_signs(x);
  IncidenceSet inc;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0) throw NotInPolytope(i, "a.x exceeds b at " + to_string(x));
    if (s[i] == 0) inc.indices.push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<QVector> rows;
  rows.reserve(inc.size());
  for (auto i : inc.indices) rows.push_back(h.normal(i));
  inc.rank = rank(rows);
  inc.vertex = inc.rank == h.dim();
  return inc;
}

// ---------------------------------------------------------------------------
// Linear programming

struct LpOptions {
  std::uint64_t seed = 1;
  std::optional<QVector> objective;  // maximized; random when absent
  std::size_t max_pivots = 1'000'000;
};

struct LpVertex {
  QVector vertex;
  IncidenceSet tight;
  QVector objective;
  std::size_t pivots = 0;
};

namespace detail {

inline QVector random_objective(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-(1LL << 20), 1LL << 20);
  std::uniform_int_distribution<long long> den(1, 1LL << 10);
  QVector c(n);
  for (auto& x : c) x = Rational(num(rng), den(rng));
  if (is_zero(c)) c[0] = 1;
  return c;
}

/** Basis rows as a matrix. */
inline QMatrix basis_matrix(const HPolytope& h, const std::vector<std::uint32_t>& basis) {
  std::vector<QVector> rows;
  for (auto i : basis) rows.push_back(h.normal(i));
  return QMatrix(rows);
}

/** Walks from a feasible x along null directions of the basis until n independent inequalities are tight. */
inline void climb_to_vertex(const HPolytope& h, QVector& x, std::vector<std::uint32_t>& basis) {
  const std::size_t n = h.dim();
  const auto s = h.slack_signs(x);
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < s.size() && basis.size() < n; ++i) {
    if (s[i] != 0) continue;
    rows.push_back(h.normal(i));
    if (rank(rows) == rows.size()) basis.push_back(static_cast<std::uint32_t>(i));
    else rows.pop_back();
  }
  while (basis.size() < n) {
    QVector d(n);
    if (basis.empty()) {
      d[0] = 1;
    } else {
      d = null_space(basis_matrix(h, basis)).front();
    }
    auto exit = h.ray_exit(x, d);
    if (!exit) {
      d = -d;
      exit = h.ray_exit(x, d);
    }
    if (!exit) throw DegenerateObjective("feasible region contains a line");
    x = x + exit->t * d;
    basis.push_back(exit->hits.front());
  }
}

/** Phase I: a feasible point, or Infeasible. */
inline QVector feasible_point(const HPolytope& h, const LpOptions& opt);

/** Active-set simplex with Bland's rule; nullopt when c is unbounded above. */
inline std::optional<QVector> simplex(const HPolytope& h, const QVector& c, QVector x, std::vector<std::uint32_t>& basis,
                                      std::size_t& pivots, std::size_t max_pivots) {
  const std::size_t n = h.dim();
  while (true) {
    const QMatrix m = basis_matrix(h, basis);
    const auto lambda = solve_linear(m.transpose(), c);
    if (!lambda) throw InternalError("simplex basis became singular");
    std::optional<std::size_t> leave;
    for (std::size_t k = 0; k < n; ++k)
      if ((*lambda)[k].sign() < 0 && (!leave || basis[k] < basis[*leave])) leave = k;
    if (!leave) return x;
    if (++pivots > max_pivots) throw ResourceLimit("simplex exceeded " + std::to_string(max_pivots) + " pivots");
    QVector e(n);
    e[*leave] = -1;
    const auto d = solve_linear(m, e);
    if (!d) throw InternalError("simplex direction system is inconsistent");
    const auto exit = h.ray_exit(x, *d);
    if (!exit) return std::nullopt;
    x = x + exit->t * *d;
    basis[*leave] = exit->hits.front();
  }
}

inline QVector feasible_point(const HPolytope& h, const LpOptions& opt) {
  const std::size_t n = h.dim();
  QVector zero(n);
  Rational worst = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (-h.rhs(i) > worst) worst = -h.rhs(i);
  if (worst.is_zero()) return zero;
  // maximize -t over {a.x - t <= b, -t <= 0, t <= worst}, starting from (0, worst)
  std::vector<QVector> a;
  QVector b;
  for (std::size_t i = 0; i < h.size(); ++i) {
    QVector r = h.normal(i);
    r.push_back(Rational(-1));
    a.push_back(std::move(r));
    b.push_back(h.rhs(i));
  }
  QVector lo(n + 1), hi(n + 1);
  lo[n] = -1;
  hi[n] = 1;
  a.push_back(lo);
  b.push_back(Rational(0));
  a.push_back(hi);
  b.push_back(worst);
  const HPolytope aux(n + 1, std::move(a), std::move(b));
  QVector x(n + 1);
  x[n] = worst;
  std::vector<std::uint32_t> basis;
  climb_to_vertex(aux, x, basis);
  QVector c(n + 1);
  c[n] = -1;
  std::size_t pivots = 0;
  const auto opt_x = simplex(aux, c, x, basis, pivots, opt.max_pivots);
  if (!opt_x) throw InternalError("phase I objective is bounded");
  if (!(*opt_x)[n].is_zero()) throw Infeasible("no point satisfies all " + std::to_string(h.size()) + " inequalities");
  return QVector(opt_x->begin(), opt_x->begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace detail

/** An exact vertex maximizing a generic objective (pseudorandom from opt.seed unless given). */
inline LpVertex lp_vertex(const HPolytope& h, const LpOptions& opt = {}) {
  const std::size_t n = h.dim();
  if (n == 0) throw DimensionError("zero-dimensional polytope");
  QVector x = detail::feasible_point(h, opt);
  std::vector<std::uint32_t> basis;
  detail::climb_to_vertex(h, x, basis);
  std::mt19937_64 rng(opt.seed);
  LpVertex r;
  for (std::size_t attempt = 0; attempt <= n; ++attempt) {
    const QVector c = (attempt == 0 && opt.objective) ? *opt.objective : detail::random_objective(n, rng);
    if (c.size() != n) throw DimensionError("objective of length " + std::to_string(c.size()));
    std::vector<std::uint32_t> b = basis;
    if (auto v = detail::simplex(h, c, x, b, r.pivots, opt.max_pivots)) {
      r.vertex = std::move(*v);
      r.tight = incidence_set(h, r.vertex);
      r.objective = c;
      if (!r.tight.vertex) throw InternalError("simplex optimum is not a vertex");
      return r;
    }
  }
  throw DegenerateObjective("objective unbounded after " + std::to_string(n) + " rotations");
}

// ---------------------------------------------------------------------------
// Double description

struct DDLimits {
  std::size_t max_dim = 12;
  std::size_t max_inequalities = 64;
};

namespace detail {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(__builtin_popcountll(x));
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct DDRay {
  QVector r;
  Bits zero;
};

/**
 * Extreme rays of the pointed cone {x : h_j . x <= 0}. Constraints are added
 * in order of decreasing violation count; two rays are adjacent when no
 * third ray's zero set contains their common zero set.
 */
inline std::vector<QVector> cone_extreme_rays(const std::vector<QVector>& rows, std::size_t d) {
  const std::size_t m = rows.size();
  std::vector<std::uint32_t> basis;
  {
    std::vector<QVector> acc;
    for (std::size_t j = 0; j < m && basis.size() < d; ++j) {
      acc.push_back(rows[j]);
      if (rank(acc) == acc.size()) basis.push_back(static_cast<std::uint32_t>(j));
      else acc.pop_back();
    }
  }
  if (basis.size() < d) throw DimensionError("cone is not pointed (constraint rank " + std::to_string(basis.size()) + " < " + std::to_string(d) + ")");
  std::vector<QVector> brows;
  for (auto j : basis) brows.push_back(rows[j]);
  const auto inv = inverse(QMatrix(brows));
  if (!inv) throw InternalError("independent rows gave a singular matrix");
  std::vector<DDRay> rays;
  for (std::size_t k = 0; k < d; ++k) {
    DDRay ray{primitive(-inv->col_vector(k)), Bits(m)};
    for (std::size_t l = 0; l < d; ++l)
      if (l != k) ray.zero.set(basis[l]);
    rays.push_back(std::move(ray));
  }
  std::vector<bool> done(m, false);
  for (auto j : basis) done[j] = true;
  for (std::size_t step = d; step < m; ++step) {
    // pick the constraint violated by the most current rays
    std::size_t pick = m, best = 0;
    std::vector<Rational> pick_vals;
    for (std::size_t j = 0; j < m; ++j) {
      if (done[j]) continue;
      std::vector<Rational> vals;
      vals.reserve(rays.size());
      std::size_t viol = 0;
      for (const auto& r : rays) {
        vals.push_back(dot(rows[j], r.r));
        if (vals.back().sign() > 0) ++viol;
      }
      if (pick == m || viol > best) {
        pick = j;
        best = viol;
        pick_vals = std::move(vals);
      }
    }
    done[pick] = true;
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      const int s = pick_vals[k].sign();
      if (s > 0) pos.push_back(k);
      else if (s < 0) neg.push_back(k);
      else rays[k].zero.set(pick);
    }
    if (pos.empty()) continue;
    std::vector<DDRay> fresh;
    for (auto p : pos)
      for (auto q : neg) {
        const Bits common = rays[p].zero & rays[q].zero;
        if (common.count() + 2 < d) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k)
          if (k != p && k != q && common.subset_of(rays[k].zero)) adjacent = false;
        if (!adjacent) continue;
        DDRay nr{primitive(pick_vals[p] * rays[q].r - pick_vals[q] * rays[p].r), common};
        nr.zero.set(pick);
        fresh.push_back(std::move(nr));
      }
    std::vector<DDRay> kept;
    kept.reserve(rays.size() - pos.size() + fresh.size());
    for (std::size_t k = 0; k < rays.size(); ++k)
      if (pick_vals[k].sign() <= 0) kept.push_back(std::move(rays[k]));
    for (auto& f : fresh) kept.push_back(std::move(f));
    rays = std::move(kept);
  }
  std::vector<QVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.r));
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void check_limits(std::size_t dim, std::size_t rows, const DDLimits& lim) {
  if (dim > lim.max_dim && rows > lim.max_inequalities)
    throw ResourceLimit("double description on " + std::to_string(rows) + " inequalities in dimension " + std::to_string(dim) +
                        " exceeds the configured limits");
}

}  // namespace detail

/** All vertices and extreme rays of H, sorted lexicographically. */
inline VPolytope dual_description(const HPolytope& h, const DDLimits& lim = {}) {
  detail::check_limits(h.dim(), h.size(), lim);
  const std::size_t n = h.dim();
  VPolytope v;
  v.dim = n;
  if (h.is_cone()) {
    v.rays = detail::cone_extreme_rays(h.normals(), n);
    return v;
  }
  // homogenize: (x, t) with a.x - b t <= 0 and t >= 0
  std::vector<QVector> rows;
  rows.reserve(h.size() + 1);
  for (std::size_t i = 0; i < h.size(); ++i) {
    QVector r = h.normal(i);
    r.push_back(-h.rhs(i));
    rows.push_back(std::move(r));
  }
  QVector t(n + 1);
  t[n] = -1;
  rows.push_back(std::move(t));
  for (const auto& r : detail::cone_extreme_rays(rows, n + 1)) {
    if (r[n].is_zero()) {
      v.rays.push_back(primitive(QVector(r.begin(), r.end() - 1)));
    } else {
      const Rational s = r[n].inverse();
      QVector x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = r[j] * s;
      v.vertices.push_back(std::move(x));
    }
  }
  std::sort(v.vertices.begin(), v.vertices.end(), lex_less);
  std::sort(v.rays.begin(), v.rays.end(), lex_less);
  return v;
}

/** Facets of a full-dimensional V-polytope, as primitive integer inequalities, sorted. */
inline HPolytope facets_of(const VPolytope& v, const DDLimits& lim = {}) {
  const std::size_t n = v.dim;
  std::vector<QVector> rows;
  for (const auto& x : v.vertices) {
    QVector r = x;
    r.push_back(Rational(-1));
    rows.push_back(std::move(r));
  }
  for (const auto& x : v.rays) {
    QVector r = x;
    r.push_back(Rational(0));
    rows.push_back(std::move(r));
  }
  detail::check_limits(n + 1, rows.size(), lim);
  std::vector<QVector> keys;
  for (const auto& r : detail::cone_extreme_rays(rows, n + 1))
    if (!is_zero(QVector(r.begin(), r.end() - 1))) keys.push_back(r);
  std::sort(keys.begin(), keys.end(), lex_less);
  std::vector<QVector> a;
  QVector b;
  for (auto& k : keys) {
    b.push_back(k.back());
    k.pop_back();
    a.push_back(std::move(k));
  }
  return HPolytope(n, std::move(a), std::move(b));
}

/** Inequalities of h that define facets of the polytope with vertex set v. */
inline std::vector<std::uint32_t> irredundant_indices(const HPolytope& h, const VPolytope& v) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::vector<QVector> tight;
    for (const auto& x : v.vertices)
      if (dot(h.normal(i), x) == h.rhs(i)) {
        QVector r = x;
        r.push_back(Rational(1));
        tight.push_back(std::move(r));
      }
    for (const auto& r : v.rays)
      if (dot(h.normal(i), r).is_zero()) {
        QVector q = r;
        q.push_back(Rational(0));
        tight.push_back(std::move(q));
      }
    if (rank(tight) == h.dim()) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

/** Brute-force vertex list: every dim-subset of inequalities, solved and filtered. Test oracle. */
inline std::vector<QVector> naive_vertices(const HPolytope& h) {
  const std::size_t n = h.dim(), m = h.size();
  std::vector<QVector> out;
  if (m < n) return out;
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  while (true) {
    std::vector<QVector> rows;
    QVector rhs;
    for (auto i : idx) {
      rows.push_back(h.normal(i));
      rhs.push_back(h.rhs(i));
    }
    const QMatrix a(rows);
    if (rank(a) == n) {
      const auto x = solve_linear(a, rhs);
      const auto s = h.slack_signs(*x);
      if (std::all_of(s.begin(), s.end(), [](int v) { return v >= 0; })) out.push_back(*x);
    }
    std::size_t k = n;
    while (k > 0 && idx[k - 1] == m - n + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Local structure at a vertex

/** The neighbouring vertex along an edge direction from v. */
inline QVector edge_walk(const HPolytope& h, const QVector& v, const QVector& ray) {
  const auto exit = h.ray_exit(v, ray);
  if (!exit) throw UnboundedEdge("no inequality bounds the ray " + to_string(ray) + " from " + to_string(v));
  return v + exit->t * ray;
}

/** {d : a_i . d <= 0 for i tight at v}; row k is the k-th index of incidence_set(h, v). */
inline HPolytope tangent_cone(const HPolytope& h, const QVector& v) {
  const IncidenceSet inc = incidence_set(h, v);
  if (!inc.vertex) throw NotAVertex("tight normals at " + to_string(v) + " have rank " + std::to_string(inc.rank));
  std::vector<QVector> a;
  for (auto i : inc.indices) a.push_back(h.normal(i));
  return HPolytope(h.dim(), std::move(a), QVector(inc.size()));
}

/**
 * The bounded section {d in cone : c . d = 1} of a pointed cone, written in
 * coordinates y of the hyperplane: d = origin + sum_j y_j directions[j].
 * Inequality i of the section is inequality i of the cone.
 */
struct ConeSection {
  HPolytope polytope;
  QVector origin;
  std::vector<QVector> directions;

  QVector lift(const QVector& y) const {
    QVector d = origin;
    for (std::size_t j = 0; j < directions.size(); ++j)
      if (!y[j].is_zero()) d = d + y[j] * directions[j];
    return d;
  }
};

/** `origin`, when given, must satisfy c . origin = 1; a point fixed by a symmetry keeps the section's rhs invariant. */
inline ConeSection cone_section(const HPolytope& cone, const QVector& c, const std::optional<QVector>& origin = std::nullopt) {
  const std::size_t n = cone.dim();
  if (c.size() != n) throw DimensionError("section functional has the wrong length");
  std::size_t k = 0;
  while (k < n && c[k].is_zero()) ++k;
  if (k == n) throw DimensionError("zero section functional");
  ConeSection s;
  s.origin = QVector(n);
  s.origin[k] = c[k].inverse();
  if (origin) {
    if (origin->size() != n || dot(c, *origin) != 1) throw DimensionError("section origin is not on the hyperplane c . d = 1");
    s.origin = *origin;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    QVector e(n);
    e[j] = 1;
    e[k] = -c[j] / c[k];
    s.directions.push_back(std::move(e));
  }
  std::vector<QVector> a;
  QVector b;
  for (std::size_t i = 0; i < cone.size(); ++i) {
    QVector r(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) r[j] = dot(cone.normal(i), s.directions[j]);
    b.push_back(-dot(cone.normal(i), s.origin));
    a.push_back(std::move(r));
  }
  s.polytope = HPolytope(n - 1, std::move(a), std::move(b));
  return s;
}

// ---------------------------------------------------------------------------
// Text formats: "H n m" then m rows "a_1 .. a_n b"; "V n k" then k vertex rows,
// optionally followed by "R n r" and r ray rows.

inline std::string format_hpolytope(const HPolytope& h) {
  std::ostringstream out;
  out << "H " << h.dim() << " " << h.size() << "\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (const auto& x : h.normal(i)) out << x.str() << " ";
    out << h.rhs(i).str() << "\n";
  }
  return out.str();
}

inline std::string format_vpolytope(const VPolytope& v) {
  std::ostringstream out;
  auto block = [&](char tag, const std::vector<QVector>& rows) {
    out << tag << " " << v.dim << " " << rows.size() << "\n";
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << r[j].str();
      out << "\n";
    }
  };
  block('V', v.vertices);
  if (!v.rays.empty()) block('R', v.rays);
  return out.str();
}

namespace detail {

inline std::vector<std::string> tokens_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> t;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string w;
    while (ls >> w) t.push_back(w);
  }
  return t;
}

inline std::size_t parse_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad count '" + s + "'");
  return std::stoul(s);
}

}  // namespace detail

inline HPolytope parse_hpolytope(const std::string& text) {
  const auto t = detail::tokens_of(text);
  if (t.size() < 3 || t[0] != "H") throw ParseError("polytope file must start with 'H n m'");
  const std::size_t n = detail::parse_count(t[1]), m = detail::parse_count(t[2]);
  if (t.size() != 3 + m * (n + 1)) throw ParseError("H block has " + std::to_string(t.size() - 3) + " entries, expected " + std::to_string(m * (n + 1)));
  std::vector<QVector> a;
  QVector b;
  std::size_t p = 3;
  for (std::size_t i = 0; i < m; ++i) {
    QVector r(n);
    for (auto& x : r) x = Rational::parse(t[p++]);
    a.push_back(std::move(r));
    b.push_back(Rational::parse(t[p++]));
  }
  return HPolytope(n, std::move(a), std::move(b));
}

inline VPolytope parse_vpolytope(const std::string& text) {
  const auto t = detail::tokens_of(text);
  VPolytope v;
  std::size_t p = 0;
  auto block = [&](const std::string& tag, std::vector<QVector>& rows) {
    if (p + 3 > t.size() || t[p] != tag) throw ParseError("expected '" + tag + " n k'");
    const std::size_t n = detail::parse_count(t[p + 1]), k = detail::parse_count(t[p + 2]);
    if (tag == "V") v.dim = n;
    else if (n != v.dim) throw ParseError("ray block dimension differs from vertex block");
    p += 3;
    if (p + n * k > t.size()) throw ParseError("truncated " + tag + " block");
    for (std::size_t i = 0; i < k; ++i) {
      QVector r(n);
      for (auto& x : r) x = Rational::parse(t[p++]);
      rows.push_back(std::move(r));
    }
  };
  block("V", v.vertices);
  if (p < t.size()) block("R", v.rays);
  if (p != t.size()) throw ParseError("trailing entries after V-polytope");
  return v;
}

}  // namespace contact
