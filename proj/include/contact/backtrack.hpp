#pragma once

// Set stabilizers and set transporters in a permutation group acting on a
// point set with inner products, by backtracking over a BSGS whose base
// starts with the points of the set. Branches are pruned by set membership
// and by inner-product profiles relative to the source and target sets.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contact/error.hpp"
#include "contact/perm_group.hpp"
#include "contact/points.hpp"

namespace contact {

using Histogram = std::vector<std::pair<long long, std::uint32_t>>;

inline Histogram histogram(std::vector<long long> v) {
  std::sort(v.begin(), v.end());
  Histogram h;
  for (long long x : v) {
    if (!h.empty() && h.back().first == x) ++h.back().second;
    else h.emplace_back(x, 1);
  }
  return h;
}

/** Invariant of a point subset under any group preserving the inner products. */
struct SetKey {
  std::size_t size = 0;
  Histogram pair_ips;               // all unordered pairs i<j
  std::vector<Histogram> profiles;  // per point: inner products with every member, sorted

  friend bool operator==(const SetKey&, const SetKey&) = default;
  friend bool operator<(const SetKey& a, const SetKey& b) {
    return std::tie(a.size, a.pair_ips, a.profiles) < std::tie(b.size, b.pair_ips, b.profiles);
  }

  std::size_t hash() const {
    std::size_t h = size * 0x9e3779b97f4a7c15ull;
    auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    for (const auto& [v, c] : pair_ips) {
      mix(static_cast<std::size_t>(v));
      mix(c);
    }
    for (const auto& p : profiles)
      for (const auto& [v, c] : p) {
        mix(static_cast<std::size_t>(v));
        mix(c);
      }
    return h;
  }
};

inline Histogram point_profile(const PointSet& pts, std::uint32_t p, const std::vector<std::uint32_t>& set) {
  std::vector<long long> v;
  v.reserve(set.size());
  for (auto s : set) v.push_back(pts.ip(p, s));
  return histogram(std::move(v));
}

inline SetKey set_key(const PointSet& pts, const std::vector<std::uint32_t>& set) {
  SetKey k;
  k.size = set.size();
  std::vector<long long> pairs;
  pairs.reserve(set.size() * (set.size() - (set.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) pairs.push_back(pts.ip(set[i], set[j]));
  k.pair_ips = histogram(std::move(pairs));
  for (auto s : set) k.profiles.push_back(point_profile(pts, s, set));
  std::sort(k.profiles.begin(), k.profiles.end());
  return k;
}

struct SearchOptions {
  std::uint64_t budget = 10'000'000;  // search nodes per call
  std::uint64_t seed = 1;
};

enum class SearchStatus { kFound, kNotEquivalent, kUndecided };

struct TransporterResult {
  SearchStatus status = SearchStatus::kNotEquivalent;
  Perm element;  // valid when kFound
  std::uint64_t nodes = 0;
};

struct StabilizerResult {
  SearchStatus status = SearchStatus::kFound;  // kUndecided when the budget ran out
  std::vector<Perm> generators;
  Integer order = 1;
  std::uint64_t nodes = 0;
};

namespace detail {

struct BudgetExceeded {};

class ProfileCache {
 public:
  ProfileCache(const PointSet& pts, const std::vector<std::uint32_t>& set) : pts_(pts), set_(set) {}
  const Histogram& get(std::uint32_t p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(p, point_profile(pts_, p, set_)).first->second;
  }

 private:
  const PointSet& pts_;
  const std::vector<std::uint32_t>& set_;
  std::unordered_map<std::uint32_t, Histogram> cache_;
};

/** Shared search state: a group rebased at the source set, and membership masks. */
class SetSearch {
 public:
  SetSearch(const PermGroup& g, const PointSet& pts, const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& dst,
            const SearchOptions& opt, const std::vector<std::uint32_t>& witness)
      : pts_(pts), src_(sorted(src)), dst_(sorted(dst)), src_prof_(pts, src_), dst_prof_(pts, dst_), opt_(opt) {
    SchreierSimsOptions so;
    so.seed = opt.seed;
    so.known_order = g.order();
    so.base_prefix = src_;
    so.identity_witness = witness;
    group_ = PermGroup(g.degree(), g.strong_generators(), so);
    in_dst_.assign(g.degree(), false);
    for (auto t : dst_) in_dst_[t] = true;
    in_src_.assign(g.degree(), false);
    for (auto s : src_) in_src_[s] = true;
  }

  const PermGroup& group() const { return group_; }
  std::size_t prefix() const { return src_.size(); }
  std::uint64_t nodes() const { return nodes_; }

  bool admissible(std::size_t level, std::uint32_t gamma) {
    const std::uint32_t b = group_.base_point(level);
    if (in_src_[b] != in_dst_[gamma]) return false;
    return src_prof_.get(b) == dst_prof_.get(gamma);
  }

  Perm extend(const Perm& cur, std::size_t level, std::uint32_t delta) const {
    const Perm u = group_.transversal(level, delta);
    Perm next(cur.size());
    for (std::size_t x = 0; x < cur.size(); ++x) next[x] = cur[u[x]];
    return next;
  }

  /** Depth-first search below `level` for an element mapping src onto dst. */
  std::optional<Perm> search(std::size_t level, const Perm& cur) {
    if (level >= prefix()) return cur;
    for (auto delta : group_.basic_orbit(level)) {
      const std::uint32_t gamma = cur[delta];
      if (!admissible(level, gamma)) continue;
      if (++nodes_ > opt_.budget) throw BudgetExceeded{};
      if (auto r = search(level + 1, extend(cur, level, delta))) return r;
    }
    return std::nullopt;
  }

 private:
  static std::vector<std::uint32_t> sorted(std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  const PointSet& pts_;
  std::vector<std::uint32_t> src_;
  std::vector<std::uint32_t> dst_;
  ProfileCache src_prof_;
  ProfileCache dst_prof_;
  SearchOptions opt_;
  PermGroup group_;
  std::vector<bool> in_dst_;
  std::vector<bool> in_src_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/**
 * An element g with g(S) = T, or a certified non-equivalence. The group order
 * of `g` must be exact. `witness` may list points whose pointwise fixing
 * implies the identity (for linear actions).
 */
inline TransporterResult set_transporter(const PermGroup& g, const PointSet& pts, const std::vector<std::uint32_t>& s,
                                         const std::vector<std::uint32_t>& t, const SearchOptions& opt = {},
                                         const std::vector<std::uint32_t>& witness = {}) {
  TransporterResult r;
  if (s.size() != t.size()) return r;
  if (set_key(pts, s) != set_key(pts, t)) return r;
  detail::SetSearch search(g, pts, s, t, opt, witness);
  try {
    if (auto e = search.search(0, identity_perm(g.degree()))) {
      r.status = SearchStatus::kFound;
      r.element = std::move(*e);
    }
  } catch (const detail::BudgetExceeded&) {
    r.status = SearchStatus::kUndecided;
  }
  r.nodes = search.nodes();
  return r;
}

/** Generators and order of the setwise stabilizer of S. */
inline StabilizerResult set_stabilizer(const PermGroup& g, const PointSet& pts, const std::vector<std::uint32_t>& s,
                                       const SearchOptions& opt = {}, const std::vector<std::uint32_t>& witness = {}) {
  StabilizerResult r;
  if (s.empty()) throw ShapeError("set_stabilizer of an empty set");
  detail::SetSearch search(g, pts, s, s, opt, witness);
  const PermGroup& h = search.group();
  const std::size_t m = std::min(search.prefix(), h.base_length());
  // Everything fixing the set pointwise stabilizes it.
  Integer order = 1;
  for (std::size_t i = m; i < h.base_length(); ++i) order *= static_cast<unsigned long>(h.basic_orbit(i).size());
  if (m < h.base_length())
    for (auto id : h.level_generators(m)) r.generators.push_back(h.strong_generators()[id]);
  try {
    for (std::size_t i = m; i-- > 0;) {
      const auto& orbit = h.basic_orbit(i);
      const std::uint32_t b = h.base_point(i);
      // orbit partition of the basic orbit under the stabilizer elements found so far
      std::unordered_map<std::uint32_t, std::uint32_t> parent;
      std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        const std::uint32_t root = find(it->second);
        parent[x] = root;
        return root;
      };
      auto unite = [&](std::uint32_t a, std::uint32_t c) {
        a = find(a);
        c = find(c);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      };
      auto absorb = [&](const Perm& k) {
        for (auto x : orbit) unite(x, k[x]);
      };
      for (const auto& k : r.generators) absorb(k);
      std::vector<std::uint32_t> excluded;
      for (auto gamma : orbit) {
        if (find(gamma) == find(b)) continue;
        const std::uint32_t root = find(gamma);
        if (std::find(excluded.begin(), excluded.end(), root) != excluded.end()) continue;
        std::optional<Perm> found;
        if (search.admissible(i, gamma)) found = search.search(i + 1, h.transversal(i, gamma));
        if (found) {
          absorb(*found);
          r.generators.push_back(std::move(*found));
        } else {
          excluded.push_back(root);
        }
        // roots may have merged
        for (auto& e : excluded) e = find(e);
      }
      std::size_t orbit_len = 0;
      for (auto x : orbit)
        if (find(x) == find(b)) ++orbit_len;
      order *= static_cast<unsigned long>(orbit_len);
    }
  } catch (const detail::BudgetExceeded&) {
    r.status = SearchStatus::kUndecided;
  }
  r.order = order;
  r.nodes = search.nodes();
  return r;
}

}  // namespace contact
