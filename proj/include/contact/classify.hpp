#pragma once

// Labels for vertex orbits of the Leech contact polar. Shared vertices get
// the Coxeter-Dynkin diagram of their Delone cell; additional vertices get
// the graph on their incident shortest vectors (edges at inner product 1),
// with components named by catalog matching.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <regex>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "contact/engine.hpp"
#include "contact/error.hpp"
#include "contact/lattice.hpp"
#include "contact/linalg.hpp"
#include "contact/points.hpp"

namespace contact {

// ---------------------------------------------------------------------------
// Simple graphs

struct Graph {
  std::vector<std::vector<std::uint32_t>> adj;  // sorted neighbour lists

  Graph() = default;
  explicit Graph(std::size_t n) : adj(n) {}

  std::size_t order() const { return adj.size(); }
  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adj) s += a.size();
    return s / 2;
  }
  std::size_t degree(std::size_t v) const { return adj[v].size(); }
  bool adjacent(std::uint32_t u, std::uint32_t v) const { return std::binary_search(adj[u].begin(), adj[u].end(), v); }

  void add_edge(std::uint32_t u, std::uint32_t v) {
    if (u == v) throw ShapeError("loop in a simple graph");
    if (adjacent(u, v)) return;
    adj[u].insert(std::upper_bound(adj[u].begin(), adj[u].end(), v), v);
    adj[v].insert(std::upper_bound(adj[v].begin(), adj[v].end(), u), u);
  }

  /** Connected components, each sorted, ordered by smallest node. */
  std::vector<std::vector<std::uint32_t>> components() const {
    std::vector<int> comp(order(), -1);
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t s = 0; s < order(); ++s) {
      if (comp[s] >= 0) continue;
      std::vector<std::uint32_t> c{s};
      comp[s] = static_cast<int>(out.size());
      for (std::size_t k = 0; k < c.size(); ++k)
        for (auto w : adj[c[k]])
          if (comp[w] < 0) {
            comp[w] = static_cast<int>(out.size());
            c.push_back(w);
          }
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
    }
    return out;
  }

  Graph induced(const std::vector<std::uint32_t>& nodes) const {
    std::map<std::uint32_t, std::uint32_t> pos;
    for (std::size_t k = 0; k < nodes.size(); ++k) pos[nodes[k]] = static_cast<std::uint32_t>(k);
    Graph g(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for (auto w : adj[nodes[k]])
        if (auto it = pos.find(w); it != pos.end() && it->second > k) g.add_edge(static_cast<std::uint32_t>(k), it->second);
    return g;
  }

  /** Image under the relabelling v -> p[v]. */
  Graph relabel(const std::vector<std::uint32_t>& p) const {
    Graph g(order());
    for (std::uint32_t u = 0; u < order(); ++u)
      for (auto w : adj[u])
        if (u < w) g.add_edge(p[u], p[w]);
    return g;
  }

  std::vector<int> distances_from(std::uint32_t s) const {
    std::vector<int> d(order(), -1);
    std::vector<std::uint32_t> q{s};
    d[s] = 0;
    for (std::size_t k = 0; k < q.size(); ++k)
      for (auto w : adj[q[k]])
        if (d[w] < 0) {
          d[w] = d[q[k]] + 1;
          q.push_back(w);
        }
    return d;
  }
};

inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::uint32_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(std::size_t n) {
  Graph g = path_graph(n);
  if (n >= 3) g.add_edge(0, static_cast<std::uint32_t>(n - 1));
  return g;
}

inline Graph petersen_graph() {
  Graph g(10);
  for (std::uint32_t i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(i + 5, (i + 2) % 5 + 5);
  }
  return g;
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  Graph g(a + b);
  for (std::uint32_t i = 0; i < a; ++i)
    for (std::uint32_t j = 0; j < b; ++j) g.add_edge(i, static_cast<std::uint32_t>(a + j));
  return g;
}

/** k-subsets of an n-set, adjacent when they share `meet` elements (k-1 gives J(n,k)). */
inline Graph johnson_graph(int n, int k, int meet) {
  std::vector<std::uint32_t> sets;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (__builtin_popcount(m) == k) sets.push_back(m);
  Graph g(sets.size());
  for (std::uint32_t i = 0; i < sets.size(); ++i)
    for (std::uint32_t j = i + 1; j < sets.size(); ++j)
      if (__builtin_popcount(sets[i] & sets[j]) == meet) g.add_edge(i, j);
  return g;
}

inline Graph johnson_graph(int n, int k) { return johnson_graph(n, k, k - 1); }

/** The J(7,4) of the facet graphs: 4-subsets of 7 points meeting in one point. */
inline Graph j74_graph() { return johnson_graph(7, 4, 1); }

/** Length of a shortest cycle; 0 for forests. */
inline std::size_t girth(const Graph& g) {
  std::size_t best = 0;
  for (std::uint32_t s = 0; s < g.order(); ++s) {
    std::vector<int> d(g.order(), -1), parent(g.order(), -1);
    std::vector<std::uint32_t> q{s};
    d[s] = 0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto u = q[k];
      for (auto w : g.adj[u]) {
        if (d[w] < 0) {
          d[w] = d[u] + 1;
          parent[w] = static_cast<int>(u);
          q.push_back(w);
        } else if (parent[u] != static_cast<int>(w)) {
          const auto c = static_cast<std::size_t>(d[u] + d[w] + 1);
          if (best == 0 || c < best) best = c;
        }
      }
    }
  }
  return best;
}

struct SrgParameters {
  std::size_t v = 0, k = 0, lambda = 0, mu = 0;
  friend bool operator==(const SrgParameters&, const SrgParameters&) = default;
};

/** Parameters when g is strongly regular (and neither complete nor empty). */
inline std::optional<SrgParameters> srg_parameters(const Graph& g) {
  const std::size_t n = g.order();
  if (n < 3) return std::nullopt;
  const std::size_t k = g.degree(0);
  for (std::size_t v = 0; v < n; ++v)
    if (g.degree(v) != k) return std::nullopt;
  if (k == 0 || k == n - 1) return std::nullopt;
  std::optional<std::size_t> lam, mu;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) {
      std::size_t c = 0;
      std::size_t i = 0, j = 0;
      const auto& a = g.adj[u];
      const auto& b = g.adj[v];
      while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
          ++c;
          ++i;
          ++j;
        } else if (a[i] < b[j]) {
          ++i;
        } else {
          ++j;
        }
      }
      auto& slot = g.adjacent(u, v) ? lam : mu;
      if (!slot) slot = c;
      else if (*slot != c) return std::nullopt;
    }
  return SrgParameters{n, k, lam.value_or(0), mu.value_or(0)};
}

/** {b_0..b_{d-1}; c_1..c_d} when g is distance-regular. */
inline std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> intersection_array(const Graph& g) {
  const std::size_t n = g.order();
  if (n == 0) return std::nullopt;
  std::vector<std::size_t> b, c;
  for (std::uint32_t u = 0; u < n; ++u) {
    const auto d = g.distances_from(u);
    const int diam = *std::max_element(d.begin(), d.end());
    if (std::find(d.begin(), d.end(), -1) != d.end()) return std::nullopt;
    std::vector<std::optional<std::size_t>> bi(static_cast<std::size_t>(diam) + 1), ci(static_cast<std::size_t>(diam) + 1);
    for (std::uint32_t v = 0; v < n; ++v) {
      std::size_t up = 0, down = 0;
      for (auto w : g.adj[v]) {
        if (d[w] == d[v] + 1) ++up;
        if (d[w] == d[v] - 1) ++down;
      }
      const auto i = static_cast<std::size_t>(d[v]);
      if (!bi[i]) bi[i] = up;
      else if (*bi[i] != up) return std::nullopt;
      if (!ci[i]) ci[i] = down;
      else if (*ci[i] != down) return std::nullopt;
    }
    std::vector<std::size_t> bu, cu;
    for (int i = 0; i < diam; ++i) bu.push_back(*bi[static_cast<std::size_t>(i)]);
    for (int i = 1; i <= diam; ++i) cu.push_back(*ci[static_cast<std::size_t>(i)]);
    if (u == 0) {
      b = bu;
      c = cu;
    } else if (b != bu || c != cu) {
      return std::nullopt;
    }
  }
  return std::make_pair(b, c);
}

namespace detail {

/** Colour refinement to the coarsest equitable partition; colours are canonical ranks. */
inline std::vector<std::uint32_t> refine(const Graph& g, std::vector<std::uint32_t> col) {
  const std::size_t n = g.order();
  while (true) {
    std::vector<std::pair<std::vector<std::uint32_t>, std::uint32_t>> sig(n);
    for (std::uint32_t v = 0; v < n; ++v) {
      sig[v].first.push_back(col[v]);
      std::vector<std::uint32_t> nb;
      for (auto w : g.adj[v]) nb.push_back(col[w]);
      std::sort(nb.begin(), nb.end());
      sig[v].first.insert(sig[v].first.end(), nb.begin(), nb.end());
      sig[v].second = v;
    }
    std::vector<std::vector<std::uint32_t>> keys;
    for (const auto& s : sig) keys.push_back(s.first);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<std::uint32_t> next(n);
    for (std::uint32_t v = 0; v < n; ++v)
      next[v] = static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) - keys.begin());
    const auto classes = [](const std::vector<std::uint32_t>& c) { return c.empty() ? 0u : *std::max_element(c.begin(), c.end()) + 1; };
    if (classes(next) == classes(col)) return next;
    col = std::move(next);
  }
}

class Canonizer {
 public:
  Canonizer(const Graph& g, std::uint64_t max_leaves) : g_(g), max_leaves_(max_leaves) {}

  std::vector<std::uint64_t> run() {
    std::vector<std::uint32_t> col(g_.order(), 0);
    search(refine(g_, col));
    return best_;
  }

 private:
  void search(const std::vector<std::uint32_t>& col) {
    const std::size_t n = g_.order();
    std::vector<std::size_t> size(n, 0);
    for (auto c : col) ++size[c];
    std::optional<std::uint32_t> cell;
    for (std::uint32_t c = 0; c < n; ++c)
      if (size[c] > 1 && (!cell || size[c] < size[*cell])) cell = c;
    if (!cell) {
      leaf(col);
      return;
    }
    for (std::uint32_t v = 0; v < n; ++v) {
      if (col[v] != *cell) continue;
      std::vector<std::uint32_t> split(n);
      for (std::uint32_t u = 0; u < n; ++u) split[u] = 2 * col[u] + (col[u] == *cell && u != v ? 1 : 0);
      search(refine(g_, split));
    }
  }

  void leaf(const std::vector<std::uint32_t>& col) {
    if (++leaves_ > max_leaves_) throw ResourceLimit("canonical labelling exceeded " + std::to_string(max_leaves_) + " leaves");
    const std::size_t n = g_.order();
    std::vector<std::uint32_t> inv(n);
    for (std::uint32_t v = 0; v < n; ++v) inv[col[v]] = v;
    std::vector<std::uint64_t> cert((n * n + 63) / 64, 0);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (g_.adjacent(inv[i], inv[j])) cert[(i * n + j) / 64] |= std::uint64_t{1} << ((i * n + j) % 64);
    if (best_.empty() || cert < best_) best_ = std::move(cert);
  }

  const Graph& g_;
  std::uint64_t max_leaves_;
  std::uint64_t leaves_ = 0;
  std::vector<std::uint64_t> best_;
};

}  // namespace detail

/** Isomorphism-invariant certificate by individualization and refinement. */
inline std::vector<std::uint64_t> canonical_certificate(const Graph& g, std::uint64_t max_leaves = 2'000'000) {
  std::vector<std::uint64_t> c = detail::Canonizer(g, max_leaves).run();
  c.push_back(g.order());
  return c;
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
  auto da = std::vector<std::size_t>(), db = std::vector<std::size_t>();
  for (std::size_t v = 0; v < a.order(); ++v) {
    da.push_back(a.degree(v));
    db.push_back(b.degree(v));
  }
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;
  return canonical_certificate(a) == canonical_certificate(b);
}

// ---------------------------------------------------------------------------
// Degree-2 suppression

/** Base graph on the nodes of degree != 2; edge weight = number of degree-2 nodes on it. */
struct WeightedGraph {
  struct Edge {
    std::uint32_t u, v;
    std::size_t weight;
  };
  std::vector<std::uint32_t> nodes;  // original labels
  std::vector<Edge> edges;

  std::size_t degree(std::uint32_t k) const {
    std::size_t d = 0;
    for (const auto& e : edges) d += (e.u == k) + (e.v == k);
    return d;
  }
};

inline WeightedGraph suppress_degree_two(const Graph& g) {
  WeightedGraph w;
  std::vector<int> base(g.order(), -1);
  for (std::uint32_t v = 0; v < g.order(); ++v)
    if (g.degree(v) != 2) {
      base[v] = static_cast<int>(w.nodes.size());
      w.nodes.push_back(v);
    }
  if (w.nodes.empty() && g.order() > 0) {
    base[0] = 0;  // a cycle: keep one node, carrying a loop
    w.nodes.push_back(0);
  }
  std::vector<bool> used(g.order(), false);
  for (std::size_t k = 0; k < w.nodes.size(); ++k) {
    const std::uint32_t s = w.nodes[k];
    for (auto first : g.adj[s]) {
      if (base[first] >= 0) {
        if (s < first || (s == first)) w.edges.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(base[first]), 0});
        continue;
      }
      if (used[first]) continue;
      std::uint32_t prev = s, cur = first;
      std::size_t count = 0;
      while (base[cur] < 0) {
        used[cur] = true;
        ++count;
        const auto& nb = g.adj[cur];
        const std::uint32_t next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
      }
      w.edges.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(base[cur]), count});
    }
  }
  return w;
}

/** Inverse of suppress_degree_two up to isomorphism. */
inline Graph subdivide(const WeightedGraph& w) {
  std::size_t n = w.nodes.size();
  for (const auto& e : w.edges) n += e.weight;
  Graph g(n);
  std::uint32_t next = static_cast<std::uint32_t>(w.nodes.size());
  for (const auto& e : w.edges) {
    std::uint32_t prev = e.u;
    for (std::size_t k = 0; k < e.weight; ++k) {
      g.add_edge(prev, next);
      prev = next++;
    }
    if (prev != e.v) g.add_edge(prev, e.v);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Component names

namespace detail {

/** Name of a tree with maximum degree 3 from its suppressed form; nullopt when it matches no family. */
inline std::optional<std::string> tree_name(const Graph& g, bool affine_shapes = false) {
  const std::size_t n = g.order();
  if (n == 1) return std::string("a1");
  std::size_t maxdeg = 0;
  for (std::size_t v = 0; v < n; ++v) maxdeg = std::max(maxdeg, g.degree(v));
  if (maxdeg <= 2) return "a" + std::to_string(n);
  const WeightedGraph w = suppress_degree_two(g);
  std::vector<std::uint32_t> branch;
  for (std::uint32_t k = 0; k < w.nodes.size(); ++k)
    if (w.degree(k) >= 3) branch.push_back(k);
  auto legs_at = [&](std::uint32_t b, std::optional<std::uint32_t> skip = std::nullopt) {
    std::vector<std::size_t> legs;
    for (const auto& e : w.edges) {
      const std::uint32_t other = e.u == b ? e.v : (e.v == b ? e.u : b);
      if (other == b) continue;
      if (skip && other == *skip) continue;
      if (w.degree(other) == 1) legs.push_back(e.weight);
    }
    std::sort(legs.rbegin(), legs.rend());
    return legs;
  };
  auto weight_between = [&](std::uint32_t a, std::uint32_t b) -> std::optional<std::size_t> {
    for (const auto& e : w.edges)
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return e.weight;
    return std::nullopt;
  };
  if (branch.size() == 1 && w.degree(branch[0]) == 4 && affine_shapes) {
    const auto l = legs_at(branch[0]);
    if (l == std::vector<std::size_t>{0, 0, 0, 0}) return std::string("D4");
    return std::nullopt;
  }
  if (maxdeg > 3) return std::nullopt;
  if (branch.size() == 1) {
    const auto l = legs_at(branch[0]);  // degree-2 counts, descending
    const std::size_t p = l[0] + 1, q = l[1] + 1, r = l[2] + 1;
    if (q == 1 && r == 1) return "d" + std::to_string(n);
    if (r == 1 && q == 2 && p >= 2 && p <= 4) return "e" + std::to_string(n);
    if (affine_shapes) {
      if (p == 2 && q == 2 && r == 2) return std::string("E6");
      if (p == 3 && q == 3 && r == 1) return std::string("E7");
      if (p == 5 && q == 2 && r == 1) return std::string("E8");
      return std::nullopt;
    }
    std::ostringstream s;
    s << "T^{" << l[0] << "}_{" << l[1] << "}" << l[2];
    return s.str();
  }
  if (branch.size() == 2) {
    const auto c = weight_between(branch[0], branch[1]);
    if (!c) return std::nullopt;
    const auto l1 = legs_at(branch[0], branch[1]), l2 = legs_at(branch[1], branch[0]);
    if (l1.size() != 2 || l2.size() != 2) return std::nullopt;
    if (affine_shapes) {
      if (l1 == std::vector<std::size_t>{0, 0} && l2 == l1) return "D" + std::to_string(n - 1);
      return std::nullopt;
    }
    std::vector<std::size_t> t1{l1[0], l1[1], *c, l2[0], l2[1]}, t2{l2[0], l2[1], *c, l1[0], l1[1]};
    const auto& t = std::max(t1, t2);
    std::ostringstream s;
    s << "T^{" << t[0] << "}_{" << t[1] << "}" << t[2] << "^{" << t[3] << "}_{" << t[4] << "}";
    return s.str();
  }
  if (branch.size() == 3 && !affine_shapes) {
    // the middle branch node is adjacent (in the base tree) to the other two
    for (std::size_t mid = 0; mid < 3; ++mid) {
      const std::uint32_t y = branch[mid], x = branch[(mid + 1) % 3], z = branch[(mid + 2) % 3];
      const auto cx = weight_between(x, y), cz = weight_between(y, z);
      if (!cx || !cz) continue;
      const auto lx = legs_at(x, y), lz = legs_at(z, y);
      std::vector<std::size_t> ly;
      for (const auto& e : w.edges) {
        const std::uint32_t other = e.u == y ? e.v : (e.v == y ? e.u : y);
        if (other != y && other != x && other != z) ly.push_back(e.weight);
      }
      if (lx.size() != 2 || lz.size() != 2 || ly.size() != 1) return std::nullopt;
      std::vector<std::size_t> t1{lx[0], lx[1], *cx, ly[0], *cz, lz[0], lz[1]}, t2{lz[0], lz[1], *cz, ly[0], *cx, lx[0], lx[1]};
      const auto& t = std::max(t1, t2);
      std::ostringstream s;
      s << "T^{" << t[0] << "}_{" << t[1] << "}" << t[2] << "^{" << t[3] << "}" << t[4] << "^{" << t[5] << "}_{" << t[6] << "}";
      return s.str();
    }
  }
  return std::nullopt;
}

struct Cage {
  std::size_t valency, girth, order;
};
inline constexpr Cage kUniqueCages[] = {{3, 5, 10}, {3, 6, 14}, {3, 7, 24}, {3, 8, 30}, {4, 5, 19}, {4, 6, 26}, {5, 6, 42}};

}  // namespace detail

/**
 * Name of a connected facet-graph component: a_n / d_n / e_n, HS100, HS50,
 * J(7,4), Cox, (k,g) cages, T-trees, G{n},{m} for other graphs of maximum
 * degree 3; "?{n},{m}" otherwise.
 */
inline std::string identify_graph_component(const Graph& g) {
  const std::size_t n = g.order(), m = g.edge_count();
  if (n == 0) throw ShapeError("empty graph component");
  if (g.components().size() != 1) throw ShapeError("graph component is not connected");
  if (m + 1 == n)
    if (auto t = detail::tree_name(g)) return *t;
  const std::string unknown = "?" + std::to_string(n) + "," + std::to_string(m);
  if (auto s = srg_parameters(g)) {
    if (*s == SrgParameters{100, 22, 0, 6}) return "HS100";
    if (*s == SrgParameters{50, 7, 0, 1}) return "HS50";
  }
  if (n == 28 && m == 42) {
    const auto ia = intersection_array(g);
    if (ia && ia->first == std::vector<std::size_t>{3, 2, 2, 1} && ia->second == std::vector<std::size_t>{1, 1, 1, 2}) return "Cox";
  }
  if (n == 35 && m == 70 && intersection_array(g) && canonical_certificate(g) == canonical_certificate(j74_graph())) return "J(7,4)";
  const std::size_t k = g.degree(0);
  bool regular = true;
  std::size_t maxdeg = 0;
  for (std::size_t v = 0; v < n; ++v) {
    regular = regular && g.degree(v) == k;
    maxdeg = std::max(maxdeg, g.degree(v));
  }
  if (regular && m + 1 > n) {
    const std::size_t gi = girth(g);
    for (const auto& c : detail::kUniqueCages)
      if (c.valency == k && c.girth == gi && c.order == n) return "(" + std::to_string(k) + "," + std::to_string(gi) + ")";
  }
  if (m + 1 > n && maxdeg <= 3) return "G" + std::to_string(n) + "," + std::to_string(m);
  return unknown;
}

// ---------------------------------------------------------------------------
// Names as component multisets

namespace detail {

inline bool is_root_name(const std::string& s, char* letter = nullptr, int* rank = nullptr) {
  static const std::regex re("^([adeADE])([0-9]+)$");
  std::smatch mt;
  if (!std::regex_match(s, mt, re)) return false;
  if (letter) *letter = mt[1].str()[0];
  if (rank) *rank = std::stoi(mt[2].str());
  return true;
}

}  // namespace detail

/** Splits "a1^2 d4 G25,30" into sorted component names with multiplicity. */
inline std::vector<std::string> name_multiset(const std::string& name) {
  static const std::regex power("^([adeADE][0-9]+)\\^([0-9]+)$");
  std::istringstream in(name);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) {
    std::smatch mt;
    if (std::regex_match(tok, mt, power)) {
      for (int k = 0; k < std::stoi(mt[2].str()); ++k) out.push_back(mt[1].str());
    } else {
      out.push_back(tok);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool same_name(const std::string& a, const std::string& b) { return name_multiset(a) == name_multiset(b); }

/** Joins component names: other names first (sorted), then root names by (letter, rank) with powers. */
inline std::string compose_name(std::vector<std::string> parts) {
  std::vector<std::string> other;
  std::vector<std::tuple<char, int, std::string>> roots;
  for (auto& p : parts) {
    char l;
    int r;
    if (detail::is_root_name(p, &l, &r)) roots.emplace_back(l, r, p);
    else other.push_back(p);
  }
  std::sort(other.begin(), other.end());
  std::sort(roots.begin(), roots.end());
  std::vector<std::string> out = other;
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i;
    while (j < roots.size() && std::get<2>(roots[j]) == std::get<2>(roots[i])) ++j;
    out.push_back(std::get<2>(roots[i]) + (j - i > 1 ? "^" + std::to_string(j - i) : ""));
    i = j;
  }
  std::string s;
  for (const auto& p : out) s += (s.empty() ? "" : " ") + p;
  return s;
}

// ---------------------------------------------------------------------------
// Coxeter-Dynkin diagrams

/** Symmetric matrix with entries 1 (diagonal), 2, 3 or kInfinity. */
struct CoxeterDynkinDiagram {
  static constexpr int kInfinity = 0;
  std::vector<std::vector<int>> m;

  explicit CoxeterDynkinDiagram(std::size_t n = 0) : m(n, std::vector<int>(n, 2)) {
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  }
  std::size_t size() const { return m.size(); }
  void set(std::size_t i, std::size_t j, int v) { m[i][j] = m[j][i] = v; }

  void validate() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (m[i].size() != size()) throw ShapeError("diagram matrix is not square");
      if (m[i][i] != 1) throw ShapeError("diagram diagonal must be 1");
      for (std::size_t j = 0; j < size(); ++j) {
        if (m[i][j] != m[j][i]) throw ShapeError("diagram matrix is not symmetric");
        if (i != j && m[i][j] != 2 && m[i][j] != 3 && m[i][j] != kInfinity)
          throw ShapeError("diagram entries must be 2, 3 or infinity");
      }
    }
  }

  /** (-cos(pi / m_ij)): 1 on the diagonal, 0, -1/2, -1. */
  QMatrix cartan(const std::vector<std::uint32_t>& nodes) const {
    QMatrix c(nodes.size(), nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = 0; b < nodes.size(); ++b) {
        const int v = m[nodes[a]][nodes[b]];
        c(a, b) = v == 1 ? Rational(1) : v == 2 ? Rational(0) : v == 3 ? Rational(-1, 2) : Rational(-1);
      }
    return c;
  }
};

struct DiagramComponent {
  std::vector<std::uint32_t> nodes;
  std::string name;  // "a3", "E6", ...; "?" + size when unmatched
  bool affine = false;
  bool known = true;
  Definiteness definiteness = Definiteness::PositiveDefinite;
};

inline std::vector<DiagramComponent> classify_diagram(const CoxeterDynkinDiagram& d) {
  d.validate();
  const std::size_t n = d.size();
  Graph conn(n), simple(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (d.m[i][j] != 2) conn.add_edge(i, j);
      if (d.m[i][j] == 3) simple.add_edge(i, j);
    }
  std::vector<DiagramComponent> out;
  for (const auto& nodes : conn.components()) {
    DiagramComponent c;
    c.nodes = nodes;
    c.definiteness = definiteness(d.cartan(nodes));
    bool has_inf = false;
    for (auto i : nodes)
      for (auto j : nodes)
        if (i != j && d.m[i][j] == CoxeterDynkinDiagram::kInfinity) has_inf = true;
    const Graph g = simple.induced(nodes);
    const std::size_t k = nodes.size(), e = g.edge_count();
    std::optional<std::string> name;
    if (has_inf) {
      if (k == 2) name = "A1";
    } else if (e + 1 == k) {
      name = detail::tree_name(g, false);
      if (name && (*name)[0] == 'T') name = detail::tree_name(g, true);
      if (!name) name = detail::tree_name(g, true);
    } else if (e == k && k >= 3) {
      bool cyc = true;
      for (std::size_t v = 0; v < k; ++v) cyc = cyc && g.degree(v) == 2;
      if (cyc) name = "A" + std::to_string(k - 1);
    }
    if (name) {
      c.name = *name;
      c.affine = std::isupper(static_cast<unsigned char>((*name)[0])) != 0;
      const auto want = c.affine ? Definiteness::PositiveSemidefinite : Definiteness::PositiveDefinite;
      if (c.definiteness != want)
        throw InternalError("diagram component named " + c.name + " has a " + to_string(c.definiteness) + " Cartan matrix");
    } else {
      c.known = false;
      c.name = "?" + std::to_string(k);
      c.affine = c.definiteness == Definiteness::PositiveSemidefinite;
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string diagram_name(const std::vector<DiagramComponent>& comps) {
  std::vector<std::string> parts;
  for (const auto& c : comps) parts.push_back(c.name);
  return compose_name(parts);
}

// ---------------------------------------------------------------------------
// Delone cells and facet graphs of Leech vertices

struct DeloneCell {
  Rational dist_sq;
  std::vector<LatticeVector> vertices;
  CoxeterDynkinDiagram diagram;
};

inline void require_leech(const Lattice& l) {
  if (l.name() != "leech" || l.dim() != 24) throw RuleDomainError("the Delone diagram rule applies to the Leech lattice only, got '" + l.name() + "'");
}

/** Lattice points closest to v and their diagram: squared distance 4, 6, 8 gives m = 2, 3, infinity. */
inline DeloneCell delone_diagram(const LatticeEnumerator& en, const QVector& v) {
  require_leech(en.lattice());
  const Lattice& l = en.lattice();
  DeloneCell cell;
  auto [dist, pts] = en.closest_vectors(v);
  cell.dist_sq = dist;
  cell.vertices = std::move(pts);
  const std::size_t n = cell.vertices.size();
  cell.diagram = CoxeterDynkinDiagram(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational d = l.norm_sq(cell.vertices[i].ambient - cell.vertices[j].ambient);
      if (d == 4) cell.diagram.set(i, j, 2);
      else if (d == 6) cell.diagram.set(i, j, 3);
      else if (d == 8) cell.diagram.set(i, j, CoxeterDynkinDiagram::kInfinity);
      else throw RuleDomainError("Delone vertices at squared distance " + d.str());
    }
  return cell;
}

inline DeloneCell delone_diagram(const Lattice& l, const QVector& v) {
  require_leech(l);
  return delone_diagram(LatticeEnumerator(l), v);
}

struct FacetGraph {
  std::size_t nodes = 0;
  std::vector<Rational> labels;  // row-major inner products
  std::vector<Rational> support;  // distinct off-diagonal labels, sorted
  bool applicable = false;        // support within {1, 2}
  Graph graph;                    // edges at inner product 1

  const Rational& label(std::size_t i, std::size_t j) const { return labels[i * nodes + j]; }
};

/** Graph on the incident shortest vectors of v. */
inline FacetGraph facet_graph(const QVector& v, const std::vector<QVector>& tight_vectors, const QMatrix& form) {
  (void)v;
  FacetGraph f;
  f.nodes = tight_vectors.size();
  f.graph = Graph(f.nodes);
  if (f.nodes == 0) return f;
  const PointSet pts(tight_vectors, form);
  f.labels.resize(f.nodes * f.nodes);
  std::vector<long long> seen;
  const Rational one(1);
  for (std::uint32_t i = 0; i < f.nodes; ++i)
    for (std::uint32_t j = 0; j < f.nodes; ++j) {
      const long long ip = pts.ip(i, j);
      f.labels[i * f.nodes + j] = Rational(ip, pts.ip_denominator());
      if (i < j) {
        seen.push_back(ip);
        if (f.labels[i * f.nodes + j] == one) f.graph.add_edge(i, j);
      }
    }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (auto s : seen) f.support.emplace_back(s, pts.ip_denominator());
  f.applicable = std::all_of(f.support.begin(), f.support.end(), [](const Rational& r) { return r == 1 || r == 2; });
  return f;
}

inline FacetGraph facet_graph(const QVector& v, const std::vector<LatticeVector>& tight_vectors, const Lattice& l) {
  std::vector<QVector> pts;
  for (const auto& t : tight_vectors) pts.push_back(t.ambient);
  return facet_graph(v, pts, l.form());
}

inline std::string facet_graph_name(const FacetGraph& f) {
  std::vector<std::string> parts;
  for (const auto& c : f.graph.components()) parts.push_back(identify_graph_component(f.graph.induced(c)));
  return compose_name(parts);
}

// ---------------------------------------------------------------------------
// Orbit labels

struct ClassifiedRow {
  std::string name;
  Rational norm_sq;
  std::size_t incidence = 0;     // tight facets
  std::size_t delone_count = 0;  // closest lattice points
  Rational dist_sq;
  bool shared = false;
  bool affine = false;
  Integer stabilizer_order = 1;
  QVector vertex;
  std::vector<DiagramComponent> components;  // shared rows only
};

/** Label for a vertex of the Leech contact polar, given its tight shortest vectors. */
inline ClassifiedRow classify_vertex(const LatticeEnumerator& en, const QVector& v, const std::vector<QVector>& tight_vectors) {
  const Lattice& l = en.lattice();
  require_leech(l);
  ClassifiedRow row;
  row.vertex = v;
  row.norm_sq = l.norm_sq(v);
  row.incidence = tight_vectors.size();
  const DeloneCell cell = delone_diagram(en, v);
  row.dist_sq = cell.dist_sq;
  row.delone_count = cell.vertices.size();
  if (row.dist_sq > row.norm_sq) throw InternalError("closest lattice point farther than the origin");
  row.shared = row.dist_sq == row.norm_sq;
  if (row.shared) {
    row.components = classify_diagram(cell.diagram);
    row.name = diagram_name(row.components);
    row.affine = !row.components.empty() &&
                 std::all_of(row.components.begin(), row.components.end(), [](const DiagramComponent& c) { return c.affine; });
    return row;
  }
  const FacetGraph f = facet_graph(v, tight_vectors, l.form());
  if (!f.applicable) {
    if (row.incidence == 552) row.name = "exceptional";
    else row.name = "?labels";
    return row;
  }
  row.name = facet_graph_name(f);
  return row;
}

inline ClassifiedRow classify_orbit(const OrbitRecord& rec, const LatticeEnumerator& en, const MinSet& min) {
  const Lattice& l = en.lattice();
  std::vector<QVector> tight;
  for (auto i : rec.tight.indices) tight.push_back(l.ambient(min.vectors[i].coords));
  ClassifiedRow row = classify_vertex(en, rec.rep_vertex, tight);
  row.stabilizer_order = rec.stabilizer_order;
  return row;
}

}  // namespace contact
