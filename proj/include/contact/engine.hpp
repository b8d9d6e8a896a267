#pragma once

// Adjacency decomposition: vertex orbits of an H-polytope under a group that
// permutes its inequalities. Each stored orbit is treated once by computing
// the extreme rays of its tangent cone (directly, or recursively under the
// vertex stabilizer) and walking every edge; the neighbours are inserted
// when no stored orbit maps onto them.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "contact/backtrack.hpp"
#include "contact/error.hpp"
#include "contact/lattice.hpp"
#include "contact/polytope.hpp"
#include "contact/symmetry.hpp"

namespace contact {

struct RecursionPolicy {
  std::size_t direct_threshold = 48;  // |tight| at or below this: direct double description
  std::size_t direct_dim = 12;        // cone dimension at or below this: direct double description
  std::size_t max_depth = 1;          // recursion levels through vertex stabilizers
  std::uint64_t budget = 10'000'000;  // backtrack nodes per equivalence test
  std::size_t escalations = 3;        // budget x10 retries before giving up
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::size_t max_orbits = 100'000;
  std::string checkpoint;  // bank file rewritten after every round; resumed when present
  std::function<void(const std::string&)> log;
};

struct OrbitRecord {
  QVector rep_vertex;
  IncidenceSet tight;
  SetKey key;
  Integer stabilizer_order = 1;
  Rational norm_sq;
  std::vector<Perm> stabilizer;  // generators, when computed in this run

  std::size_t incidence_count() const { return tight.size(); }
};

struct EngineStats {
  std::size_t rounds = 0;
  std::size_t treated = 0;
  std::size_t neighbours = 0;
  std::size_t transporter_calls = 0;
  std::size_t escalations = 0;
  std::size_t recursions = 0;
};

/** The record order of the output: (norm_sq, N, key). */
inline bool record_less(const OrbitRecord& a, const OrbitRecord& b) {
  if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
  if (a.tight.size() != b.tight.size()) return a.tight.size() < b.tight.size();
  if (a.key != b.key) return a.key < b.key;
  return a.tight.indices < b.tight.indices;
}

/** The vertex cut out by a tight set. */
inline QVector vertex_from_tight(const HPolytope& h, const std::vector<std::uint32_t>& tight) {
  std::vector<QVector> rows;
  QVector rhs;
  for (auto i : tight) {
    rows.push_back(h.normal(i));
    rhs.push_back(h.rhs(i));
  }
  const QMatrix a(rows);
  if (rank(a) != h.dim()) throw NotAVertex("tight set of rank " + std::to_string(rank(a)));
  const auto x = solve_linear(a, rhs);
  if (!x) throw NotAVertex("inconsistent tight set");
  return *x;
}

/** All images of a point set under the group generated by the action, sorted. */
inline std::vector<std::vector<std::uint32_t>> orbit_of_set(const PermAction& a, const std::vector<std::uint32_t>& s,
                                                           std::size_t limit = 10'000'000) {
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::vector<std::uint32_t>> queue;
  auto start = s;
  std::sort(start.begin(), start.end());
  seen.insert(start);
  queue.push_back(start);
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& g : a.perms) {
      auto img = image_of_set(g, queue[k]);
      if (seen.insert(img).second) {
        if (seen.size() > limit) throw ResourceLimit("orbit larger than " + std::to_string(limit));
        queue.push_back(std::move(img));
      }
    }
  return {seen.begin(), seen.end()};
}

/** Sum of |G| / |Stab| over the records. */
inline Integer total_object_count(const std::vector<OrbitRecord>& records, const Integer& group_order) {
  Integer total = 0;
  for (const auto& r : records) {
    if (r.stabilizer_order == 0 || group_order % r.stabilizer_order != 0)
      throw InternalError("stabilizer order " + r.stabilizer_order.get_str() + " does not divide " + group_order.get_str());
    total += group_order / r.stabilizer_order;
  }
  return total;
}

/** Shared records have closest-lattice-point distance equal to their norm; additional ones strictly less. */
inline std::pair<std::vector<OrbitRecord>, std::vector<OrbitRecord>> split_shared_additional(const std::vector<OrbitRecord>& records,
                                                                                             const Lattice& l) {
  std::vector<OrbitRecord> shared, additional;
  const LatticeEnumerator en(l);
  for (const auto& r : records) {
    const Rational dist = en.closest_vectors(r.rep_vertex).first;
    const Rational norm = l.norm_sq(r.rep_vertex);
    if (dist > norm) throw InternalError("closest lattice point farther than the origin");
    (dist == norm ? shared : additional).push_back(r);
  }
  return {std::move(shared), std::move(additional)};
}

namespace detail {

/** Orbit bank plus the machinery to treat one representative. */
class OrbitEngine {
 public:
  OrbitEngine(const HPolytope& h, const PermAction& action, const PermGroup& group, RecursionPolicy policy, std::size_t depth)
      : h_(h), action_(action), group_(group), policy_(std::move(policy)), depth_(depth) {
    check_action();
  }

  EngineStats stats;

  std::vector<OrbitRecord> run(const std::vector<QVector>& seeds) {
    std::vector<std::size_t> pending;
    if (!policy_.checkpoint.empty() && depth_ == 0 && load_checkpoint(pending)) {
      note("resumed " + std::to_string(records_.size()) + " orbits from " + policy_.checkpoint);
    } else {
      std::vector<QVector> start = seeds;
      if (start.empty()) {
        LpOptions lo;
        lo.seed = policy_.seed;
        start.push_back(lp_vertex(h_, lo).vertex);
      }
      for (const auto& v : start) {
        IncidenceSet inc;
        try {
          inc = incidence_set(h_, v);
        } catch (const NotInPolytope& e) {
          throw BadSeed(e.what());
        }
        if (!inc.vertex) throw BadSeed("tight normals at the seed have rank " + std::to_string(inc.rank) + " < " + std::to_string(h_.dim()));
        if (auto id = insert_if_new(inc.indices, &v)) pending.push_back(*id);
      }
    }
    while (!pending.empty()) {
      ++stats.rounds;
      std::sort(pending.begin(), pending.end(), [&](std::size_t a, std::size_t b) {
        if (records_[a].tight.size() != records_[b].tight.size()) return records_[a].tight.size() < records_[b].tight.size();
        return a < b;
      });
      note("round " + std::to_string(stats.rounds) + ": treating " + std::to_string(pending.size()) + " of " +
           std::to_string(records_.size()) + " orbits");
      std::vector<std::vector<std::vector<std::uint32_t>>> found(pending.size());
      parallel_for(pending.size(), [&](std::size_t k) { found[k] = treat(records_[pending[k]]); });
      std::vector<std::size_t> next;
      for (std::size_t k = 0; k < pending.size(); ++k) {
        treated_[pending[k]] = true;
        ++stats.treated;
        for (const auto& t : found[k]) {
          ++stats.neighbours;
          if (auto id = insert_if_new(t, nullptr)) next.push_back(*id);
        }
      }
      pending = std::move(next);
      save_checkpoint(pending);
    }
    stats.recursions = recursions_;
    std::vector<OrbitRecord> out = records_;
    std::sort(out.begin(), out.end(), record_less);
    return out;
  }

 private:
  void note(const std::string& s) const {
    if (policy_.log) policy_.log(std::string(depth_ * 2, ' ') + s);
  }

  void check_action() const {
    if (action_.degree() != h_.size())
      throw ActionMismatch("group acts on " + std::to_string(action_.degree()) + " points but the polytope has " + std::to_string(h_.size()) +
                           " inequalities");
    const PointSet& pts = *action_.points;
    for (std::size_t k = 0; k < action_.perms.size(); ++k) {
      const Perm& g = action_.perms[k];
      if (g.size() != h_.size()) throw ActionMismatch("generator " + std::to_string(k) + " has the wrong degree");
      for (std::size_t i = 0; i < h_.size(); ++i)
        if (h_.rhs(g[i]) != h_.rhs(i)) throw ActionMismatch("generator " + std::to_string(k) + " does not preserve right-hand sides");
      for (auto w : action_.witness)
        for (std::size_t i = 0; i < pts.size(); ++i)
          if (pts.ip(w, i) != pts.ip(g[w], g[i])) throw ActionMismatch("generator " + std::to_string(k) + " does not preserve inner products");
    }
  }

  template <class F>
  void parallel_for(std::size_t n, F&& f) {
    const std::size_t w = std::min<std::size_t>(std::max<std::size_t>(policy_.workers, 1), n);
    if (w <= 1) {
      for (std::size_t k = 0; k < n; ++k) f(k);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < w; ++t)
      threads.emplace_back([&, t] {
        try {
          for (std::size_t k; (k = next++) < n;) f(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : threads) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SearchOptions search_options(std::uint64_t budget) const {
    SearchOptions o;
    o.budget = budget;
    o.seed = policy_.seed;
    return o;
  }

  StabilizerResult stabilizer_of(const std::vector<std::uint32_t>& t) {
    std::uint64_t budget = policy_.budget;
    for (std::size_t attempt = 0;; ++attempt) {
      auto r = set_stabilizer(group_, *action_.points, t, search_options(budget), action_.witness);
      if (r.status != SearchStatus::kUndecided) return r;
      if (attempt == policy_.escalations) throw UndecidedError("set stabilizer of a " + std::to_string(t.size()) + "-set after " + std::to_string(budget) + " nodes");
      budget *= 10;
    }
  }

  /** Tight sets of all neighbours of a representative, sorted and deduplicated. */
  std::vector<std::vector<std::uint32_t>> treat(OrbitRecord& rec) {
    const auto& tight = rec.tight.indices;
    if (rec.stabilizer.empty() && rec.stabilizer_order != 1) {
      // resumed from a checkpoint: stabilizer generators were not stored
      auto s = stabilizer_of(tight);
      rec.stabilizer = std::move(s.generators);
    }
    const HPolytope cone = tangent_cone_of(tight);
    std::vector<QVector> rays;
    const bool direct = tight.size() <= policy_.direct_threshold || h_.dim() <= policy_.direct_dim || depth_ >= policy_.max_depth;
    if (direct) {
      DDLimits lim;
      lim.max_dim = std::max(lim.max_dim, policy_.direct_dim);
      lim.max_inequalities = std::max(lim.max_inequalities, policy_.direct_threshold);
      rays = dual_description(cone, lim).rays;
    } else {
      rays = recursive_rays(rec, cone);
    }
    std::set<std::vector<std::uint32_t>> out;
    for (const auto& r : rays) {
      const QVector w = edge_walk(h_, rec.rep_vertex, r);
      out.insert(incidence_set(h_, w).indices);
    }
    return {out.begin(), out.end()};
  }

  HPolytope tangent_cone_of(const std::vector<std::uint32_t>& tight) const {
    std::vector<QVector> a;
    for (auto i : tight) a.push_back(h_.normal(i));
    return HPolytope(h_.dim(), std::move(a), QVector(tight.size()));
  }

  /** Orbit representatives of the tangent-cone rays under the vertex stabilizer. */
  std::vector<QVector> recursive_rays(const OrbitRecord& rec, const HPolytope& cone) {
    ++recursions_;
    const auto& tight = rec.tight.indices;
    QVector c(h_.dim());
    for (const auto& a : cone.normals()) c = c - a;
    // G^{-1} c with G = sum a a^T is fixed by every symmetry permuting the normals
    const std::size_t n = h_.dim();
    QMatrix gram(n, n);
    for (const auto& a : cone.normals())
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gram(i, j) += a[i] * a[j];
    const auto u = solve_linear(gram, c);
    if (!u) throw InternalError("tight normals of a vertex do not span");
    const ConeSection sec = cone_section(cone, c, dot(c, *u).inverse() * *u);
    std::vector<std::uint32_t> pos(h_.size(), 0);
    for (std::size_t k = 0; k < tight.size(); ++k) pos[tight[k]] = static_cast<std::uint32_t>(k);
    PermAction sub;
    sub.points = std::make_shared<const PointSet>(action_.points->subset(tight));
    for (const auto& g : rec.stabilizer) {
      Perm r(tight.size());
      for (std::size_t k = 0; k < tight.size(); ++k) r[k] = pos[g[tight[k]]];
      sub.perms.push_back(std::move(r));
    }
    sub.witness = sub.points->spanning_indices();
    const PermGroup sub_group = make_group(sub, rec.stabilizer_order, policy_.seed);
    if (sub_group.order() != rec.stabilizer_order) throw InternalError("stabilizer restricted to its tight set lost elements");
    RecursionPolicy p = policy_;
    p.workers = 1;
    p.checkpoint.clear();
    OrbitEngine inner(sec.polytope, sub, sub_group, p, depth_ + 1);
    note("recursing into a " + std::to_string(tight.size()) + "-facet cone, stabilizer order " + rec.stabilizer_order.get_str());
    const auto sub_records = inner.run({});
    std::vector<QVector> rays;
    for (const auto& s : sub_records) rays.push_back(primitive(sec.lift(s.rep_vertex)));
    return rays;
  }

  Rational norm_of(const QVector& v) const {
    const QMatrix& q = action_.points->form();
    if (q.rows() != v.size()) return Rational(0);
    return dot(v, q * v);
  }

  /** Index of a new record, or nullopt when an equivalent orbit is stored. */
  std::optional<std::size_t> insert_if_new(const std::vector<std::uint32_t>& t, const QVector* vertex) {
    SetKey key = set_key(*action_.points, t);
    auto& bucket = buckets_[key];
    for (auto id : bucket) {
      std::uint64_t budget = policy_.budget;
      for (std::size_t attempt = 0;; ++attempt) {
        ++stats.transporter_calls;
        const auto r = set_transporter(group_, *action_.points, records_[id].tight.indices, t, search_options(budget), action_.witness);
        if (r.status == SearchStatus::kFound) return std::nullopt;
        if (r.status == SearchStatus::kNotEquivalent) break;
        if (attempt == policy_.escalations)
          throw UndecidedError("equivalence of two " + std::to_string(t.size()) + "-sets after " + std::to_string(budget) + " nodes");
        ++stats.escalations;
        budget *= 10;
      }
    }
    if (records_.size() >= policy_.max_orbits) throw ResourceLimit("more than " + std::to_string(policy_.max_orbits) + " orbits");
    OrbitRecord rec;
    rec.rep_vertex = vertex ? *vertex : vertex_from_tight(h_, t);
    rec.tight = incidence_set(h_, rec.rep_vertex);
    if (rec.tight.indices != t) throw InternalError("tight set of a neighbour changed on recomputation");
    rec.key = std::move(key);
    rec.norm_sq = norm_of(rec.rep_vertex);
    auto st = stabilizer_of(t);
    rec.stabilizer_order = st.order;
    rec.stabilizer = std::move(st.generators);
    if (group_.order() % rec.stabilizer_order != 0) throw InternalError("stabilizer order does not divide the group order");
    bucket.push_back(records_.size());
    records_.push_back(std::move(rec));
    treated_.push_back(false);
    return records_.size() - 1;
  }

  // Checkpoint: "bank <count>" then per record
  //   "<treated> <stabilizer order> | <vertex> | <tight indices>"
  void save_checkpoint(const std::vector<std::size_t>& pending) const {
    if (policy_.checkpoint.empty() || depth_ != 0) return;
    std::vector<bool> open(records_.size(), false);
    for (auto p : pending) open[p] = true;
    std::ostringstream out;
    out << "bank " << records_.size() << "\n";
    for (std::size_t k = 0; k < records_.size(); ++k) {
      const auto& r = records_[k];
      out << (open[k] ? 0 : 1) << " " << r.stabilizer_order.get_str() << " |";
      for (const auto& x : r.rep_vertex) out << " " << x.str();
      out << " |";
      for (auto i : r.tight.indices) out << " " << i;
      out << "\n";
    }
    const std::string tmp = policy_.checkpoint + ".tmp";
    {
      std::ofstream f(tmp);
      if (!f) throw ConfigError("cannot write checkpoint " + tmp);
      f << out.str();
    }
    if (std::rename(tmp.c_str(), policy_.checkpoint.c_str()) != 0) throw ConfigError("cannot replace checkpoint " + policy_.checkpoint);
  }

  bool load_checkpoint(std::vector<std::size_t>& pending) {
    std::ifstream in(policy_.checkpoint);
    if (!in) return false;
    std::string word;
    std::size_t count = 0;
    if (!(in >> word >> count) || word != "bank") throw ParseError("bad checkpoint header in " + policy_.checkpoint);
    std::string line;
    std::getline(in, line);
    for (std::size_t k = 0; k < count; ++k) {
      if (!std::getline(in, line)) throw ParseError("truncated checkpoint");
      const auto a = line.find('|'), b = line.find('|', a + 1);
      if (a == std::string::npos || b == std::string::npos) throw ParseError("bad checkpoint line " + std::to_string(k + 1));
      std::istringstream head(line.substr(0, a)), vs(line.substr(a + 1, b - a - 1)), ts(line.substr(b + 1));
      int done = 0;
      std::string order;
      head >> done >> order;
      OrbitRecord rec;
      for (std::string x; vs >> x;) rec.rep_vertex.push_back(Rational::parse(x));
      rec.tight = incidence_set(h_, rec.rep_vertex);
      std::vector<std::uint32_t> t;
      for (std::uint32_t i; ts >> i;) t.push_back(i);
      if (t != rec.tight.indices) throw ParseError("checkpoint tight set disagrees with its vertex");
      rec.key = set_key(*action_.points, t);
      rec.norm_sq = norm_of(rec.rep_vertex);
      rec.stabilizer_order = Integer(order);
      buckets_[rec.key].push_back(records_.size());
      records_.push_back(std::move(rec));
      treated_.push_back(done == 1);
      if (done != 1) pending.push_back(k);
    }
    return true;
  }

  const HPolytope& h_;
  const PermAction& action_;
  const PermGroup& group_;
  RecursionPolicy policy_;
  std::size_t depth_;
  std::vector<OrbitRecord> records_;
  std::vector<bool> treated_;
  std::map<SetKey, std::vector<std::size_t>> buckets_;
  std::atomic<std::size_t> recursions_{0};
};

}  // namespace detail

/**
 * One record per orbit of vertices. Inequality i of h must belong to point i
 * of the action. Without seeds an LP vertex starts the search.
 */
inline std::vector<OrbitRecord> enumerate_vertex_orbits(const HPolytope& h, const PermAction& action, const PermGroup& group,
                                                        const std::vector<QVector>& seeds = {}, const RecursionPolicy& policy = {},
                                                        EngineStats* stats = nullptr) {
  detail::OrbitEngine e(h, action, group, policy, 0);
  auto out = e.run(seeds);
  if (stats) *stats = e.stats;
  return out;
}

inline std::vector<OrbitRecord> enumerate_vertex_orbits(const HPolytope& h, const PermAction& action, const std::vector<QVector>& seeds = {},
                                                        const RecursionPolicy& policy = {}, EngineStats* stats = nullptr) {
  const PermGroup g = make_group(action, std::nullopt, policy.seed);
  return enumerate_vertex_orbits(h, action, g, seeds, policy, stats);
}

/** Every vertex in the union of the record orbits, sorted. */
inline std::vector<QVector> expand_orbits(const HPolytope& h, const PermAction& action, const std::vector<OrbitRecord>& records) {
  std::vector<QVector> out;
  for (const auto& r : records)
    for (const auto& t : orbit_of_set(action, r.tight.indices)) out.push_back(vertex_from_tight(h, t));
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/** Orbit report: one line per record "norm_sq N stabilizer_order | vertex | tight indices". */
inline std::string format_orbit_report(const std::vector<OrbitRecord>& records) {
  std::ostringstream out;
  out << "# norm_sq N stabilizer_order | vertex | tight\n";
  for (const auto& r : records) {
    out << r.norm_sq.str() << " " << r.tight.size() << " " << r.stabilizer_order.get_str() << " |";
    for (const auto& x : r.rep_vertex) out << " " << x.str();
    out << " |";
    for (auto i : r.tight.indices) out << " " << i;
    out << "\n";
  }
  return out.str();
}

}  // namespace contact
