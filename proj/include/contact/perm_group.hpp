#pragma once

// Permutation groups on {0..n-1} with a base and strong generating set built
// by randomized Schreier-Sims. Permutations act on the right: x^g = g[x], and
// (g*h)[x] = h[g[x]].
//
// Sifting keeps the element as a product (g, word) and only evaluates the
// points it needs. When the group comes from a linear action, an "identity
// witness" set of points that spans the ambient space decides triviality
// without touching every point.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "contact/error.hpp"
#include "contact/rational.hpp"

namespace contact {

using Perm = std::vector<std::uint32_t>;

inline Perm identity_perm(std::size_t n) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  return p;
}

/** a then b. */
inline Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

inline Perm inverse(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<std::uint32_t>(i);
  return r;
}

inline bool is_identity(const Perm& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != i) return false;
  return true;
}

inline bool is_permutation(const Perm& a) {
  std::vector<bool> seen(a.size(), false);
  for (auto x : a) {
    if (x >= a.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

enum class OrderCertificate {
  kSchreierGenerators,  // every Schreier generator sifted to the identity
  kKnownOrder,          // BSGS order reached a supplied upper bound
  kRandomized,          // consecutive trivial sifts only
};

inline std::string to_string(OrderCertificate c) {
  switch (c) {
    case OrderCertificate::kSchreierGenerators: return "schreier-generators";
    case OrderCertificate::kKnownOrder: return "known-order";
    case OrderCertificate::kRandomized: return "randomized";
  }
  return "?";
}

struct SchreierSimsOptions {
  std::uint64_t seed = 1;
  std::optional<Integer> known_order;            // |G| is at most this; stop on reaching it
  std::vector<std::uint32_t> base_prefix;        // base starts with these points
  std::vector<std::uint32_t> identity_witness;   // fixing these (and the base) implies identity
  std::size_t trivial_sifts = 40;
  std::uint64_t verify_limit = 50'000'000;       // max Schreier generators for the deterministic pass
};

class PermGroup {
 public:
  struct Letter {
    std::uint32_t gen;
    bool inv;
  };
  using Word = std::vector<Letter>;

  PermGroup() = default;

  PermGroup(std::size_t degree, std::vector<Perm> generators, SchreierSimsOptions opt = {})
      : degree_(degree), input_gens_(std::move(generators)), opt_(std::move(opt)) {
    for (std::size_t k = 0; k < input_gens_.size(); ++k)
      if (input_gens_[k].size() != degree_ || !is_permutation(input_gens_[k]))
        throw ShapeError("generator " + std::to_string(k) + " is not a permutation of " + std::to_string(degree_) + " points");
    for (auto b : opt_.base_prefix) {
      if (b >= degree_) throw ShapeError("base point out of range");
      add_level(b);
    }
    build();
  }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return input_gens_; }
  const std::vector<Perm>& strong_generators() const { return gens_; }
  OrderCertificate certificate() const { return certificate_; }

  Integer order() const {
    Integer o = 1;
    for (const auto& l : levels_) o *= static_cast<unsigned long>(l.orbit.size());
    return o;
  }

  std::size_t base_length() const { return levels_.size(); }
  std::uint32_t base_point(std::size_t i) const { return levels_[i].base; }
  std::vector<std::uint32_t> base() const {
    std::vector<std::uint32_t> b;
    for (const auto& l : levels_) b.push_back(l.base);
    return b;
  }
  const std::vector<std::uint32_t>& basic_orbit(std::size_t i) const { return levels_[i].orbit; }
  bool in_basic_orbit(std::size_t i, std::uint32_t x) const { return levels_[i].label[x] != kAbsent; }
  /** Strong generators (indices into strong_generators()) fixing the first i base points. */
  const std::vector<std::uint32_t>& level_generators(std::size_t i) const { return levels_[i].gens; }

  /** Word for the transversal element u with base_point(i)^u = x. */
  Word transversal_word(std::size_t i, std::uint32_t x) const {
    Word w;
    const Level& l = levels_[i];
    if (l.label[x] == kAbsent) throw InternalError("point not in basic orbit");
    while (x != l.base) {
      const auto s = static_cast<std::uint32_t>(l.label[x]);
      w.push_back({s, false});
      x = inv_[s][x];
    }
    std::reverse(w.begin(), w.end());
    return w;
  }

  Perm transversal(std::size_t i, std::uint32_t x) const { return word_perm(transversal_word(i, x)); }

  std::uint32_t apply(const Word& w, std::uint32_t x) const {
    for (const auto& l : w) x = l.inv ? inv_[l.gen][x] : gens_[l.gen][x];
    return x;
  }

  Perm word_perm(const Word& w) const {
    Perm p = identity_perm(degree_);
    for (std::size_t x = 0; x < degree_; ++x) p[x] = apply(w, static_cast<std::uint32_t>(x));
    return p;
  }

  bool contains(const Perm& g) const {
    if (g.size() != degree_ || !is_permutation(g)) return false;
    Sifted s = sift(&g, {}, 0);
    if (s.level < levels_.size()) return false;
    for (std::size_t x = 0; x < degree_; ++x)
      if (image(s, static_cast<std::uint32_t>(x)) != x) return false;
    return true;
  }

  /** Orbit of x under the input generators, in discovery order. */
  std::vector<std::uint32_t> orbit(std::uint32_t x) const {
    std::vector<bool> seen(degree_, false);
    std::vector<std::uint32_t> out{x};
    seen[x] = true;
    for (std::size_t k = 0; k < out.size(); ++k)
      for (const auto& g : input_gens_) {
        const auto y = g[out[k]];
        if (!seen[y]) {
          seen[y] = true;
          out.push_back(y);
        }
      }
    return out;
  }

  /** Uniform-ish random element by product replacement; deterministic per seed. */
  Perm random_element(std::mt19937_64& rng) const {
    RandomState st = init_random(rng);
    return next_random(st, rng);
  }

 private:
  static constexpr std::int32_t kAbsent = -1;
  static constexpr std::int32_t kRoot = -2;

  struct Level {
    std::uint32_t base;
    std::vector<std::uint32_t> gens;
    std::vector<std::int32_t> label;
    std::vector<std::uint32_t> orbit;
  };

  struct Sifted {
    const Perm* head = nullptr;
    Word word;
    std::size_t level = 0;  // first level where sifting failed; levels_.size() if all passed
  };

  struct RandomState {
    std::vector<Perm> slots;
    Perm acc;
  };

  std::uint32_t image(const Sifted& s, std::uint32_t x) const {
    if (s.head) x = (*s.head)[x];
    return apply(s.word, x);
  }

  Sifted sift(const Perm* head, Word word, std::size_t start) const {
    Sifted s{head, std::move(word), start};
    for (; s.level < levels_.size(); ++s.level) {
      const Level& l = levels_[s.level];
      std::uint32_t beta = image(s, l.base);
      if (l.label[beta] == kAbsent) return s;
      while (beta != l.base) {
        const auto g = static_cast<std::uint32_t>(l.label[beta]);
        s.word.push_back({g, true});
        beta = inv_[g][beta];
      }
    }
    return s;
  }

  /** True when the fully sifted element fixes the witness points (or every point). */
  bool residue_trivial(const Sifted& s) const {
    if (!opt_.identity_witness.empty()) {
      for (auto x : opt_.identity_witness)
        if (image(s, x) != x) return false;
      return true;
    }
    for (std::size_t x = 0; x < degree_; ++x)
      if (image(s, static_cast<std::uint32_t>(x)) != x) return false;
    return true;
  }

  Perm materialize(const Sifted& s) const {
    Perm p(degree_);
    for (std::size_t x = 0; x < degree_; ++x) p[x] = image(s, static_cast<std::uint32_t>(x));
    return p;
  }

  void add_level(std::uint32_t b) {
    Level l;
    l.base = b;
    l.label.assign(degree_, kAbsent);
    l.label[b] = kRoot;
    l.orbit = {b};
    levels_.push_back(std::move(l));
  }

  void rebuild_orbit(Level& l) {
    std::fill(l.label.begin(), l.label.end(), kAbsent);
    l.label[l.base] = kRoot;
    l.orbit.assign(1, l.base);
    for (std::size_t k = 0; k < l.orbit.size(); ++k)
      for (auto g : l.gens) {
        const auto y = gens_[g][l.orbit[k]];
        if (l.label[y] == kAbsent) {
          l.label[y] = static_cast<std::int32_t>(g);
          l.orbit.push_back(y);
        }
      }
  }

  /** Adds a nontrivial element that fixes the first `level` base points. */
  void add_strong_generator(Perm h, std::size_t level) {
    if (level == levels_.size()) {
      std::uint32_t moved = 0;
      while (h[moved] == moved) ++moved;
      add_level(moved);
    }
    const auto id = static_cast<std::uint32_t>(gens_.size());
    inv_.push_back(inverse(h));
    gens_.push_back(std::move(h));
    for (std::size_t i = 0; i <= level; ++i) {
      levels_[i].gens.push_back(id);
      rebuild_orbit(levels_[i]);
    }
  }

  /** Sifts a materialized element; adds its residue when nontrivial. Returns true if added. */
  bool sift_and_add(const Perm& g, std::size_t start, Word word = {}) {
    Sifted s = sift(&g, std::move(word), start);
    if (s.level == levels_.size() && residue_trivial(s)) return false;
    add_strong_generator(materialize(s), s.level);
    return true;
  }

  bool sift_word_and_add(Word word, std::size_t start) {
    Sifted s = sift(nullptr, std::move(word), start);
    if (s.level == levels_.size() && residue_trivial(s)) return false;
    add_strong_generator(materialize(s), s.level);
    return true;
  }

  RandomState init_random(std::mt19937_64& rng) const {
    RandomState st;
    const std::size_t r = std::max<std::size_t>(10, input_gens_.size());
    for (std::size_t i = 0; i < r; ++i) st.slots.push_back(input_gens_.empty() ? identity_perm(degree_) : input_gens_[i % input_gens_.size()]);
    st.acc = identity_perm(degree_);
    for (int i = 0; i < 50; ++i) next_random(st, rng);
    return st;
  }

  Perm next_random(RandomState& st, std::mt19937_64& rng) const {
    const std::size_t r = st.slots.size();
    std::uniform_int_distribution<std::size_t> pick(0, r - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (r > 1 && j == i) j = pick(rng);
    const bool inv = rng() & 1;
    const Perm rj = inv ? inverse(st.slots[j]) : st.slots[j];
    st.slots[i] = (rng() & 1) ? compose(st.slots[i], rj) : compose(rj, st.slots[i]);
    st.acc = compose(st.acc, st.slots[i]);
    return st.acc;
  }

  void build() {
    for (const auto& g : input_gens_)
      if (!is_identity(g)) sift_and_add(g, 0);
    if (gens_.empty()) {
      certificate_ = OrderCertificate::kSchreierGenerators;
      return;
    }
    std::mt19937_64 rng(opt_.seed);
    RandomState st = init_random(rng);
    std::size_t trivial = 0;
    while (true) {
      if (opt_.known_order) {
        const Integer o = order();
        if (o == *opt_.known_order) {
          certificate_ = OrderCertificate::kKnownOrder;
          return;
        }
        if (o > *opt_.known_order)
          throw ConfigError("group has order at least " + o.get_str() + ", above the stated " + opt_.known_order->get_str());
      } else if (trivial >= opt_.trivial_sifts) {
        break;
      }
      const Perm g = next_random(st, rng);
      if (sift_and_add(g, 0)) trivial = 0;
      else ++trivial;
    }
    if (schreier_generator_count() <= opt_.verify_limit) {
      verify();
      certificate_ = OrderCertificate::kSchreierGenerators;
    } else {
      certificate_ = OrderCertificate::kRandomized;
    }
  }

  std::uint64_t schreier_generator_count() const {
    std::uint64_t c = 0;
    for (const auto& l : levels_) c += static_cast<std::uint64_t>(l.orbit.size()) * l.gens.size();
    return c;
  }

  /** Sims' test: every Schreier generator of every level sifts through the deeper levels. */
  void verify() {
  restart:
    for (std::size_t i = levels_.size(); i-- > 0;) {
      const std::vector<std::uint32_t> orbit = levels_[i].orbit;
      const std::vector<std::uint32_t> gens = levels_[i].gens;
      for (auto gamma : orbit)
        for (auto s : gens) {
          const std::uint32_t delta = gens_[s][gamma];
          Word w = transversal_word(i, gamma);
          w.push_back({s, false});
          Word back = transversal_word(i, delta);
          for (auto it = back.rbegin(); it != back.rend(); ++it) w.push_back({it->gen, true});
          if (sift_word_and_add(std::move(w), i + 1)) goto restart;
        }
    }
  }

  std::size_t degree_ = 0;
  std::vector<Perm> input_gens_;
  SchreierSimsOptions opt_;
  std::vector<Perm> gens_;
  std::vector<Perm> inv_;
  std::vector<Level> levels_;
  OrderCertificate certificate_ = OrderCertificate::kRandomized;
};

}  // namespace contact
