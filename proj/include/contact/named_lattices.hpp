#pragma once

// Registry of named lattices (Zn, An, Dn, E6, E7, E8, Leech) and generators
// of their automorphism groups. Group elements act on column vectors of
// ambient coordinates: x -> M x.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "contact/error.hpp"
#include "contact/golay.hpp"
#include "contact/lattice.hpp"
#include "contact/linalg.hpp"

namespace contact {

struct LatticeSpec {
  std::string family;  // "zn", "an", "dn", "e", "leech"
  int rank = 0;
  std::string canonical() const { return family == "leech" ? "leech" : family + " " + std::to_string(rank); }
};

/** Accepts "an 2", "A2", "d4", "e 8", "E8", "zn 1", "leech". */
inline LatticeSpec parse_lattice_name(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "leech" || s == "leechmog") return {"leech", 24};
  std::size_t k = 0;
  while (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) ++k;
  std::string fam = s.substr(0, k);
  const std::string num = s.substr(k);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos || num.size() > 3)
    throw ConfigError("unknown lattice '" + text + "'");
  const int n = std::stoi(num);
  if (fam == "z") fam = "zn";
  if (fam == "a") fam = "an";
  if (fam == "d") fam = "dn";
  if (fam == "en") fam = "e";
  if (fam == "zn" && n >= 1) return {fam, n};
  if (fam == "an" && n >= 1) return {fam, n};
  if (fam == "dn" && n >= 3) return {fam, n};
  if (fam == "e" && n >= 6 && n <= 8) return {fam, n};
  throw ConfigError("unknown lattice '" + text + "'");
}

namespace detail {

inline QMatrix cartan_gram_a(int n) {
  // b_i = (-1)^(i+1) alpha_i, so neighbouring basis vectors have inner product +1
  QMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = Rational(2);
    if (i + 1 < n) g(i, i + 1) = g(i + 1, i) = Rational(1);
  }
  return g;
}

// Bourbaki numbering: 1-3-4-5-6-7-8 chain with 2 attached to 4.
inline QMatrix cartan_gram_e(int n) {
  QMatrix g(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = Rational(2);
  auto link = [&](int a, int b) {
    g(a - 1, b - 1) = g(b - 1, a - 1) = Rational(-1);
  };
  link(1, 3);
  link(2, 4);
  link(3, 4);
  for (int i = 4; i < n; ++i) link(i, i + 1);
  return g;
}

inline QMatrix reflection(const QVector& root, const QMatrix& form) {
  // x -> x - 2 <x,r>/<r,r> r  with <x,y> = x^T Q y
  const std::size_t n = root.size();
  const QVector qr = form * root;
  const Rational rr = dot(root, qr);
  QMatrix m = QMatrix::identity(n);
  const Rational s = Rational(2) / rr;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!root[i].is_zero() && !qr[j].is_zero()) m(i, j) -= s * root[i] * qr[j];
  return m;
}

inline QMatrix negation(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(-1);
  return m;
}

inline QMatrix perm_matrix(const std::vector<std::size_t>& p) {
  // coordinate i goes to position p[i]
  QMatrix m(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(p[i], i) = Rational(1);
  return m;
}

}  // namespace detail

inline Lattice build_named_lattice(const LatticeSpec& spec) {
  const int n = spec.rank;
  const std::string name = spec.canonical();
  if (spec.family == "leech") return build_leech();
  if (spec.family == "zn") return Lattice(name, QMatrix::identity(n), QMatrix::identity(n));
  if (spec.family == "an") return Lattice(name, QMatrix::identity(n), detail::cartan_gram_a(n));
  if (spec.family == "e" && n < 8) return Lattice(name, QMatrix::identity(n), detail::cartan_gram_e(n));
  if (spec.family == "dn") {
    QMatrix b(n, n);
    for (int i = 0; i + 1 < n; ++i) {
      b(i, i) = Rational(1);
      b(i, i + 1) = Rational(-1);
    }
    b(n - 1, n - 2) = Rational(1);
    b(n - 1, n - 1) = Rational(1);
    return Lattice(name, std::move(b), QMatrix::identity(n));
  }
  if (spec.family == "e" && n == 8) {
    QMatrix b(8, 8);
    for (int j = 0; j < 8; ++j) b(0, j) = Rational(j == 0 || j == 7 ? 1 : -1, 2);
    b(1, 0) = Rational(1);
    b(1, 1) = Rational(1);
    for (int i = 2; i < 8; ++i) {
      b(i, i - 2) = Rational(-1);
      b(i, i - 1) = Rational(1);
    }
    return Lattice(name, std::move(b), QMatrix::identity(8));
  }
  throw ConfigError("unknown lattice '" + name + "'");
}

inline Lattice build_named_lattice(const std::string& text) { return build_named_lattice(parse_lattice_name(text)); }

/**
 * Generators of the full automorphism group of a named root lattice or Zn:
 * simple reflections, -I, and generators of the diagram automorphisms.
 */
inline MatrixGroupGens named_automorphism_group(const LatticeSpec& spec) {
  const int n = spec.rank;
  if (spec.family == "leech") throw ConfigError("the Leech group is read from a group file");
  MatrixGroupGens gens;
  if (spec.family == "zn") {
    QVector e0(n);
    e0[0] = Rational(1);
    gens.push_back(detail::reflection(e0, QMatrix::identity(n)));
    if (n >= 2) {
      std::vector<std::size_t> t(n), c(n);
      for (int i = 0; i < n; ++i) {
        t[i] = i;
        c[i] = (i + 1) % n;
      }
      std::swap(t[0], t[1]);
      gens.push_back(detail::perm_matrix(t));
      if (n >= 3) gens.push_back(detail::perm_matrix(c));
    }
    return gens;
  }
  const Lattice lat = build_named_lattice(spec);
  for (int i = 0; i < n; ++i) gens.push_back(detail::reflection(lat.basis().row_vector(i), lat.form()));
  gens.push_back(detail::negation(n));
  if (spec.family == "dn") {
    // swapping the two fork roots is the sign change of the last coordinate
    QMatrix s = QMatrix::identity(n);
    s(n - 1, n - 1) = Rational(-1);
    gens.push_back(s);
    if (n == 4) {
      QMatrix h(4, 4);
      const int sg[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = Rational(sg[i][j], 2);
      gens.push_back(h);
    }
  }
  return gens;
}

inline MatrixGroupGens named_automorphism_group(const std::string& text) { return named_automorphism_group(parse_lattice_name(text)); }

/** Order of the full automorphism group, for tests. */
inline Integer named_automorphism_order(const LatticeSpec& spec) {
  auto fact = [](int k) {
    Integer f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  const int n = spec.rank;
  if (spec.family == "zn") return (Integer(1) << n) * fact(n);
  if (spec.family == "an") return n == 1 ? Integer(2) : 2 * fact(n + 1);
  if (spec.family == "dn") return (Integer(1) << n) * fact(n) * (n == 4 ? 3 : 1);
  if (spec.family == "e") {
    if (n == 6) return Integer(103680);
    if (n == 7) return Integer(2903040);
    return Integer(696729600);
  }
  if (spec.family == "leech") return Integer("8315553613086720000");
  throw ConfigError("unknown lattice family");
}

}  // namespace contact
