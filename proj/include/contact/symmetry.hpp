#pragma once

// Matrix groups acting on a finite point set: exact permutation action,
// lattice-automorphism checks, group files, and group order.

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "contact/backtrack.hpp"
#include "contact/error.hpp"
#include "contact/lattice.hpp"
#include "contact/linalg.hpp"
#include "contact/perm_group.hpp"
#include "contact/points.hpp"

namespace contact {

/** A permutation action on an indexed point set; perms[k] is the action of generator k. */
struct PermAction {
  std::shared_ptr<const PointSet> points;
  std::vector<Perm> perms;
  std::vector<std::uint32_t> witness;  // spanning points: fixing them forces the identity

  std::size_t degree() const { return points ? points->size() : 0; }
};

/** Image of every point under x -> M x; throws NotASymmetry(index) when an image is missing. */
inline Perm matrix_permutation(const QMatrix& m, const PointSet& pts, std::size_t index = 0) {
  const std::size_t n = pts.dim();
  if (m.rows() != n || m.cols() != n) throw NotASymmetry(index, "matrix shape " + m.shape() + " for " + std::to_string(n) + "-dim points");
  Integer d = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).denominator().get_mpz_t());
  if (!d.fits_slong_p()) throw NotASymmetry(index, "matrix denominators too large");
  const long long den = d.get_si();
  std::vector<long long> mi(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Integer v = (m(i, j) * Rational(den)).numerator();
      if (!v.fits_slong_p()) throw NotASymmetry(index, "matrix entries too large");
      mi[i * n + j] = v.get_si();
    }
  Perm p(pts.size());
  std::vector<long long> y(n);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto x = pts.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      __int128 s = 0;
      for (std::size_t j = 0; j < n; ++j) s += static_cast<__int128>(mi[i * n + j]) * x[j];
      if (s % den != 0) throw NotASymmetry(index, "image of point " + std::to_string(k) + " is not a point of the set");
      y[i] = static_cast<long long>(s / den);
    }
    const auto f = pts.find(y);
    if (!f) throw NotASymmetry(index, "image of point " + std::to_string(k) + " is not in the set");
    p[k] = *f;
  }
  if (!is_permutation(p)) throw NotASymmetry(index, "action is not injective");
  return p;
}

inline PermAction action_on_points(const MatrixGroupGens& gens, std::shared_ptr<const PointSet> pts) {
  PermAction a;
  a.points = std::move(pts);
  for (std::size_t k = 0; k < gens.size(); ++k) a.perms.push_back(matrix_permutation(gens[k], *a.points, k));
  a.witness = a.points->spanning_indices();
  if (a.witness.size() != a.points->dim()) a.witness.clear();  // not spanning: fall back to full checks
  return a;
}

inline PermAction action_on_min(const MatrixGroupGens& gens, const MinSet& min, const Lattice& l) {
  return action_on_points(gens, std::make_shared<const PointSet>(PointSet::from_min_set(min, l)));
}

/** True when M is orthogonal for the lattice form and maps every basis vector into the lattice. */
inline bool is_lattice_automorphism(const Lattice& l, const QMatrix& m) {
  const std::size_t n = l.dim();
  if (m.rows() != n || m.cols() != n) return false;
  if (m.transpose() * l.form() * m != l.form()) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (!l.contains(m * l.basis().row_vector(i))) return false;
  return true;
}

inline void check_lattice_automorphisms(const Lattice& l, const MatrixGroupGens& gens) {
  for (std::size_t k = 0; k < gens.size(); ++k)
    if (!is_lattice_automorphism(l, gens[k])) throw NotASymmetry(k, "not an isometry of lattice '" + l.name() + "'");
}

inline PermGroup make_group(const PermAction& a, std::optional<Integer> known_order = std::nullopt, std::uint64_t seed = 1) {
  SchreierSimsOptions o;
  o.seed = seed;
  o.known_order = std::move(known_order);
  o.identity_witness = a.witness;
  return PermGroup(a.degree(), a.perms, o);
}

inline Integer group_order(const PermAction& a, std::optional<Integer> known_order = std::nullopt) {
  return make_group(a, std::move(known_order)).order();
}

inline std::vector<std::uint32_t> orbit(const PermAction& a, std::uint32_t point) {
  if (point >= a.degree()) throw ShapeError("point index out of range");
  std::vector<bool> seen(a.degree(), false);
  std::vector<std::uint32_t> out{point};
  seen[point] = true;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : a.perms) {
      const auto y = g[out[k]];
      if (!seen[y]) {
        seen[y] = true;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

/** Image of a point set under a permutation, sorted. */
inline std::vector<std::uint32_t> image_of_set(const Perm& g, const std::vector<std::uint32_t>& s) {
  std::vector<std::uint32_t> r;
  r.reserve(s.size());
  for (auto x : s) r.push_back(g[x]);
  std::sort(r.begin(), r.end());
  return r;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/**
 * Group file: optional '#' comment lines, header "G n k", then k matrices of
 * n rows with n rationals each. When "<path>.fnv1a" exists it must hold the
 * FNV-1a 64 checksum of the file in hex.
 */
inline MatrixGroupGens parse_group(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> tokens;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  if (tokens.size() < 3 || tokens[0] != "G") throw ParseError("group file must start with 'G n k'");
  std::size_t n = 0, k = 0;
  try {
    n = std::stoul(tokens[1]);
    k = std::stoul(tokens[2]);
  } catch (const std::exception&) {
    throw ParseError("bad group header");
  }
  if (n == 0) throw ParseError("group dimension must be positive");
  if (tokens.size() != 3 + k * n * n)
    throw ParseError("group file has " + std::to_string(tokens.size() - 3) + " entries, expected " + std::to_string(k * n * n));
  MatrixGroupGens gens;
  std::size_t pos = 3;
  for (std::size_t g = 0; g < k; ++g) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational::parse(tokens[pos++]);
    gens.push_back(std::move(m));
  }
  return gens;
}

inline MatrixGroupGens read_group_file(const std::string& path) {
  const std::string text = read_file(path);
  std::ifstream sum(path + ".fnv1a");
  if (sum) {
    std::string want;
    sum >> want;
    std::ostringstream got;
    got << std::hex;
    got.width(16);
    got.fill('0');
    got << fnv1a64(text);
    if (got.str() != want) throw ConfigError("checksum mismatch for " + path + ": file " + got.str() + ", expected " + want);
  }
  return parse_group(text);
}

inline std::string format_group(const MatrixGroupGens& gens) {
  if (gens.empty()) throw ShapeError("empty generator list");
  const std::size_t n = gens[0].rows();
  std::ostringstream out;
  out << "G " << n << " " << gens.size() << "\n";
  for (const auto& m : gens) {
    out << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << m(i, j).str();
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace contact
