#pragma once

// Binary Golay code and the Leech lattice in MOG coordinates.
//
// Coordinates are numbered in table reading order: the 12 entries of the
// first printed row, then the 12 of the second. Consecutive groups of four
// coordinates form the six MOG columns, so coordinate i sits in MOG row i % 4
// and column i / 4. Vectors are integral; the inner product is (sum x_i y_i)/8.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "contact/error.hpp"
#include "contact/lattice.hpp"
#include "contact/linalg.hpp"
#include "contact/rational.hpp"

namespace contact {

inline constexpr std::size_t kLeechDim = 24;
inline constexpr long long kLeechDenominator = 8;

using Codeword = std::uint32_t;

/** Generator matrix rows (bit i = coordinate i), all octads. */
inline constexpr std::array<Codeword, 12> kGolayGenerators = {
    0x0000ffu, 0x000f0fu, 0x003333u, 0x005555u, 0x009669u, 0x03036au,
    0x050539u, 0x09065cu, 0x11111eu, 0x211247u, 0x411472u, 0x811724u,
};

struct GolayCode {
  std::vector<Codeword> codewords;  // sorted
  std::vector<Codeword> octads;     // sorted

  bool contains(Codeword c) const { return std::binary_search(codewords.begin(), codewords.end(), c); }

  /** Number of codewords of each weight 0..24. */
  std::array<std::size_t, 25> weight_distribution() const {
    std::array<std::size_t, 25> w{};
    for (Codeword c : codewords) ++w[std::popcount(c)];
    return w;
  }

  std::size_t min_weight() const {
    std::size_t m = 24;
    for (Codeword c : codewords)
      if (c != 0) m = std::min<std::size_t>(m, std::popcount(c));
    return m;
  }
};

/** Span of the given generators; throws unless the result is a [24,12,8] code. */
inline GolayCode build_golay(const std::vector<Codeword>& generators = {kGolayGenerators.begin(), kGolayGenerators.end()}) {
  GolayCode g;
  g.codewords.push_back(0);
  for (Codeword gen : generators) {
    if (gen >> kLeechDim) throw ShapeError("generator has bits beyond coordinate 23");
    if (g.contains(gen)) continue;
    const std::size_t n = g.codewords.size();
    for (std::size_t i = 0; i < n; ++i) g.codewords.push_back(g.codewords[i] ^ gen);
    std::sort(g.codewords.begin(), g.codewords.end());
  }
  for (Codeword c : g.codewords)
    if (std::popcount(c) == 8) g.octads.push_back(c);
  if (g.codewords.size() != 4096 || g.min_weight() != 8)
    throw ConfigError("generators span " + std::to_string(g.codewords.size()) + " words of minimum weight " +
                      std::to_string(g.min_weight()) + ", not a [24,12,8] code");
  return g;
}

/** Reads a generator file: one 24-character 0/1 string per line, '#' comments. */
inline std::vector<Codeword> read_golay_generators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<Codeword> gens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }), line.end());
    if (line.empty()) continue;
    if (line.size() != kLeechDim) throw ParseError("generator row must have 24 bits: '" + line + "'");
    Codeword c = 0;
    for (std::size_t i = 0; i < kLeechDim; ++i) {
      if (line[i] == '1') c |= Codeword{1} << i;
      else if (line[i] != '0') throw ParseError("bad bit '" + std::string(1, line[i]) + "'");
    }
    gens.push_back(c);
  }
  return gens;
}

using LeechPoint = std::array<int, kLeechDim>;

struct LeechShapeCounts {
  std::size_t four_four = 0;    // (+-4, +-4, 0^22)
  std::size_t octad_twos = 0;   // (+-2^8, 0^16)
  std::size_t odd = 0;          // (-+3, +-1^23)
  std::size_t total() const { return four_four + octad_twos + odd; }
};

inline LeechShapeCounts leech_shape_counts(const std::vector<LeechPoint>& pts) {
  LeechShapeCounts c;
  for (const auto& p : pts) {
    if (std::abs(p[0]) % 2 == 1) ++c.odd;
    else if (std::count_if(p.begin(), p.end(), [](int x) { return std::abs(x) == 4; }) > 0) ++c.four_four;
    else ++c.octad_twos;
  }
  return c;
}

/**
 * The 196560 minimal vectors assembled from the code, sorted lexicographically:
 * (+-4,+-4,0^22); +-2 on an octad with an even number of minus signs; and for
 * every codeword c, -1 on c and +1 elsewhere with one coordinate moved by -+4
 * towards -3 or 3 as the sum condition requires.
 */
inline std::vector<LeechPoint> leech_min_points(const GolayCode& code) {
  std::vector<LeechPoint> out;
  out.reserve(196560);
  for (std::size_t i = 0; i < kLeechDim; ++i)
    for (std::size_t j = i + 1; j < kLeechDim; ++j)
      for (int si : {-4, 4})
        for (int sj : {-4, 4}) {
          LeechPoint p{};
          p[i] = si;
          p[j] = sj;
          out.push_back(p);
        }
  for (Codeword o : code.octads) {
    std::array<std::size_t, 8> pos{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < kLeechDim; ++i)
      if (o >> i & 1) pos[k++] = i;
    for (unsigned signs = 0; signs < 256; ++signs) {
      if (std::popcount(signs) % 2) continue;
      LeechPoint p{};
      for (std::size_t t = 0; t < 8; ++t) p[pos[t]] = (signs >> t & 1) ? -2 : 2;
      out.push_back(p);
    }
  }
  for (Codeword c : code.codewords)
    for (std::size_t i = 0; i < kLeechDim; ++i) {
      LeechPoint p{};
      for (std::size_t j = 0; j < kLeechDim; ++j) p[j] = (c >> j & 1) ? -1 : 1;
      p[i] = p[i] == 1 ? -3 : 3;
      out.push_back(p);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/** Membership in the Leech lattice, integral MOG frame. */
inline bool in_leech(const GolayCode& code, std::span<const long long> x) {
  if (x.size() != kLeechDim) return false;
  const long long m = ((x[0] % 2) + 2) % 2;
  long long sum = 0;
  Codeword pattern = 0;
  for (std::size_t i = 0; i < kLeechDim; ++i) {
    if (((x[i] % 2) + 2) % 2 != m) return false;
    sum += x[i];
    const long long r = ((x[i] % 4) + 4) % 4;
    if (r == (m ? 3 : 2)) pattern |= Codeword{1} << i;
  }
  if ((((sum - 4 * m) % 8) + 8) % 8 != 0) return false;
  return code.contains(pattern);
}

/** Integer generators of the Leech lattice in the MOG frame. */
inline std::vector<std::vector<long long>> leech_generators(const std::vector<Codeword>& golay_gens) {
  std::vector<std::vector<long long>> g;
  for (Codeword c : golay_gens) {
    std::vector<long long> v(kLeechDim, 0);
    for (std::size_t i = 0; i < kLeechDim; ++i)
      if (c >> i & 1) v[i] = 2;
    g.push_back(v);
  }
  for (std::size_t i = 1; i < kLeechDim; ++i) {
    std::vector<long long> v(kLeechDim, 0);
    v[0] = 4;
    v[i] = 4;
    g.push_back(v);
    v[i] = -4;
    g.push_back(v);
  }
  std::vector<long long> odd(kLeechDim, 1);
  odd[0] = -3;
  g.push_back(odd);
  return g;
}

/** Row-style Hermite normal form of an integer generating set; returns the nonzero rows. */
inline std::vector<std::vector<long long>> hermite_rows(std::vector<std::vector<long long>> rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    // Euclid on column c among rows r..end
    while (true) {
      std::size_t piv = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (piv == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[piv][c]))) piv = i;
      if (piv == rows.size()) break;
      std::swap(rows[r], rows[piv]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const long long q = rows[i][c] / rows[r][c];
        for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      long long q = rows[i][c] / rows[r][c];
      if (rows[i][c] - q * rows[r][c] < 0) --q;
      for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

/** The Leech lattice in the MOG frame: integral basis in Hermite form, inner product (x.y)/8. */
inline Lattice build_leech(const std::vector<Codeword>& golay_gens = {kGolayGenerators.begin(), kGolayGenerators.end()}) {
  build_golay(golay_gens);
  const auto rows = hermite_rows(leech_generators(golay_gens));
  if (rows.size() != kLeechDim) throw InternalError("Leech generators do not span rank 24");
  return Lattice::with_denominator("leech", QMatrix::from_ints(rows), kLeechDenominator);
}

/** The minimal vectors from the code construction as a MinSet of the given Leech lattice. */
inline MinSet leech_min_vectors(const Lattice& leech, const GolayCode& code = build_golay()) {
  if (leech.dim() != kLeechDim) throw DimensionError("Leech lattice must have dimension 24");
  // integer inverse: coords = x * B^{-1}; B^{-1} = Binv / d with integral Binv
  const QMatrix binv = *inverse(leech.basis());
  Integer den = 1;
  for (std::size_t i = 0; i < kLeechDim; ++i)
    for (std::size_t j = 0; j < kLeechDim; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), binv(i, j).denominator().get_mpz_t());
  if (!den.fits_slong_p()) throw InternalError("basis inverse denominator too large");
  const long long d = den.get_si();
  std::vector<long long> bi(kLeechDim * kLeechDim);
  for (std::size_t i = 0; i < kLeechDim; ++i)
    for (std::size_t j = 0; j < kLeechDim; ++j) {
      const Rational s = binv(i, j) * Rational(d);
      bi[i * kLeechDim + j] = s.numerator().get_si();
    }
  MinSet m;
  m.min_norm_sq = Rational(4);
  const auto pts = leech_min_points(code);
  m.vectors.reserve(pts.size());
  for (const auto& p : pts) {
    LatticeVector v;
    v.coords.assign(kLeechDim, 0);
    for (std::size_t j = 0; j < kLeechDim; ++j) {
      long long s = 0;
      for (std::size_t i = 0; i < kLeechDim; ++i) s += p[i] * bi[i * kLeechDim + j];
      if (s % d != 0) throw InternalError("constructed vector is not in the lattice");
      v.coords[j] = s / d;
    }
    v.ambient.reserve(kLeechDim);
    for (int x : p) v.ambient.emplace_back(x);
    m.vectors.push_back(std::move(v));
  }
  std::sort(m.vectors.begin(), m.vectors.end());
  return m;
}

/** A table representative: 24 integers in reading order, times alpha. */
struct MOGVector {
  std::array<long long, kLeechDim> entries{};
  Rational alpha{1};

  QVector ambient() const {
    QVector v;
    v.reserve(kLeechDim);
    for (long long e : entries) v.push_back(alpha * Rational(e));
    return v;
  }
  Rational norm_sq() const {
    long long s = 0;
    for (long long e : entries) s += e * e;
    return alpha * alpha * Rational(s, kLeechDenominator);
  }
};

struct TableRow {
  std::size_t index = 0;  // 1-based position in its table
  std::string name;
  Rational norm_sq;
  std::size_t n = 0;
  Integer stabilizer_order;
  MOGVector vector;
};

namespace detail {
inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

/** Parses `name | norm | N | g | alpha | 24 integers`; rejects a norm that disagrees with the vector. */
inline TableRow parse_table_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string part;
  while (std::getline(ss, part, '|')) f.push_back(detail::trim(part));
  if (f.size() != 6) throw ParseError("table row needs 6 '|'-separated fields, got " + std::to_string(f.size()));
  TableRow r;
  r.name = f[0];
  if (r.name.empty()) throw ParseError("empty name field");
  r.norm_sq = Rational::parse(f[1]);
  try {
    std::size_t pos = 0;
    if (f[2].empty() || f[2].find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(f[2]);
    const unsigned long long n = std::stoull(f[2], &pos);
    r.n = n;
  } catch (const std::exception&) {
    throw ParseError("bad N field '" + f[2] + "'");
  }
  if (r.stabilizer_order.set_str(f[3], 10) != 0 || r.stabilizer_order <= 0) throw ParseError("bad stabilizer order '" + f[3] + "'");
  r.vector.alpha = Rational::parse(f[4]);
  if (r.vector.alpha.sign() <= 0) throw ParseError("alpha must be positive");
  std::stringstream es(f[5]);
  std::size_t k = 0;
  std::string tok;
  while (es >> tok) {
    if (k == kLeechDim) throw ParseError("more than 24 entries");
    try {
      std::size_t pos = 0;
      r.vector.entries[k] = std::stoll(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("bad entry '" + tok + "'");
    }
    ++k;
  }
  if (k != kLeechDim) throw ParseError("expected 24 entries, got " + std::to_string(k));
  const Rational computed = r.vector.norm_sq();
  if (computed != r.norm_sq)
    throw TableConsistencyError("row '" + r.name + "': stated norm " + r.norm_sq.str() + " but vector has norm " + computed.str());
  return r;
}

/** Reads a table fixture; '#' lines and blank lines are skipped, rows are numbered from 1. */
inline std::vector<TableRow> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<TableRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      TableRow r = parse_table_row(t);
      r.index = rows.size() + 1;
      rows.push_back(std::move(r));
    } catch (const TableConsistencyError& e) {
      throw TableConsistencyError(path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace contact
