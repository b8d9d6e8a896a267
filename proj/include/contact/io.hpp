#pragma once

// Line-oriented text formats for lattices, minimal vectors and classified
// rows, plus the JSON run manifest written next to every result file.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "contact/classify.hpp"
#include "contact/error.hpp"
#include "contact/golay.hpp"
#include "contact/lattice.hpp"
#include "contact/named_lattices.hpp"
#include "contact/polytope.hpp"
#include "contact/symmetry.hpp"
#include "json.hpp"

namespace contact {

// ---------------------------------------------------------------------------
// Lattice file: "L n [name]" (the name runs to the end of the line), n basis rows, then n rows of the ambient form.

inline std::string format_lattice(const Lattice& l) {
  std::ostringstream out;
  const std::size_t n = l.dim();
  out << "L " << n << " " << l.name() << "\n";
  auto block = [&](const QMatrix& m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << m(i, j).str();
      out << "\n";
    }
  };
  block(l.basis());
  out << "\n";
  block(l.form());
  return out.str();
}

inline Lattice parse_lattice(const std::string& text) {
  std::istringstream in(text);
  std::string line, header;
  while (header.empty() && std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (!detail::trim(line).empty()) header = detail::trim(line);
  }
  std::istringstream hs(header);
  std::string tag, count, name, word;
  hs >> tag >> count;
  if (tag != "L" || count.empty()) throw ParseError("lattice file must start with 'L n'");
  const std::size_t n = detail::parse_count(count);
  if (n == 0) throw ParseError("lattice dimension must be positive");
  while (hs >> word) name += (name.empty() ? "" : " ") + word;
  if (name.empty()) name = "custom";
  std::ostringstream body;
  body << in.rdbuf();
  const auto t = detail::tokens_of(body.str());
  if (t.size() != 2 * n * n) throw ParseError("lattice file has " + std::to_string(t.size()) + " entries, expected " + std::to_string(2 * n * n));
  std::size_t p = 0;
  QMatrix b(n, n), q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = Rational::parse(t[p++]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = Rational::parse(t[p++]);
  return Lattice(name, std::move(b), std::move(q));
}

/** A named lattice ("an 2", "e8", "leech") or a lattice file path. */
inline Lattice load_lattice(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) return parse_lattice(read_file(spec));
  try {
    return build_named_lattice(spec);
  } catch (const ConfigError&) {
    throw ParseError("'" + spec + "' is neither a lattice file nor a known lattice name");
  }
}

// ---------------------------------------------------------------------------
// Minimal vectors: "M n k lambda^2", then k rows of ambient coordinates.

inline std::string format_min_set(const MinSet& m, std::size_t dim) {
  std::ostringstream out;
  out << "M " << dim << " " << m.size() << " " << m.min_norm_sq.str() << "\n";
  for (const auto& v : m.vectors) {
    for (std::size_t j = 0; j < v.ambient.size(); ++j) out << (j ? " " : "") << v.ambient[j].str();
    out << "\n";
  }
  return out.str();
}

/** Ambient vectors sorted lexicographically, as written by `svp`. */
inline MinSet sorted_min_set(MinSet m) {
  std::sort(m.vectors.begin(), m.vectors.end(), [](const LatticeVector& a, const LatticeVector& b) { return lex_less(a.ambient, b.ambient); });
  return m;
}

// ---------------------------------------------------------------------------
// Classified rows in the table fixture format.

/** alpha and integer entries with v = alpha * entries and gcd(entries) = 1. */
inline std::pair<Rational, std::vector<Integer>> primitive_scaling(const QVector& v) {
  const QVector p = primitive(v);
  Rational alpha(1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!p[i].is_zero()) {
      alpha = v[i] / p[i];
      break;
    }
  std::vector<Integer> e;
  for (const auto& x : p) e.push_back(x.numerator());
  return {alpha, e};
}

/** `name | norm | N | g | alpha | entries`; N is the Delone count for shared rows, the tight count otherwise. */
inline std::string format_table_row(const ClassifiedRow& r) {
  std::ostringstream out;
  // entries are stored in the MOG frame, scaled so that coordinates are integers
  QVector mog = r.vertex;
  for (auto& x : mog) x = x * Rational(kLeechDenominator);
  auto [alpha, e] = primitive_scaling(mog);
  out << r.name << " | " << r.norm_sq.str() << " | " << (r.shared ? r.delone_count : r.incidence) << " | " << r.stabilizer_order.get_str()
      << " | " << (alpha / Rational(kLeechDenominator)).str() << " |";
  for (const auto& x : e) out << " " << x.get_str();
  return out.str();
}

// ---------------------------------------------------------------------------
// Run manifest

inline std::string hex64(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

/** command, input hashes, policy, seed, timestamps and result digests of one run. */
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> inputs;   // label -> fnv1a64 of the input bytes
  std::map<std::string, std::string> policy;
  std::uint64_t seed = 1;
  std::string started, finished;
  std::map<std::string, std::string> results;  // file name -> fnv1a64

  void add_input(const std::string& label, const std::string& bytes) { inputs[label] = hex64(fnv1a64(bytes)); }
  void add_result(const std::string& file, const std::string& bytes) { results[file] = hex64(fnv1a64(bytes)); }

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["policy"] = policy;
    j["seed"] = seed;
    j["started"] = started;
    j["finished"] = finished;
    j["results"] = results;
    return j.dump(2) + "\n";
  }

  static RunManifest from_json(const std::string& text) {
    RunManifest m;
    try {
      const auto j = nlohmann::json::parse(text);
      m.command = j.at("command").get<std::string>();
      m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
      m.policy = j.at("policy").get<std::map<std::string, std::string>>();
      m.seed = j.at("seed").get<std::uint64_t>();
      m.started = j.value("started", "");
      m.finished = j.value("finished", "");
      m.results = j.at("results").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("manifest: ") + e.what());
    }
    return m;
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

}  // namespace contact
