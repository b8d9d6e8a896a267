#pragma once

// Row-by-row verification of the Leech vertex tables: norm, shared/additional
// status, incidence and Delone counts, names, and optionally stabilizer orders.

#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "contact/backtrack.hpp"
#include "contact/classify.hpp"
#include "contact/golay.hpp"
#include "contact/polytope.hpp"
#include "contact/symmetry.hpp"

namespace contact {

inline const Integer& co0_order() {
  static const Integer o("8315553613086720000");
  return o;
}

/** Leech lattice, its minimal vectors and contact polar, built once. */
struct LeechContext {
  Lattice lattice;
  MinSet min;
  HPolytope polar;
  LatticeEnumerator enumerator;

  LeechContext() : lattice(build_leech()), min(leech_min_vectors(lattice)), polar(contact_polar(lattice, min)), enumerator(lattice) {}
  LeechContext(const LeechContext&) = delete;
  LeechContext& operator=(const LeechContext&) = delete;
};

/** The Co0 action on the minimal vectors and its stabilizer chain. */
struct LeechGroup {
  PermAction action;
  PermGroup group;

  /** With `certify`, Schreier-Sims runs without the known order. */
  LeechGroup(const LeechContext& ctx, const MatrixGroupGens& gens, bool certify = false)
      : action(action_on_min(gens, ctx.min, ctx.lattice)),
        group(make_group(action, certify ? std::nullopt : std::optional<Integer>(co0_order()))) {}
};

struct Erratum {
  int table = 0;
  std::size_t row = 0;
  std::string computed;
  std::string reason;
};

/** "table1 | 161 | a1^22 a3 | reason" per line. */
inline std::vector<Erratum> parse_errata(const std::string& text) {
  std::vector<Erratum> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, '|');) f.push_back(detail::trim(part));
    if (f.size() != 4 || (f[0] != "table1" && f[0] != "table2")) throw ParseError("bad errata line '" + line + "'");
    Erratum e;
    e.table = f[0] == "table1" ? 1 : 2;
    e.row = detail::parse_count(f[1]);
    e.computed = f[2];
    e.reason = f[3];
    out.push_back(std::move(e));
  }
  return out;
}

struct VerifyOptions {
  bool names = true;
  bool stabilizers = false;
  std::size_t sample = 0;  // check every row when 0, else this many evenly spaced rows per table
  std::vector<Erratum> errata;
  SearchOptions search;
};

struct RowVerdict {
  int table = 0;
  std::size_t row = 0;
  std::string printed;
  ClassifiedRow computed;
  std::size_t tight_rank = 0;
  std::optional<Integer> stabilizer;
  std::vector<std::string> failures;
  std::string note;  // erratum reason when one applies

  bool ok() const { return failures.empty(); }
};

inline RowVerdict verify_row(const LeechContext& ctx, int table, const TableRow& row, const VerifyOptions& opt, const LeechGroup* group = nullptr) {
  RowVerdict v;
  v.table = table;
  v.row = row.index;
  v.printed = row.name;
  const QVector x = row.vector.ambient();
  const IncidenceSet inc = incidence_set(ctx.polar, x);
  v.tight_rank = inc.rank;
  std::vector<QVector> tight;
  for (auto i : inc.indices) tight.push_back(ctx.min.vectors[i].ambient);
  v.computed = classify_vertex(ctx.enumerator, x, tight);
  const ClassifiedRow& c = v.computed;
  auto fail = [&](const std::string& s) { v.failures.push_back(s); };
  if (c.norm_sq != row.norm_sq) fail("norm " + c.norm_sq.str());
  if (!inc.vertex) fail("tight rank " + std::to_string(inc.rank));
  if (table == 1) {
    if (!c.shared) fail("not shared: dist^2 " + c.dist_sq.str());
    if (c.delone_count != row.n) fail("Delone count " + std::to_string(c.delone_count));
    const bool affine = c.norm_sq == 2;
    if (c.shared && c.affine != affine) fail("affine flag disagrees with norm");
    for (const auto& comp : c.components)
      if (comp.affine != affine) fail("component " + comp.name + " has the wrong type");
    if (!affine && c.incidence != 24) fail("spherical row with " + std::to_string(c.incidence) + " tight facets");
  } else {
    if (c.shared) fail("shared: dist^2 equals norm");
    if (c.incidence != row.n) fail("tight count " + std::to_string(c.incidence));
  }
  if (opt.names && !same_name(c.name, row.name)) {
    auto e = std::find_if(opt.errata.begin(), opt.errata.end(), [&](const Erratum& e) { return e.table == table && e.row == row.index; });
    if (e != opt.errata.end() && same_name(c.name, e->computed)) v.note = e->reason;
    else fail("name " + c.name);
  }
  if (opt.stabilizers && group) {
    const auto r = set_stabilizer(group->group, *group->action.points, inc.indices, opt.search, group->action.witness);
    if (r.status == SearchStatus::kUndecided) fail("stabilizer search over budget");
    else {
      v.stabilizer = r.order;
      v.computed.stabilizer_order = r.order;
      if (r.order != row.stabilizer_order) fail("stabilizer order " + r.order.get_str());
    }
  }
  return v;
}

inline std::vector<std::size_t> sample_rows(std::size_t total, std::size_t k) {
  std::vector<std::size_t> out;
  if (k == 0 || k >= total) {
    for (std::size_t i = 0; i < total; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t j = 0; j < k; ++j) out.push_back(j * total / k);
  return out;
}

inline std::string format_verdict(const RowVerdict& v) {
  std::ostringstream out;
  out << "table" << v.table << " row " << v.row << " " << (v.ok() ? (v.note.empty() ? "PASS" : "ERRATUM") : "FAIL") << " [" << v.printed << "] computed ["
      << v.computed.name << "] norm " << v.computed.norm_sq.str() << " tight " << v.computed.incidence << " delone " << v.computed.delone_count;
  if (v.stabilizer) out << " stab " << v.stabilizer->get_str();
  for (const auto& f : v.failures) out << " ; " << f;
  if (!v.note.empty()) out << " ; " << v.note;
  return out.str();
}

}  // namespace contact
