#pragma once

// Subcommands of the `contact` tool. run() returns the process exit code:
// 0 success, 2 input error, 3 configuration mismatch, 4 undecided
// equivalence, 5 verification failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contact/classify.hpp"
#include "contact/engine.hpp"
#include "contact/io.hpp"
#include "contact/named_lattices.hpp"
#include "contact/verify.hpp"

#ifndef CONTACT_DATA_DIR
#define CONTACT_DATA_DIR "data"
#endif

namespace contact::cli {

enum ExitCode { kOk = 0, kInputError = 2, kConfigMismatch = 3, kUndecided = 4, kVerifyFailed = 5, kInternal = 1 };

inline int exit_code_for(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const TableConsistencyError&) {
    return kVerifyFailed;
  } catch (const ParseError&) {
    return kInputError;
  } catch (const DimensionError&) {
    return kInputError;
  } catch (const ShapeError&) {
    return kInputError;
  } catch (const ActionMismatch&) {
    return kConfigMismatch;
  } catch (const NotASymmetry&) {
    return kConfigMismatch;
  } catch (const ConfigError&) {
    return kConfigMismatch;
  } catch (const RuleDomainError&) {
    return kConfigMismatch;
  } catch (const ResourceLimit&) {
    return kConfigMismatch;
  } catch (const BadSeed&) {
    return kConfigMismatch;
  } catch (const UndecidedError&) {
    return kUndecided;
  } catch (...) {
    return kInternal;
  }
}

struct Options {
  std::string lattice;
  std::string group;
  std::string seed_row;
  std::string vector;
  std::string out;
  std::string table1 = std::string(CONTACT_DATA_DIR) + "/table1.txt";
  std::string table2 = std::string(CONTACT_DATA_DIR) + "/table2.txt";
  std::string errata = std::string(CONTACT_DATA_DIR) + "/errata.txt";
  std::size_t workers = 1;
  std::uint64_t budget = 10'000'000;
  std::uint64_t seed = 1;
  std::size_t sample = 0;
  bool extended = false;
  bool stabilizers = false;
  bool certify = false;
};

inline std::string default_group_path() { return std::string(CONTACT_DATA_DIR) + "/co0.txt"; }

/** "table2:1" -> that fixture row. */
inline TableRow load_seed_row(const Options& o) {
  const auto colon = o.seed_row.find(':');
  if (colon == std::string::npos) throw ParseError("seed row must look like table1:12 or table2:1");
  const std::string t = o.seed_row.substr(0, colon);
  if (t != "table1" && t != "table2") throw ParseError("unknown table '" + t + "'");
  const std::size_t k = detail::parse_count(o.seed_row.substr(colon + 1));
  const auto rows = read_table(t == "table1" ? o.table1 : o.table2);
  if (k == 0 || k > rows.size()) throw ParseError("row " + std::to_string(k) + " is not in " + t);
  return rows[k - 1];
}

inline QVector parse_vector(const std::string& s) {
  QVector v;
  std::istringstream in(s);
  for (std::string t; in >> t;) v.push_back(Rational::parse(t));
  return v;
}

/** Writes `text` to --out (plus a manifest beside it) or to the stream. */
inline void emit(const Options& o, RunManifest& m, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path p(o.out);
  write_text(p, text);
  m.add_result(p.filename().string(), text);
  m.finished = utc_timestamp();
  write_text(p.string() + ".manifest.json", m.to_json());
}

inline MatrixGroupGens load_group(const Options& o, const Lattice& l, RunManifest& m) {
  if (o.group.empty() && l.name() != "leech") {
    m.inputs["group"] = "named:" + l.name();
    return named_automorphism_group(parse_lattice_name(l.name()));
  }
  const std::string path = o.group.empty() ? default_group_path() : o.group;
  m.add_input("group", read_file(path));
  auto gens = read_group_file(path);
  check_lattice_automorphisms(l, gens);
  return gens;
}

inline MinSet min_vectors_for(const Lattice& l) {
  if (l.name() == "leech") return leech_min_vectors(l);
  return shortest_vectors(l);
}

inline int cmd_svp(const Options& o, RunManifest& m, std::ostream& out) {
  const Lattice l = load_lattice(o.lattice);
  m.add_input("lattice", format_lattice(l));
  const MinSet ms = sorted_min_set(shortest_vectors(l));
  emit(o, m, format_min_set(ms, l.dim()), out);
  return kOk;
}

inline int cmd_contact(const Options& o, RunManifest& m, std::ostream& out) {
  const Lattice l = load_lattice(o.lattice);
  m.add_input("lattice", format_lattice(l));
  emit(o, m, format_hpolytope(contact_polar(l, min_vectors_for(l))), out);
  return kOk;
}

inline int cmd_group_order(const Options& o, RunManifest& m, std::ostream& out) {
  const Lattice l = load_lattice(o.lattice);
  m.add_input("lattice", format_lattice(l));
  const auto gens = load_group(o, l, m);
  const MinSet ms = min_vectors_for(l);
  const PermAction a = action_on_min(gens, ms, l);
  const PermGroup g = make_group(a, std::nullopt, o.seed);
  std::ostringstream s;
  s << "degree " << a.degree() << "\norder " << g.order().get_str() << "\ncertificate " << to_string(g.certificate()) << "\nbasic-orbits";
  for (std::size_t i = 0; i < g.base_length(); ++i) s << " " << g.basic_orbit(i).size();
  s << "\n";
  emit(o, m, s.str(), out);
  return kOk;
}

inline int cmd_delone(const Options& o, RunManifest& m, std::ostream& out) {
  const Lattice l = load_lattice(o.lattice.empty() ? "leech" : o.lattice);
  require_leech(l);
  QVector v;
  if (!o.seed_row.empty()) v = load_seed_row(o).vector.ambient();
  else v = parse_vector(o.vector);
  if (v.size() != l.dim()) throw DimensionError("vector of length " + std::to_string(v.size()));
  m.inputs["vector"] = to_string(v);
  const DeloneCell cell = delone_diagram(l, v);
  const auto comps = classify_diagram(cell.diagram);
  std::ostringstream s;
  s << "dist_sq " << cell.dist_sq.str() << "\nnorm_sq " << l.norm_sq(v).str() << "\nvertices " << cell.vertices.size() << "\ndiagram "
    << diagram_name(comps) << "\n";
  for (const auto& c : comps) {
    s << "component " << c.name << " " << (c.affine ? "affine" : "spherical") << " nodes";
    for (auto i : c.nodes) s << " " << i;
    s << "\n";
  }
  emit(o, m, s.str(), out);
  return kOk;
}

inline int cmd_verify_tables(const Options& o, RunManifest& m, std::ostream& out) {
  VerifyOptions vo;
  vo.sample = o.sample;
  vo.stabilizers = o.stabilizers;
  vo.search.budget = o.budget;
  vo.search.seed = o.seed;
  vo.errata = parse_errata(read_file(o.errata));
  std::vector<std::vector<TableRow>> tables;
  for (const auto& path : {o.table1, o.table2}) {
    m.add_input(std::filesystem::path(path).filename().string(), read_file(path));
    tables.push_back(read_table(path));
  }
  LeechContext ctx;
  std::unique_ptr<LeechGroup> group;
  if (vo.stabilizers) {
    Options go = o;
    go.group = o.group.empty() ? default_group_path() : o.group;
    group = std::make_unique<LeechGroup>(ctx, load_group(go, ctx.lattice, m));
  }
  std::ostringstream s;
  std::vector<std::string> failed;
  for (int t = 0; t < 2; ++t)
    for (auto k : sample_rows(tables[t].size(), vo.sample)) {
      const RowVerdict v = verify_row(ctx, t + 1, tables[t][k], vo, group.get());
      s << format_verdict(v) << "\n";
      if (!v.ok()) failed.push_back("table" + std::to_string(t + 1) + ":" + std::to_string(v.row));
    }
  s << (failed.empty() ? "all rows verified" : "failed rows:");
  for (const auto& f : failed) s << " " << f;
  s << "\n";
  emit(o, m, s.str(), out);
  return failed.empty() ? kOk : kVerifyFailed;
}

inline int cmd_classify(const Options& o, RunManifest& m, std::ostream& out) {
  const Lattice l = load_lattice(o.lattice);
  const bool leech = l.name() == "leech";
  if (leech && !o.extended) throw ConfigError("the full Leech classification is a long run; pass --extended");
  m.add_input("lattice", format_lattice(l));
  const auto gens = load_group(o, l, m);
  const MinSet ms = min_vectors_for(l);
  const HPolytope h = contact_polar(l, ms);
  const PermAction a = action_on_min(gens, ms, l);
  const PermGroup g = make_group(a, leech ? std::optional<Integer>(co0_order()) : std::nullopt, o.seed);

  std::vector<QVector> seeds;
  if (!o.seed_row.empty()) seeds.push_back(load_seed_row(o).vector.ambient());
  else if (leech) seeds.push_back(read_table(o.table2).at(0).vector.ambient());

  RecursionPolicy pol;
  pol.workers = o.workers;
  pol.budget = o.budget;
  pol.seed = o.seed;
  const std::filesystem::path dir(o.out.empty() ? "classify-out" : o.out);
  if (o.extended) pol.checkpoint = (dir / "checkpoint.txt").string();
  pol.log = [&](const std::string& line) { std::cerr << line << "\n"; };
  m.policy = {{"workers", std::to_string(pol.workers)},     {"budget", std::to_string(pol.budget)},
              {"direct_threshold", std::to_string(pol.direct_threshold)}, {"direct_dim", std::to_string(pol.direct_dim)},
              {"max_depth", std::to_string(pol.max_depth)}, {"escalations", std::to_string(pol.escalations)},
              {"seed_row", o.seed_row}};
  if (o.extended) std::filesystem::create_directories(dir);

  EngineStats st;
  const auto records = enumerate_vertex_orbits(h, a, g, seeds, pol, &st);
  const auto [shared, additional] = split_shared_additional(records, l);

  std::ostringstream report;
  report << "lattice " << l.name() << "\ngroup_order " << g.order().get_str() << "\norbits " << records.size() << "\nshared " << shared.size()
         << "\nadditional " << additional.size() << "\nvertices " << total_object_count(records, g.order()).get_str() << "\n";
  report << format_orbit_report(records);
  std::string rows;
  if (leech) {
    const LatticeEnumerator en(l);
    for (const auto& r : records) rows += format_table_row(classify_orbit(r, en, ms)) + "\n";
  }
  write_text(dir / "report.txt", report.str());
  m.add_result("report.txt", report.str());
  if (leech) {
    write_text(dir / "rows.txt", rows);
    m.add_result("rows.txt", rows);
  }
  m.finished = utc_timestamp();
  write_text(dir / "manifest.json", m.to_json());
  out << report.str().substr(0, report.str().find('#'));
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Contact polytopes of lattices: vertex orbits and their classification"};
  app.require_subcommand(1);
  Options o;
  auto lattice_opt = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--lattice", o.lattice, "named lattice (an 2, d4, e8, leech) or lattice file");
    if (required) opt->required();
  };
  auto* svp = app.add_subcommand("svp", "minimal vectors of a lattice");
  lattice_opt(svp, true);
  auto* contact = app.add_subcommand("contact", "inequalities of the scaled polar of the contact polytope");
  lattice_opt(contact, true);
  auto* order = app.add_subcommand("group-order", "order of the group acting on the minimal vectors");
  lattice_opt(order, true);
  order->add_option("--group", o.group, "group file (default: bundled Co0 for leech)");
  auto* delone = app.add_subcommand("delone", "Delone cell and Coxeter-Dynkin diagram around a point");
  lattice_opt(delone, false);
  auto* dv = delone->add_option("--vector", o.vector, "ambient coordinates, space separated rationals");
  auto* dr = delone->add_option("--seed-row", o.seed_row, "table1:k or table2:k");
  dv->excludes(dr);
  auto* verify = app.add_subcommand("verify-tables", "check every fixture row against computed data");
  verify->add_option("--table1", o.table1);
  verify->add_option("--table2", o.table2);
  verify->add_option("--errata", o.errata);
  verify->add_option("--sample", o.sample, "check this many evenly spaced rows per table (0 = all)");
  verify->add_flag("--stabilizers", o.stabilizers, "also compute stabilizer orders in Co0");
  verify->add_option("--group", o.group);
  verify->add_option("--budget", o.budget, "backtrack nodes per stabilizer search");
  auto* classify = app.add_subcommand("classify", "vertex orbits of the contact polar and their labels");
  lattice_opt(classify, true);
  classify->add_option("--group", o.group, "group file (default: the named lattice's automorphism group)");
  classify->add_option("--seed-row", o.seed_row, "start from this fixture vertex (table1:k or table2:k)");
  classify->add_option("--table2", o.table2);
  classify->add_option("--workers", o.workers)->check(CLI::PositiveNumber);
  classify->add_option("--budget", o.budget, "backtrack nodes per equivalence test");
  classify->add_flag("--extended", o.extended, "allow the full Leech run; writes a checkpoint");
  for (auto* c : {svp, contact, order, delone, verify, classify}) {
    c->add_option("--out", o.out, c == classify ? "output directory" : "output file (stdout when absent)");
    c->add_option("--seed", o.seed, "random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  RunManifest m;
  m.seed = o.seed;
  m.started = utc_timestamp();
  try {
    if (*svp) return m.command = "svp", cmd_svp(o, m, out);
    if (*contact) return m.command = "contact", cmd_contact(o, m, out);
    if (*order) return m.command = "group-order", cmd_group_order(o, m, out);
    if (*delone) return m.command = "delone", cmd_delone(o, m, out);
    if (*verify) return m.command = "verify-tables", cmd_verify_tables(o, m, out);
    if (*classify) return m.command = "classify", cmd_classify(o, m, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(std::current_exception());
  }
  return kInternal;
}

}  // namespace contact::cli
