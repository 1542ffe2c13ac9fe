#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kbranch/kbranch.hpp"
#include "kbranch/testkit.hpp"

namespace kbranch::cli {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string instance;
  std::string format = "text";  // text | json
  std::string engine = "auto";  // brute | mincut | auto
  std::string output = "plain";  // plain | json

  bool decompose = false;                  // pack
  bool arborescence = false;               // mincost (default: branching)
  std::string x;                           // eval
  std::string function = "fb";             // table, argmin, oracle table
  std::string mode = "m";                  // check-exchange, argmin
  std::string table;                       // check-exchange, argmin
  std::string opening;                     // rootloc
  bool separable = false;                  // rootloc
  bool verify_mnat = false;                // rootloc
  std::string op = "enumerate";            // oracle: enumerate | packing | table
};

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Raised for anything the user got wrong; maps to exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kMaxTableCells = 1'000'000;

namespace detail {

inline std::ifstream open(const std::string& path) {
  if (path.empty()) throw InputError("missing input file");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

inline io::Instance load_instance(const RunConfig& c) {
  auto in = open(c.instance);
  if (c.format == "json") return io::read_instance_json(in);
  if (c.format == "text") return io::read_instance_text(in);
  throw InputError("unknown format '" + c.format + "'");
}

inline Engine engine_of(const std::string& name) {
  if (name == "auto") return Engine::kAuto;
  if (name == "brute") return Engine::kBruteForce;
  if (name == "mincut") return Engine::kMinCut;
  throw InputError("unknown engine '" + name + "'");
}

inline ExchangeMode mode_of(const std::string& name) {
  if (name == "m") return ExchangeMode::kM;
  if (name == "mnat") return ExchangeMode::kMNatural;
  throw InputError("unknown mode '" + name + "'");
}

inline std::vector<int> ids(const ArcSubset& f) {
  std::vector<int> out;
  for (ArcIndex a : f) out.push_back(a + 1);
  return out;
}

inline std::vector<int> ids(VertexSet x) {
  std::vector<int> out;
  for (Vertex v : x.members()) out.push_back(v + 1);
  return out;
}

inline std::vector<int> values(const RootVector& x) { return {x.values().begin(), x.values().end()}; }

inline std::string point_string(const std::vector<int>& x) { return RootVector(x).to_string(); }

inline json value_json(const Value& v) { return v ? json(*v) : json("inf"); }

inline void check_table_size(int n, int k) {
  std::int64_t cells = 1;
  for (int i = 0; i < n; ++i)
    if ((cells *= k + 1) > kMaxTableCells)
      throw InputError("table would exceed " + std::to_string(kMaxTableCells) + " points");
}

/// Accepts "1 0 2", "1,0,2" or "(1 0 2)".
inline RootVector parse_vector(const std::string& text, int n) {
  std::string cleaned;
  for (char ch : text) cleaned += (ch == ',' || ch == '(' || ch == ')') ? ' ' : ch;
  std::istringstream ss(cleaned);
  std::vector<int> out;
  for (std::string tok; ss >> tok;) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw InputError("bad vector entry '" + tok + "'");
    out.push_back(v);
  }
  if (static_cast<int>(out.size()) != n)
    throw InputError("vector has " + std::to_string(out.size()) + " entries, expected " + std::to_string(n));
  return RootVector(std::move(out));
}

inline std::string table_text(const DiscreteFunctionTable& t) { return io::write_table(t); }

inline json table_json(const DiscreteFunctionTable& t) {
  json entries = json::array();
  for (const auto& [x, v] : t.entries()) entries.push_back({{"x", x}, {"value", v}});
  return entries;
}

inline json verdict_json(const ExchangeVerdict& v) {
  json out{{"passed", v.passed}};
  if (v.witness) out["witness"] = {{"x", v.witness->x}, {"y", v.witness->y}, {"u", v.witness->u + 1}};
  return out;
}

inline std::string verdict_text(const ExchangeVerdict& v) {
  if (v.passed) return "PASS";
  return "FAIL x=" + point_string(v.witness->x) + " y=" + point_string(v.witness->y) +
         " u=" + std::to_string(v.witness->u + 1);
}

struct Output {
  bool as_json;
  std::ostringstream text;
  json doc = json::object();

  RunResult finish(int code) {
    RunResult r;
    r.exit_code = code;
    r.out = as_json ? doc.dump() + "\n" : text.str();
    return r;
  }
};

inline RunResult feasible(const RunConfig& c, Output& o) {
  const PackingInstance inst = load_instance(c).packing();
  const DeficiencyReport r = packing_deficiency(inst, engine_of(c.engine));
  o.doc = {{"feasible", r.feasible}, {"min", r.min_value}, {"X", ids(r.minimal_minimizer)}};
  if (r.feasible) o.text << "FEASIBLE\n";
  else o.text << "INFEASIBLE min=" << r.min_value << " X=" << r.minimal_minimizer.to_string() << "\n";
  return o.finish(r.feasible ? 0 : 1);
}

inline RunResult pack(const RunConfig& c, Output& o) {
  const PackingInstance inst = load_instance(c).packing();
  PackingCertificate cert;
  try {
    cert = pack_k_branchings(inst, {engine_of(c.engine), {}});
  } catch (const InfeasibleInstance& e) {
    const auto& r = e.report();
    o.doc = {{"feasible", false}, {"min", r.min_value}, {"X", ids(r.minimal_minimizer)}};
    o.text << "INFEASIBLE min=" << r.min_value << " X=" << r.minimal_minimizer.to_string() << "\n";
    return o.finish(1);
  }
  o.doc = {{"feasible", true}, {"F", json::array()}};
  for (std::size_t i = 0; i < cert.arcs.size(); ++i) {
    o.doc["F"].push_back(ids(cert.arcs[i]));
    o.text << "F_" << i + 1 << "=" << cert.arcs[i].to_string() << "\n";
    if (!c.decompose) continue;
    json parts = json::array();
    o.text << " ";
    for (std::size_t j = 0; j < cert.decompositions[i].size(); ++j) {
      parts.push_back(ids(cert.decompositions[i][j]));
      o.text << " B_" << j + 1 << "=" << cert.decompositions[i][j].to_string();
    }
    o.text << "\n";
    o.doc["branchings"].push_back(parts);
  }
  return o.finish(0);
}

inline void report_mincost(Output& o, const MincostResult& r) {
  o.doc = {{"feasible", true}, {"cost", r.cost}, {"x", values(r.roots)}, {"F", ids(r.arcs)}};
  o.text << "cost=" << r.cost << " x=" << r.roots.to_string() << " F=" << r.arcs.to_string() << "\n";
}

inline RunResult mincost(const RunConfig& c, Output& o) {
  const io::Instance inst = load_instance(c);
  if (!c.arborescence) {
    report_mincost(o, mincost_k_branching(inst.digraph, inst.k));
    return o.finish(0);
  }
  auto r = mincost_k_arborescence(inst.digraph, inst.k);
  if (!r) {
    o.doc = {{"feasible", false}};
    o.text << "INFEASIBLE\n";
    return o.finish(1);
  }
  report_mincost(o, *r);
  return o.finish(0);
}

inline RunResult eval(const RunConfig& c, Output& o) {
  const io::Instance inst = load_instance(c);
  const RootVector x = parse_vector(c.x, inst.digraph.num_vertices());
  const Value fb = eval_fB(inst.digraph, inst.k, x), fa = eval_fA(inst.digraph, inst.k, x);
  o.doc = {{"x", values(x)}, {"fB", value_json(fb)}, {"fA", value_json(fa)}};
  o.text << "fB=" << value_to_string(fb) << " fA=" << value_to_string(fa) << "\n";
  return o.finish(0);
}

inline DiscreteFunctionTable instance_table(const io::Instance& inst, const std::string& function) {
  if (function != "fb" && function != "fa") throw InputError("unknown function '" + function + "'");
  check_table_size(inst.digraph.num_vertices(), inst.k);
  return function == "fb" ? fB_table(inst.digraph, inst.k) : fA_table(inst.digraph, inst.k);
}

inline RunResult table(const RunConfig& c, Output& o) {
  const DiscreteFunctionTable t = instance_table(load_instance(c), c.function);
  o.doc = {{"function", c.function}, {"entries", table_json(t)}};
  o.text << table_text(t);
  return o.finish(0);
}

inline DiscreteFunctionTable load_table(const std::string& path) {
  auto in = open(path);
  return io::read_table(in);
}

inline RunResult check_exchange(const RunConfig& c, Output& o) {
  const ExchangeMode mode = mode_of(c.mode);
  const ExchangeVerdict v = check_exchange_axiom(load_table(c.table), mode);
  o.doc = verdict_json(v);
  o.doc["mode"] = c.mode;
  o.text << verdict_text(v) << "\n";
  return o.finish(v.passed ? 0 : 1);
}

inline RunResult argmin(const RunConfig& c, Output& o) {
  const ExchangeMode mode = mode_of(c.mode);
  const DiscreteFunctionTable t = c.table.empty() ? instance_table(load_instance(c), c.function) : load_table(c.table);
  if (t.empty()) {
    o.doc = {{"feasible", false}};
    o.text << "EMPTY DOMAIN\n";
    return o.finish(1);
  }
  const ExchangeVerdict v = verify_argmin_base_polyhedron(t, mode);
  o.doc = {{"min", *t.min_value()}, {"argmin", t.argmin()}, {"verdict", verdict_json(v)}, {"mode", c.mode}};
  o.text << "min=" << *t.min_value() << "\n";
  for (const auto& x : t.argmin()) o.text << point_string(x) << "\n";
  o.text << verdict_text(v) << "\n";
  return o.finish(v.passed ? 0 : 1);
}

inline RunResult rootloc(const RunConfig& c, Output& o) {
  const io::Instance inst = load_instance(c);
  const int n = inst.digraph.num_vertices();
  auto in = open(c.opening);
  const OpeningCost opening =
      c.separable ? io::read_separable_opening(in, n) : OpeningCost::table(io::read_table(in));
  if (!opening.is_separable() && opening.as_table().dimension() != n)
    throw InputError("opening table dimension differs from vertex count");

  RootLocationResult r;
  try {
    r = c.separable && inst.k == 1 ? solve_separable_k1(inst.digraph, opening)
                                   : solve_root_location(inst.digraph, inst.k, opening);
  } catch (const std::domain_error& e) {
    o.doc = {{"feasible", false}};
    o.text << "INFEASIBLE " << e.what() << "\n";
    return o.finish(1);
  }
  o.doc = {{"x", values(r.roots)}, {"F", ids(r.arcs)},        {"total", r.total},
           {"opening", r.opening}, {"connection", r.connection}};
  o.text << "x=" << r.roots.to_string() << " F=" << r.arcs.to_string() << " total=" << r.total << "\n";
  if (c.verify_mnat) {
    const DiscreteFunctionTable t = opening.is_separable() ? opening.tabulate(n, inst.k) : opening.as_table();
    const ExchangeVerdict v = check_exchange_axiom(t, ExchangeMode::kMNatural);
    o.doc["mnat"] = verdict_json(v);
    o.text << "mnat=" << verdict_text(v) << "\n";
  }
  return o.finish(0);
}

inline RunResult oracle(const RunConfig& c, Output& o) {
  const io::Instance inst = load_instance(c);
  if (c.op == "enumerate") {
    json list = json::array();
    for (const ArcSubset& f : testkit::enumerate_k_branchings(inst.digraph, inst.k)) {
      list.push_back(ids(f));
      o.text << f.to_string() << "\n";
    }
    o.doc = {{"k_branchings", list}};
    return o.finish(0);
  }
  if (c.op == "packing") {
    const bool exists = testkit::brute_packing_exists(inst.packing());
    o.doc = {{"exists", exists}};
    o.text << (exists ? "EXISTS" : "NONE") << "\n";
    return o.finish(exists ? 0 : 1);
  }
  if (c.op == "table") {
    if (c.function != "fb" && c.function != "fa") throw InputError("unknown function '" + c.function + "'");
    const auto kind = c.function == "fb" ? testkit::FunctionKind::kBranching : testkit::FunctionKind::kArborescence;
    const DiscreteFunctionTable t = testkit::brute_function_table(inst.digraph, inst.k, kind);
    o.doc = {{"function", c.function}, {"entries", table_json(t)}};
    o.text << table_text(t);
    return o.finish(0);
  }
  throw InputError("unknown oracle operation '" + c.op + "'");
}

}  // namespace detail

/// Exit status: 0 success/feasible/pass, 1 infeasible/fail, 2 input error.
inline RunResult run(const RunConfig& c) {
  detail::Output o{c.output == "json", {}, {}};
  try {
    if (c.output != "plain" && c.output != "json") throw InputError("unknown output mode '" + c.output + "'");
    if (c.command == "feasible") return detail::feasible(c, o);
    if (c.command == "pack") return detail::pack(c, o);
    if (c.command == "mincost") return detail::mincost(c, o);
    if (c.command == "eval") return detail::eval(c, o);
    if (c.command == "table") return detail::table(c, o);
    if (c.command == "check-exchange") return detail::check_exchange(c, o);
    if (c.command == "argmin") return detail::argmin(c, o);
    if (c.command == "rootloc") return detail::rootloc(c, o);
    if (c.command == "oracle") return detail::oracle(c, o);
    throw InputError("unknown command '" + c.command + "'");
  } catch (const testkit::BudgetExceeded& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  } catch (const InputError& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  } catch (const io::ParseError& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::length_error& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  }
}

/// Parses argv into a RunConfig and runs it. Flag errors exit with 2.
inline RunResult run_args(int argc, const char* const* argv) {
  CLI::App app{"k-branching packing, minimum-cost k-branchings and root location"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub, bool needs_instance = true) {
    auto* opt = sub->add_option("instance", c.instance, "instance file");
    if (needs_instance) opt->required();
    sub->add_option("--format", c.format, "instance format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--engine", c.engine, "deficiency engine")->check(CLI::IsMember({"brute", "mincut", "auto"}));
    sub->add_option("--output", c.output, "output mode")->check(CLI::IsMember({"plain", "json"}));
  };

  auto* feasible = app.add_subcommand("feasible", "check the packing cut condition");
  common(feasible);
  auto* pack = app.add_subcommand("pack", "construct arc-disjoint k-branchings");
  common(pack);
  pack->add_flag("--decompose", c.decompose, "also split each F_i into k branchings");
  auto* mincost = app.add_subcommand("mincost", "minimum-cost k-branching or k-arborescence");
  common(mincost);
  auto* branching_flag = mincost->add_flag("--branching", "k-branching (default)");
  mincost->add_flag("--arborescence", c.arborescence, "k-arborescence")->excludes(branching_flag);
  auto* eval = app.add_subcommand("eval", "evaluate f_B and f_A at a root vector");
  common(eval);
  eval->add_option("--x", c.x, "vector, e.g. \"1 0 2\"")->required();
  auto* table = app.add_subcommand("table", "dump the f_B or f_A table");
  common(table);
  table->add_option("--function", c.function)->check(CLI::IsMember({"fb", "fa"}));
  auto* exchange = app.add_subcommand("check-exchange", "check the exchange axiom on a table file");
  exchange->add_option("--mode", c.mode)->required()->check(CLI::IsMember({"m", "mnat"}));
  exchange->add_option("--table", c.table)->required();
  exchange->add_option("--output", c.output)->check(CLI::IsMember({"plain", "json"}));
  auto* argmin = app.add_subcommand("argmin", "minimizers of a table and the base-polyhedron check");
  common(argmin, false);
  argmin->add_flag("--verify-base", "check argmin as an M-convex set (always on)");
  argmin->add_option("--mode", c.mode)->check(CLI::IsMember({"m", "mnat"}));
  argmin->add_option("--table", c.table, "table file instead of an instance");
  argmin->add_option("--function", c.function)->check(CLI::IsMember({"fb", "fa"}));
  auto* rootloc = app.add_subcommand("rootloc", "minimum-cost root location");
  common(rootloc);
  rootloc->add_option("--opening", c.opening, "opening cost file")->required();
  rootloc->add_flag("--separable", c.separable, "opening file lists 'v f(0) ... f(k)'");
  rootloc->add_flag("--verify-mnat", c.verify_mnat, "report whether the opening cost is M-natural-convex");
  auto* oracle = app.add_subcommand("oracle", "brute-force oracles");
  common(oracle);
  oracle->add_option("--op", c.op)->check(CLI::IsMember({"enumerate", "packing", "table"}));
  oracle->add_option("--function", c.function)->check(CLI::IsMember({"fb", "fa"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    return {0, app.help(), ""};
  } catch (const CLI::ParseError& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.command == "argmin" && c.table.empty() && c.instance.empty())
    return {2, "", "error: argmin needs an instance or --table\n"};
  return run(c);
}

}  // namespace kbranch::cli
