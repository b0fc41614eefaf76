#include "cplogic/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cplogic/analysis.hpp"
#include "cplogic/bayes.hpp"
#include "cplogic/errors.hpp"
#include "cplogic/ground.hpp"
#include "cplogic/intervene.hpp"
#include "cplogic/lpad.hpp"
#include "cplogic/parser.hpp"
#include "cplogic/printer.hpp"
#include "cplogic/process.hpp"
#include "cplogic/wfs.hpp"

namespace cplogic {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CpError(Errc::io_error, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw CpError(Errc::io_error, "cannot write " + path);
  outf << content;
}

BuildLimits limits_from_env() {
  BuildLimits limits;
  if (const char* cap = std::getenv("CPLOGIC_NODE_CAP")) limits.node_cap = std::strtoull(cap, nullptr, 10);
  return limits;
}

GroundCPTheory load_ground(const std::string& path) {
  CPTheory theory = parse_theory(slurp(path));
  return ground_theory(theory);
}

// Comma-separated exogenous atom names; everything else is false.
Bitset parse_context(const GroundCPTheory& g, const std::string& text) {
  Bitset ctx = g.empty_atom_set();
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (name.empty()) continue;
    AtomId id = g.atom_by_name(name);
    if (id < 0) throw CpError(Errc::undeclared_symbol, "unknown atom " + name);
    if (!g.exogenous_atoms().test(static_cast<std::size_t>(id)))
      throw CpError(Errc::undeclared_symbol, name + " is not exogenous");
    ctx.set(static_cast<std::size_t>(id));
  }
  return ctx;
}

struct SortedDist {
  std::vector<std::pair<Bitset, Rational>> rows;
};

SortedDist sort_distribution(const GroundCPTheory& g, const Distribution& dist) {
  SortedDist out;
  for (const auto& [interp, p] : dist.mass) out.rows.emplace_back(interp, p);
  std::sort(out.rows.begin(), out.rows.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return g.set_name(a.first) < g.set_name(b.first);
  });
  return out;
}

void print_distribution(std::ostream& out, const GroundCPTheory& g, const Distribution& dist,
                        int digits) {
  for (const auto& [interp, p] : sort_distribution(g, dist).rows)
    out << g.set_name(interp) << "\t" << rational_string(p) << "\t" << decimal_string(p, digits)
        << "\n";
}

enum class Semantics { tree, instances, both };

Semantics parse_semantics(const std::string& s) {
  if (s == "tree") return Semantics::tree;
  if (s == "instances") return Semantics::instances;
  if (s == "both") return Semantics::both;
  throw CpError(Errc::io_error, "unknown semantics mode " + s);
}

// Computes the distribution under the requested semantics; in `both` mode the
// two must agree exactly, anything else is reported as a bug.
Distribution semantics_distribution(const GroundCPTheory& g, const Bitset& ctx, Semantics mode,
                                    const BuildLimits& limits, std::ostream& err) {
  if (mode == Semantics::instances) return instance_semantics(g, ctx);
  auto tree = build_execution_model(g, ctx, Policy{}, ProcessMode::full, limits);
  if (!tree)
    throw CpError(Errc::invalid_theory, "no execution model in context " + g.set_name(ctx));
  Distribution by_tree = leaf_distribution(*tree);
  if (mode == Semantics::tree) return by_tree;
  Distribution by_instances = instance_semantics(g, ctx);
  if (!(by_tree == by_instances)) {
    err << "BUG: the two semantics disagree in context " << g.set_name(ctx) << "\n";
    for (const auto& [interp, p] : by_tree.mass)
      if (by_instances.prob_of(interp) != p)
        err << "  " << g.set_name(interp) << ": tree " << rational_string(p) << ", instances "
            << rational_string(by_instances.prob_of(interp)) << "\n";
    for (const auto& [interp, p] : by_instances.mass)
      if (by_tree.prob_of(interp) == 0)
        err << "  " << g.set_name(interp) << ": tree 0, instances " << rational_string(p) << "\n";
    throw CpError(Errc::invalid_theory, "semantics mismatch");
  }
  return by_tree;
}

std::vector<Bitset> contexts_for(const GroundCPTheory& g, const std::string& context_text,
                                 bool all) {
  if (all) return all_contexts(g);
  return {parse_context(g, context_text)};
}

// --- commands -------------------------------------------------------------

int cmd_check(const std::string& path, const std::string& context_text, bool all, std::ostream& out) {
  CPTheory theory = parse_theory(slurp(path));
  out << "parse OK: " << theory.laws.size() << " laws\n";
  GroundCPTheory g = ground_theory(theory);
  out << "ground: " << g.rule_count() << " rules over " << g.atom_count() << " atoms\n";
  auto lambda = find_stratification(g);
  if (lambda) {
    long layers = 0;
    for (long t : lambda->atom_time) layers = std::max(layers, t);
    out << "stratified: yes (" << (layers + 1) << " layers)\n";
  } else {
    out << "stratified: no\n";
  }
  BuildLimits limits = limits_from_env();
  bool all_valid = true;
  for (const Bitset& ctx : contexts_for(g, context_text, all)) {
    bool valid = is_valid(g, ctx, limits);
    all_valid &= valid;
    out << "context " << g.set_name(ctx) << ": " << (valid ? "VALID" : "INVALID (no execution model)")
        << "\n";
  }
  return all_valid ? 0 : 2;
}

int cmd_ground(const std::string& path, const std::string& out_path, std::ostream& out) {
  GroundCPTheory g = load_ground(path);
  std::string text = print_ground(g);
  if (out_path.empty())
    out << text;
  else
    spit(out_path, text);
  return 0;
}

void trace_wfs_to(const GroundCPTheory& g, const Bitset& ctx, const std::string& path) {
  std::ostringstream os;
  SelectionCursor cursor(g);
  Selection sigma;
  while (cursor.next(sigma)) {
    Program prog = instance(g, sigma);
    std::vector<WfStep> steps;
    well_founded_model(prog, ctx, &steps);
    os << "{\"selection\":[";
    for (std::size_t i = 0; i < sigma.choice.size(); ++i)
      os << (i ? "," : "") << sigma.choice[i];
    os << "],\"steps\":[";
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const WfStep& s = steps[i];
      if (i) os << ",";
      if (s.kind == WfStep::Kind::make_true) {
        os << "{\"make_true\":\"" << g.atom_name(s.atom) << "\",\"rule\":" << s.rule_index << "}";
      } else {
        os << "{\"make_false\":[";
        for (std::size_t j = 0; j < s.unfounded.size(); ++j)
          os << (j ? "," : "") << "\"" << g.atom_name(s.unfounded[j]) << "\"";
        os << "]}";
      }
    }
    os << "]}\n";
  }
  spit(path, os.str());
}

int cmd_dist(const std::string& path, const std::string& context_text, bool all,
             const std::string& semantics, int digits, const std::string& trace_path,
             std::ostream& out, std::ostream& err) {
  GroundCPTheory g = load_ground(path);
  BuildLimits limits = limits_from_env();
  Semantics mode = parse_semantics(semantics);
  for (const Bitset& ctx : contexts_for(g, context_text, all)) {
    if (all) out << "# context " << g.set_name(ctx) << "\n";
    if (!trace_path.empty()) trace_wfs_to(g, ctx, trace_path);
    print_distribution(out, g, semantics_distribution(g, ctx, mode, limits, err), digits);
  }
  return 0;
}

int cmd_query(const std::string& path, const std::string& formula_text,
              const std::string& context_text, bool all, const std::string& semantics, int digits,
              std::ostream& out, std::ostream& err) {
  GroundCPTheory g = load_ground(path);
  FormulaPtr query = parse_formula(formula_text, g.vocab());
  BuildLimits limits = limits_from_env();
  Semantics mode = parse_semantics(semantics);
  for (const Bitset& ctx : contexts_for(g, context_text, all)) {
    Distribution dist = semantics_distribution(g, ctx, mode, limits, err);
    Rational p = 0;
    for (const auto& [interp, mass] : dist.mass)
      if (eval_classical(g, query, interp)) p += mass;
    if (all) out << g.set_name(ctx) << "\t";
    out << rational_string(p) << "\t" << decimal_string(p, digits) << "\n";
  }
  return 0;
}

int cmd_tree(const std::string& path, const std::string& context_text, const std::string& policy_text,
             const std::string& mode_text, const std::string& dump, const std::string& out_path,
             std::ostream& out) {
  GroundCPTheory g = load_ground(path);
  Bitset ctx = parse_context(g, context_text);
  BuildLimits limits = limits_from_env();
  ProcessMode mode = mode_text == "weak" ? ProcessMode::weak : ProcessMode::full;

  auto emit = [&](const ExecutionTree& tree) {
    std::string text = dump == "json" ? tree_to_json(g, tree) + "\n" : tree_to_dot(g, tree);
    if (out_path.empty())
      out << text;
    else
      spit(out_path, text);
  };

  if (policy_text == "all") {
    std::size_t count = 0;
    std::vector<Distribution> distinct;
    bool first_emitted = false;
    for_each_execution_model(
        g, ctx, mode,
        [&](const ExecutionTree& tree) {
          ++count;
          Distribution d = leaf_distribution(tree);
          bool known = false;
          for (const Distribution& seen : distinct) known |= seen == d;
          if (!known) distinct.push_back(std::move(d));
          if (!dump.empty() && !first_emitted) {
            emit(tree);
            first_emitted = true;
          }
          return true;
        },
        limits);
    if (count == 0) throw CpError(Errc::invalid_theory, "no execution model in context " + g.set_name(ctx));
    out << "execution models: " << count << "\n";
    out << "distinct distributions: " << distinct.size() << "\n";
    return distinct.size() == 1 ? 0 : 2;
  }

  Policy policy;
  if (policy_text.rfind("seed:", 0) == 0) {
    policy.kind = Policy::Kind::seeded_random;
    policy.seed = std::strtoull(policy_text.c_str() + 5, nullptr, 10);
  } else if (policy_text != "first") {
    throw CpError(Errc::io_error, "unknown policy " + policy_text);
  }
  auto tree = build_execution_model(g, ctx, policy, mode, limits);
  if (!tree) throw CpError(Errc::invalid_theory, "no execution model in context " + g.set_name(ctx));
  if (!dump.empty()) {
    emit(*tree);
  } else {
    Distribution d = leaf_distribution(*tree);
    out << "execution model with " << d.mass.size() << " distinct outcomes\n";
    print_distribution(out, g, d, 6);
  }
  return 0;
}

int cmd_import_bn(const std::string& path, const std::string& out_path, std::ostream& out) {
  BayesNet bn = parse_bn(slurp(path));
  CPTheory theory = bn_to_cp(bn);
  std::string text = print_theory(theory);
  if (out_path.empty())
    out << text;
  else
    spit(out_path, text);
  return 0;
}

int cmd_intervene(const std::string& path, const std::vector<int>& removals,
                  const std::vector<std::string>& additions, const std::string& script_path,
                  const std::string& out_path, std::ostream& out) {
  CPTheory theory = parse_theory(slurp(path));
  InterventionScript script;
  if (!script_path.empty()) script = parse_intervention(slurp(script_path));
  for (int r : removals) script.removals.emplace_back(r);
  for (const std::string& a : additions) script.additions.push_back(a);
  CPTheory edited = apply_intervention(theory, script);
  std::string text = print_theory(edited);
  if (out_path.empty())
    out << text;
  else
    spit(out_path, text);
  return 0;
}

// Context directives inside a corpus file: lines of the form
//   % context: atom1, atom2
// (an empty list names the empty context).
std::vector<std::string> context_directives(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto pos = line.find("% context:");
    if (pos == std::string::npos) continue;
    out.push_back(line.substr(pos + 10));
  }
  return out;
}

int cmd_corpus_run(const std::string& dir, std::ostream& out, std::ostream& err) {
  BuildLimits limits = limits_from_env();
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".cpl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  int failures = 0;
  for (const auto& file : files) {
    std::string text = slurp(file.string());
    std::string name = file.filename().string();
    try {
      CPTheory theory = parse_theory(text);
      GroundCPTheory g = ground_theory(theory);
      std::vector<Bitset> contexts;
      for (const std::string& directive : context_directives(text))
        contexts.push_back(parse_context(g, directive));
      if (contexts.empty()) {
        if (g.exogenous_atoms().count() <= 8)
          contexts = all_contexts(g);
        else
          contexts.push_back(g.empty_atom_set());
      }

      bool stratified = find_stratification(g).has_value();
      std::ostringstream report;
      bool ok = true;
      for (const Bitset& ctx : contexts) {
        bool valid = is_valid(g, ctx, limits);
        if (!valid) {
          report << " " << g.set_name(ctx) << "=INVALID";
          continue;
        }
        Distribution by_tree = semantics_distribution(g, ctx, Semantics::both, limits, err);
        (void)by_tree;
        report << " " << g.set_name(ctx) << "=ok";
      }

      // Golden files freeze the dist output for the first context.
      std::filesystem::path golden = file;
      golden.replace_extension(".golden");
      if (std::filesystem::exists(golden) && !contexts.empty()) {
        bool valid = is_valid(g, contexts[0], limits);
        if (valid) {
          std::ostringstream got;
          print_distribution(got, g, semantics_distribution(g, contexts[0], Semantics::both, limits, err), 6);
          if (got.str() != slurp(golden.string())) {
            ok = false;
            report << " golden=MISMATCH";
          } else {
            report << " golden=ok";
          }
        }
      }

      out << (ok ? "PASS " : "FAIL ") << name << " [" << (stratified ? "stratified" : "unstratified")
          << "]" << report.str() << "\n";
      if (!ok) ++failures;
    } catch (const CpError& e) {
      out << "FAIL " << name << ": " << e.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 2;
}

int exit_code_for(const CpError& e) {
  switch (e.code()) {
    case Errc::invalid_theory:
    case Errc::unsound_lpad:
    case Errc::mismatched_base:
    case Errc::timing_not_respected:
    case Errc::resource_limit: return 2;
    default: return 1;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cplogic: an interpreter and analysis toolkit for causal probabilistic laws"};
  app.require_subcommand(1);

  std::string file, context_text, out_path, formula_text, semantics = "tree";
  std::string policy_text = "first", mode_text = "full", dump, script_path, trace_path;
  bool all_ctx = false;
  int digits = 6;
  std::vector<int> removals;
  std::vector<std::string> additions;

  auto* check = app.add_subcommand("check", "parse, ground, stratification and validity report");
  check->add_option("file", file)->required();
  check->add_option("--context", context_text, "true exogenous atoms, comma separated");
  check->add_flag("--all-contexts", all_ctx);

  auto* ground = app.add_subcommand("ground", "dump the grounded theory");
  ground->add_option("file", file)->required();
  ground->add_option("-o,--output", out_path);

  auto* dist = app.add_subcommand("dist", "full distribution table");
  dist->add_option("file", file)->required();
  dist->add_option("--context", context_text);
  dist->add_flag("--all-contexts", all_ctx);
  dist->add_option("--semantics", semantics, "tree|instances|both");
  dist->add_option("--digits", digits);
  dist->add_option("--trace-wfs", trace_path, "dump per-selection induction steps as JSON lines");

  auto* query = app.add_subcommand("query", "probability of a closed formula");
  query->add_option("file", file)->required();
  query->add_option("-q,--query", formula_text)->required();
  query->add_option("--context", context_text);
  query->add_flag("--all-contexts", all_ctx);
  query->add_option("--semantics", semantics);
  query->add_option("--digits", digits);

  auto* tree = app.add_subcommand("tree", "build or enumerate execution models");
  tree->add_option("file", file)->required();
  tree->add_option("--context", context_text);
  tree->add_option("--policy", policy_text, "first|seed:<n>|all");
  tree->add_option("--mode", mode_text, "weak|full");
  tree->add_option("--dump-tree", dump, "dot|json");
  tree->add_option("-o,--output", out_path);

  auto* import_bn = app.add_subcommand("import-bn", "translate a Bayesian network");
  import_bn->add_option("file", file)->required();
  import_bn->add_option("-o,--output", out_path);

  auto* intervene_cmd = app.add_subcommand("intervene", "remove and add laws");
  intervene_cmd->add_option("file", file)->required();
  intervene_cmd->add_option("--remove", removals, "source index of a law to remove");
  intervene_cmd->add_option("--add", additions, "law text to add");
  intervene_cmd->add_option("--script", script_path, "JSON intervention script");
  intervene_cmd->add_option("-o,--output", out_path);

  auto* corpus = app.add_subcommand("corpus", "corpus tools");
  auto* corpus_run = corpus->add_subcommand("run", "run every theory in a directory");
  std::string corpus_dir;
  corpus_run->add_option("dir", corpus_dir)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (check->parsed()) return cmd_check(file, context_text, all_ctx, out);
    if (ground->parsed()) return cmd_ground(file, out_path, out);
    if (dist->parsed())
      return cmd_dist(file, context_text, all_ctx, semantics, digits, trace_path, out, err);
    if (query->parsed())
      return cmd_query(file, formula_text, context_text, all_ctx, semantics, digits, out, err);
    if (tree->parsed())
      return cmd_tree(file, context_text, policy_text, mode_text, dump, out_path, out);
    if (import_bn->parsed()) return cmd_import_bn(file, out_path, out);
    if (intervene_cmd->parsed())
      return cmd_intervene(file, removals, additions, script_path, out_path, out);
    if (corpus->parsed() && corpus_run->parsed()) return cmd_corpus_run(corpus_dir, out, err);
  } catch (const CpError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  err << "no command\n";
  return 1;
}

}  // namespace cplogic
