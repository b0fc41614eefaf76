#include "cplogic/process.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "cplogic/diffcon.hpp"
#include "cplogic/errors.hpp"

namespace cplogic {

Rational Distribution::total() const {
  Rational sum = 0;
  for (const auto& [interp, p] : mass) sum += p;
  return sum;
}

bool Distribution::operator==(const Distribution& o) const {
  if (mass.size() != o.mass.size()) return false;
  for (const auto& [interp, p] : mass) {
    auto it = o.mass.find(interp);
    if (it == o.mass.end() || it->second != p) return false;
  }
  return true;
}

Rational Distribution::prob_of(const Bitset& interp) const {
  auto it = mass.find(interp);
  return it == mass.end() ? Rational(0) : it->second;
}

Interpretation potential(const GroundCPTheory& theory, const Bitset& fired, const Bitset& state) {
  Interpretation nu = Interpretation::from_true_set(state);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const GroundCPLaw& rule : theory.rules()) {
      if (fired.test(static_cast<std::size_t>(rule.id))) continue;
      if (eval3(theory, rule.body, nu) == TruthValue::f) continue;
      for (const GroundHead& h : rule.head) {
        if (nu[h.atom] == TruthValue::f) {
          nu.set(h.atom, TruthValue::u);
          changed = true;
        }
      }
    }
  }
  return nu;
}

namespace {

std::vector<RuleId> satisfied_rules(const GroundCPTheory& theory, const Bitset& fired,
                                    const Bitset& state) {
  std::vector<RuleId> out;
  for (const GroundCPLaw& rule : theory.rules()) {
    if (fired.test(static_cast<std::size_t>(rule.id))) continue;
    if (eval_classical(theory, rule.body, state)) out.push_back(rule.id);
  }
  return out;
}

// Child states of firing `rule` in `interp`: one per head atom plus, when the
// head mass is below 1, the unchanged state carrying the remaining mass.
std::vector<std::pair<Bitset, Rational>> firing_outcomes(const GroundCPTheory& theory, RuleId rule,
                                                         const Bitset& interp) {
  const GroundCPLaw& r = theory.rules()[static_cast<std::size_t>(rule)];
  std::vector<std::pair<Bitset, Rational>> out;
  for (const GroundHead& h : r.head) {
    Bitset next = interp;
    next.set(static_cast<std::size_t>(h.atom));
    out.emplace_back(std::move(next), h.prob);
  }
  if (r.head_mass < 1) out.emplace_back(interp, Rational(1) - r.head_mass);
  return out;
}

}  // namespace

std::vector<RuleId> eligible(const GroundCPTheory& theory, const Bitset& fired, const Bitset& state) {
  std::vector<RuleId> satisfied = satisfied_rules(theory, fired, state);
  if (satisfied.empty()) return satisfied;
  Interpretation nu = potential(theory, fired, state);
  std::vector<RuleId> out;
  for (RuleId r : satisfied)
    if (eval3(theory, theory.rules()[static_cast<std::size_t>(r)].body, nu) != TruthValue::u)
      out.push_back(r);
  return out;
}

namespace {

class Builder {
 public:
  Builder(const GroundCPTheory& theory, Policy policy, ProcessMode mode, const BuildLimits& limits)
      : theory_(theory), policy_(policy), mode_(mode), limits_(limits), rng_(policy.seed) {}

  std::optional<ProcessNode> build(const Bitset& interp, const Bitset& fired, Rational prob) {
    if (++nodes_ > limits_.node_cap)
      throw CpError(Errc::resource_limit, "execution tree exceeds the node cap");

    ProcessNode node;
    node.interp = interp;
    node.incoming_prob = std::move(prob);

    std::vector<RuleId> satisfied = satisfied_rules(theory_, fired, interp);
    if (satisfied.empty()) return node;  // leaf

    std::vector<RuleId> choices;
    if (mode_ == ProcessMode::full) {
      Interpretation nu = potential(theory_, fired, interp);
      for (RuleId r : satisfied)
        if (eval3(theory_, theory_.rules()[static_cast<std::size_t>(r)].body, nu) != TruthValue::u)
          choices.push_back(r);
    } else {
      choices = satisfied;
    }
    if (policy_.kind == Policy::Kind::seeded_random)
      std::shuffle(choices.begin(), choices.end(), rng_);

    for (RuleId r : choices) {
      Bitset next_fired = fired;
      next_fired.set(static_cast<std::size_t>(r));
      node.event = r;
      node.children.clear();
      bool ok = true;
      for (auto& [child_interp, child_prob] : firing_outcomes(theory_, r, interp)) {
        auto child = build(child_interp, next_fired, child_prob);
        if (!child) {
          ok = false;
          break;
        }
        node.children.push_back(std::move(*child));
      }
      if (ok) return node;
    }
    return std::nullopt;  // deadlock under every eligible choice
  }

 private:
  const GroundCPTheory& theory_;
  Policy policy_;
  ProcessMode mode_;
  const BuildLimits& limits_;
  std::mt19937_64 rng_;
  std::size_t nodes_ = 0;
};

}  // namespace

std::optional<ExecutionTree> build_execution_model(const GroundCPTheory& theory, const Bitset& context,
                                                   Policy policy, ProcessMode mode,
                                                   const BuildLimits& limits) {
  Builder builder(theory, policy, mode, limits);
  auto root = builder.build(context, theory.empty_rule_set(), 1);
  if (!root) return std::nullopt;
  return ExecutionTree{std::move(*root), context};
}

namespace {

// Enumerates all execution models by depth-first search over per-node event
// choices.  Pending holds the nodes still to be expanded; each carries its
// fired set and the event of its parent (for timing-prune constraints).
class Enumerator {
 public:
  Enumerator(const GroundCPTheory& theory, const Bitset& context, ProcessMode mode,
             const std::function<bool(const ExecutionTree&)>& fn, const BuildLimits& limits,
             const KappaIntervals* prune)
      : theory_(theory), context_(context), mode_(mode), fn_(fn), limits_(limits), prune_(prune) {
    if (prune_) {
      used_.assign(theory.rule_count(), 0);
      use_count_.assign(theory.rule_count(), 0);
    }
  }

  void run() {
    tree_.context = context_;
    tree_.root.interp = context_;
    tree_.root.incoming_prob = 1;
    std::vector<Task> pending;
    pending.push_back({&tree_.root, theory_.empty_rule_set(), -1});
    expand(pending);
  }

 private:
  struct Task {
    ProcessNode* node;
    Bitset fired;
    RuleId parent_event;
  };

  void expand(std::vector<Task>& pending) {
    if (stop_) return;
    if (pending.empty()) {
      if (++trees_ > limits_.tree_cap)
        throw CpError(Errc::resource_limit, "execution model enumeration exceeds the tree cap");
      if (!fn_(tree_)) stop_ = true;
      return;
    }
    if (++expansions_ > limits_.node_cap * 16)
      throw CpError(Errc::resource_limit, "execution model enumeration exceeds the node cap");

    Task task = pending.back();
    pending.pop_back();
    ProcessNode* node = task.node;

    std::vector<RuleId> satisfied = satisfied_rules(theory_, task.fired, node->interp);
    if (satisfied.empty()) {
      expand(pending);
      pending.push_back(task);
      return;
    }

    std::vector<RuleId> choices;
    if (mode_ == ProcessMode::full) {
      Interpretation nu = potential(theory_, task.fired, node->interp);
      for (RuleId r : satisfied)
        if (eval3(theory_, theory_.rules()[static_cast<std::size_t>(r)].body, nu) != TruthValue::u)
          choices.push_back(r);
    } else {
      choices = satisfied;
    }

    for (RuleId r : choices) {
      if (stop_) break;
      if (prune_ && !try_push_constraint(task.parent_event, r)) continue;

      node->event = r;
      Bitset next_fired = task.fired;
      next_fired.set(static_cast<std::size_t>(r));
      node->children.clear();
      for (auto& [child_interp, child_prob] : firing_outcomes(theory_, r, node->interp)) {
        ProcessNode child;
        child.interp = std::move(child_interp);
        child.incoming_prob = std::move(child_prob);
        node->children.push_back(std::move(child));
      }
      std::size_t base = pending.size();
      for (ProcessNode& child : node->children) pending.push_back({&child, next_fired, r});

      expand(pending);

      pending.resize(base);
      node->children.clear();
      node->event.reset();
      if (prune_) pop_constraint(task.parent_event, r);
    }
    pending.push_back(task);
  }

  // A rule may be the event of several nodes (in sibling branches), so usage
  // is reference-counted.
  bool try_push_constraint(RuleId parent, RuleId r) {
    ++use_count_[static_cast<std::size_t>(r)];
    used_[static_cast<std::size_t>(r)] = 1;
    if (parent >= 0) edges_.emplace_back(parent, r);  // kappa(parent) <= kappa(r)
    if (difference_feasible(prune_->lo, prune_->hi, edges_, used_)) return true;
    pop_constraint(parent, r);
    return false;
  }

  void pop_constraint(RuleId parent, RuleId r) {
    if (parent >= 0) edges_.pop_back();
    if (--use_count_[static_cast<std::size_t>(r)] == 0) used_[static_cast<std::size_t>(r)] = 0;
  }

  const GroundCPTheory& theory_;
  Bitset context_;
  ProcessMode mode_;
  const std::function<bool(const ExecutionTree&)>& fn_;
  const BuildLimits& limits_;
  const KappaIntervals* prune_;
  ExecutionTree tree_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<char> used_;
  std::vector<int> use_count_;
  std::size_t trees_ = 0;
  std::size_t expansions_ = 0;
  bool stop_ = false;
};

}  // namespace

void for_each_execution_model(const GroundCPTheory& theory, const Bitset& context, ProcessMode mode,
                              const std::function<bool(const ExecutionTree&)>& fn,
                              const BuildLimits& limits, const KappaIntervals* prune) {
  Enumerator e(theory, context, mode, fn, limits, prune);
  e.run();
}

std::vector<ExecutionTree> enumerate_execution_models(const GroundCPTheory& theory,
                                                      const Bitset& context, ProcessMode mode,
                                                      const BuildLimits& limits) {
  std::vector<ExecutionTree> out;
  for_each_execution_model(
      theory, context, mode,
      [&](const ExecutionTree& t) {
        out.push_back(t);
        return true;
      },
      limits);
  return out;
}

namespace {

void accumulate_leaves(const ProcessNode& node, Rational prob, Distribution& dist) {
  prob *= node.incoming_prob;
  if (node.children.empty()) {
    dist.mass[node.interp] += prob;
    return;
  }
  for (const ProcessNode& child : node.children) accumulate_leaves(child, prob, dist);
}

}  // namespace

Distribution leaf_distribution(const ExecutionTree& tree) {
  Distribution dist;
  accumulate_leaves(tree.root, 1, dist);
  return dist;
}

namespace {

class Checker {
 public:
  Checker(const GroundCPTheory& theory, ProcessMode mode) : theory_(theory), mode_(mode) {}

  CheckResult check(const ProcessNode& node, const Bitset& fired, std::vector<int>& path) {
    if (node.children.empty()) {
      std::vector<RuleId> satisfied = satisfied_rules(theory_, fired, node.interp);
      if (!satisfied.empty())
        return fail(path, "leaf still has a satisfied unfired rule r" + std::to_string(satisfied[0]));
      if (node.event) return fail(path, "leaf annotated with an event");
      return CheckResult{};
    }
    if (!node.event) return fail(path, "non-leaf node without an event");
    RuleId r = *node.event;
    if (r < 0 || r >= static_cast<RuleId>(theory_.rule_count()))
      return fail(path, "event rule id out of range");
    if (fired.test(static_cast<std::size_t>(r)))
      return fail(path, "rule r" + std::to_string(r) + " fires twice on one branch");
    const GroundCPLaw& rule = theory_.rules()[static_cast<std::size_t>(r)];
    if (!eval_classical(theory_, rule.body, node.interp))
      return fail(path, "precondition of r" + std::to_string(r) + " is not satisfied");
    if (mode_ == ProcessMode::full) {
      Interpretation nu = potential(theory_, fired, node.interp);
      if (eval3(theory_, rule.body, nu) == TruthValue::u)
        return fail(path, "body of r" + std::to_string(r) + " is undecided in the potential");
    }

    // Children must match the firing outcomes exactly (zero-mass outcomes
    // omitted); no-op outcomes stay distinct, so match as a multiset.
    Rational edge_sum = 0;
    for (const ProcessNode& child : node.children) edge_sum += child.incoming_prob;
    if (edge_sum != 1) return fail(path, "edge probabilities sum to " + rational_string(edge_sum));

    auto outcomes = firing_outcomes(theory_, r, node.interp);
    std::vector<char> taken(node.children.size(), 0);
    for (const auto& [want_interp, want_prob] : outcomes) {
      if (want_prob == 0) continue;
      bool found = false;
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (taken[i]) continue;
        if (node.children[i].interp == want_interp && node.children[i].incoming_prob == want_prob) {
          taken[i] = 1;
          found = true;
          break;
        }
      }
      if (!found)
        return fail(path, "missing child " + theory_.set_name(want_interp) + " with probability " +
                              rational_string(want_prob));
    }
    for (std::size_t i = 0; i < node.children.size(); ++i)
      if (!taken[i]) return fail(path, "unexpected child " + theory_.set_name(node.children[i].interp));

    Bitset next_fired = fired;
    next_fired.set(static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      CheckResult sub = check(node.children[i], next_fired, path);
      path.pop_back();
      if (!sub.ok) return sub;
    }
    return CheckResult{};
  }

 private:
  static CheckResult fail(const std::vector<int>& path, std::string reason) {
    return CheckResult{false, std::move(reason), path};
  }

  const GroundCPTheory& theory_;
  ProcessMode mode_;
};

}  // namespace

CheckResult check_execution_model(const GroundCPTheory& theory, const ExecutionTree& tree,
                                  const Bitset& context, ProcessMode mode) {
  if (!(tree.root.interp == context))
    return CheckResult{false, "root interpretation differs from the context", {}};
  Bitset ctx_endo = context;
  ctx_endo &= theory.endogenous_atoms();
  if (ctx_endo.any()) return CheckResult{false, "context sets an endogenous atom", {}};
  if (tree.root.incoming_prob != 1) return CheckResult{false, "root probability is not 1", {}};
  Checker checker(theory, mode);
  std::vector<int> path;
  return checker.check(tree.root, theory.empty_rule_set(), path);
}

Distribution conditional_semantics(const GroundCPTheory& theory,
                                   const std::vector<std::pair<Bitset, Rational>>& prior,
                                   const BuildLimits& limits) {
  Rational prior_sum = 0;
  for (const auto& [ctx, p] : prior) prior_sum += p;
  if (prior_sum != 1)
    throw CpError(Errc::invalid_theory, "prior masses sum to " + rational_string(prior_sum));

  Distribution joint;
  for (const auto& [ctx, p] : prior) {
    if (p == 0) continue;
    auto tree = build_execution_model(theory, ctx, Policy{}, ProcessMode::full, limits);
    if (!tree)
      throw CpError(Errc::invalid_theory, "no execution model in context " + theory.set_name(ctx));
    Distribution leaf = leaf_distribution(*tree);
    for (const auto& [interp, q] : leaf.mass) joint.mass[interp] += p * q;
  }
  return joint;
}

std::vector<Bitset> all_contexts(const GroundCPTheory& theory) {
  std::vector<AtomId> exo;
  const Bitset& mask = theory.exogenous_atoms();
  for (std::size_t i = mask.next_set(0); i < mask.size(); i = mask.next_set(i + 1))
    exo.push_back(static_cast<AtomId>(i));
  if (exo.size() > 24)
    throw CpError(Errc::resource_limit, "too many exogenous atoms to enumerate all contexts");
  std::vector<Bitset> out;
  for (std::size_t m = 0; m < (std::size_t{1} << exo.size()); ++m) {
    Bitset ctx = theory.empty_atom_set();
    for (std::size_t i = 0; i < exo.size(); ++i)
      if ((m >> i) & 1) ctx.set(static_cast<std::size_t>(exo[i]));
    out.push_back(std::move(ctx));
  }
  return out;
}

namespace {

void dot_node(const GroundCPTheory& theory, const ProcessNode& node, int& counter, int my_id,
              std::ostringstream& os) {
  std::string label = theory.set_name(node.interp);
  if (node.event) label += "\\nfires r" + std::to_string(*node.event);
  os << "  n" << my_id << " [label=\"" << label << "\"];\n";
  for (const ProcessNode& child : node.children) {
    int child_id = ++counter;
    os << "  n" << my_id << " -> n" << child_id << " [label=\""
       << rational_string(child.incoming_prob) << "\"];\n";
    dot_node(theory, child, counter, child_id, os);
  }
}

void json_node(const GroundCPTheory& theory, const ProcessNode& node, std::ostringstream& os) {
  os << "{\"state\":[";
  bool first = true;
  for (std::size_t i = node.interp.next_set(0); i < node.interp.size(); i = node.interp.next_set(i + 1)) {
    if (!first) os << ",";
    os << "\"" << theory.atom_name(static_cast<AtomId>(i)) << "\"";
    first = false;
  }
  os << "],\"prob\":\"" << rational_string(node.incoming_prob) << "\"";
  if (node.event) os << ",\"event\":" << *node.event;
  if (!node.children.empty()) {
    os << ",\"children\":[";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) os << ",";
      json_node(theory, node.children[i], os);
    }
    os << "]";
  }
  os << "}";
}

}  // namespace

std::string tree_to_dot(const GroundCPTheory& theory, const ExecutionTree& tree) {
  std::ostringstream os;
  os << "digraph execution_model {\n";
  int counter = 0;
  dot_node(theory, tree.root, counter, 0, os);
  os << "}\n";
  return os.str();
}

std::string tree_to_json(const GroundCPTheory& theory, const ExecutionTree& tree) {
  std::ostringstream os;
  json_node(theory, tree.root, os);
  return os.str();
}

}  // namespace cplogic
