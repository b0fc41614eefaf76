#include "cplogic/analysis.hpp"

#include <algorithm>
#include <functional>

#include "cplogic/diffcon.hpp"
#include "cplogic/errors.hpp"

namespace cplogic {

namespace {

long body_max(const Timing& lambda, const std::vector<AtomId>& atoms) {
  long m = 0;
  for (AtomId a : atoms) m = std::max(m, lambda.atom_time[static_cast<std::size_t>(a)]);
  return m;
}

long head_min(const Timing& lambda, const GroundCPLaw& rule) {
  long m = lambda.atom_time[static_cast<std::size_t>(rule.head[0].atom)];
  for (const GroundHead& h : rule.head)
    m = std::min(m, lambda.atom_time[static_cast<std::size_t>(h.atom)]);
  return m;
}

}  // namespace

bool respects(const GroundCPTheory& theory, const Timing& lambda) {
  for (const GroundCPLaw& rule : theory.rules()) {
    BodyAtomSets sets = body_atom_sets(theory, rule);
    for (const GroundHead& h : rule.head) {
      long ht = lambda.atom_time[static_cast<std::size_t>(h.atom)];
      for (AtomId b : sets.all)
        if (ht < lambda.atom_time[static_cast<std::size_t>(b)]) return false;
    }
  }
  return true;
}

bool strictly_respects(const GroundCPTheory& theory, const Timing& lambda) {
  for (const GroundCPLaw& rule : theory.rules()) {
    BodyAtomSets sets = body_atom_sets(theory, rule);
    for (const GroundHead& h : rule.head) {
      long ht = lambda.atom_time[static_cast<std::size_t>(h.atom)];
      for (AtomId b : sets.positive)
        if (ht < lambda.atom_time[static_cast<std::size_t>(b)]) return false;
      for (AtomId b : sets.negative)
        if (ht <= lambda.atom_time[static_cast<std::size_t>(b)]) return false;
    }
  }
  return true;
}

namespace {

// Tarjan over the atom dependency graph, iterative to be safe on deep chains.
std::vector<int> strongly_connected_components(std::size_t n,
                                               const std::vector<std::vector<int>>& succ,
                                               int& scc_count) {
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0;
  scc_count = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (std::size_t start = 0; start < n; ++start) {
    if (num[start] != -1) continue;
    std::vector<Frame> frames{{static_cast<int>(start), 0}};
    num[start] = low[start] = counter++;
    stack.push_back(static_cast<int>(start));
    on_stack[start] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < succ[static_cast<std::size_t>(f.v)].size()) {
        int w = succ[static_cast<std::size_t>(f.v)][f.edge++];
        if (num[static_cast<std::size_t>(w)] == -1) {
          num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], num[static_cast<std::size_t>(w)]);
        }
      } else {
        if (low[static_cast<std::size_t>(f.v)] == num[static_cast<std::size_t>(f.v)]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = 0;
            comp[static_cast<std::size_t>(w)] = scc_count;
            if (w == f.v) break;
          }
          ++scc_count;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[static_cast<std::size_t>(frames.back().v)] =
              std::min(low[static_cast<std::size_t>(frames.back().v)], low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return comp;
}

}  // namespace

std::optional<Timing> find_stratification(const GroundCPTheory& theory) {
  const std::size_t n = theory.atom_count();
  struct Edge {
    AtomId from, to;
    long weight;  // 0 positive occurrence, 1 negative occurrence
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> succ(n);
  for (const GroundCPLaw& rule : theory.rules()) {
    BodyAtomSets sets = body_atom_sets(theory, rule);
    for (const GroundHead& h : rule.head) {
      for (AtomId b : sets.positive) {
        edges.push_back({b, h.atom, 0});
        succ[static_cast<std::size_t>(b)].push_back(h.atom);
      }
      for (AtomId b : sets.negative) {
        edges.push_back({b, h.atom, 1});
        succ[static_cast<std::size_t>(b)].push_back(h.atom);
      }
    }
  }

  int scc_count = 0;
  std::vector<int> comp = strongly_connected_components(n, succ, scc_count);
  for (const Edge& e : edges)
    if (e.weight == 1 && comp[static_cast<std::size_t>(e.from)] == comp[static_cast<std::size_t>(e.to)])
      return std::nullopt;  // negative edge inside a cycle

  // Longest path over the condensation: lambda(h) >= lambda(b) + weight.
  Timing lambda;
  lambda.atom_time.assign(n, 0);
  bool changed = true;
  std::size_t guard = 0;
  while (changed) {
    changed = false;
    if (++guard > n + 2) throw CpError(Errc::resource_limit, "stratification layering diverged");
    for (const Edge& e : edges) {
      long need = lambda.atom_time[static_cast<std::size_t>(e.from)] + e.weight;
      if (lambda.atom_time[static_cast<std::size_t>(e.to)] < need) {
        lambda.atom_time[static_cast<std::size_t>(e.to)] = need;
        changed = true;
      }
    }
  }
  return lambda;
}

KappaIntervals kappa_intervals(const GroundCPTheory& theory, const Timing& lambda) {
  KappaIntervals out;
  out.lo.resize(theory.rule_count());
  out.hi.resize(theory.rule_count());
  for (const GroundCPLaw& rule : theory.rules()) {
    BodyAtomSets sets = body_atom_sets(theory, rule);
    long lo = body_max(lambda, sets.all);
    // Events fire strictly after the atoms they depend on negatively.
    for (AtomId b : sets.negative)
      lo = std::max(lo, lambda.atom_time[static_cast<std::size_t>(b)] + 1);
    out.lo[static_cast<std::size_t>(rule.id)] = lo;
    out.hi[static_cast<std::size_t>(rule.id)] = head_min(lambda, rule);
  }
  return out;
}

namespace {

void collect_order_edges(const ProcessNode& node, std::vector<std::pair<int, int>>& edges,
                         std::vector<char>& used) {
  if (!node.event) return;
  used[static_cast<std::size_t>(*node.event)] = 1;
  for (const ProcessNode& child : node.children) {
    if (child.event) edges.emplace_back(*node.event, *child.event);
    collect_order_edges(child, edges, used);
  }
}

}  // namespace

FollowResult follows_timing(const GroundCPTheory& theory, const ExecutionTree& tree,
                            const Timing& lambda) {
  if (!respects(theory, lambda))
    throw CpError(Errc::timing_not_respected, "the theory does not respect the timing");

  KappaIntervals iv = kappa_intervals(theory, lambda);
  std::vector<std::pair<int, int>> edges;
  std::vector<char> used(theory.rule_count(), 0);
  collect_order_edges(tree.root, edges, used);

  auto witness = difference_feasible(iv.lo, iv.hi, edges, used);
  if (!witness) return FollowResult{false, std::nullopt};

  EventTiming kappa;
  kappa.rule_time = std::move(*witness);
  // Rules that never fire in this tree still get a kappa inside their
  // interval, so the witness is total.
  for (std::size_t r = 0; r < theory.rule_count(); ++r)
    if (!used[r]) kappa.rule_time[r] = std::min(iv.lo[r], iv.hi[r]);
  return FollowResult{true, std::move(kappa)};
}

bool is_valid(const GroundCPTheory& theory, const Bitset& context, const BuildLimits& limits) {
  return build_execution_model(theory, context, Policy{}, ProcessMode::full, limits).has_value();
}

bool is_valid_all_contexts(const GroundCPTheory& theory, const BuildLimits& limits) {
  for (const Bitset& ctx : all_contexts(theory))
    if (!is_valid(theory, ctx, limits)) return false;
  return true;
}

}  // namespace cplogic
