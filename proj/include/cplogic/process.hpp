#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cplogic/ground.hpp"
#include "cplogic/logic3.hpp"

namespace cplogic {

struct ProcessNode {
  Bitset interp;            // true atoms: endogenous so far plus the exogenous context
  Rational incoming_prob;   // edge label from the parent (1 at the root)
  std::optional<RuleId> event;  // rule fired here; absent at leaves
  std::vector<ProcessNode> children;
};

struct ExecutionTree {
  ProcessNode root;
  Bitset context;  // exogenous atoms set; endogenous all clear
};

struct Distribution {
  std::unordered_map<Bitset, Rational, BitsetHash> mass;

  Rational total() const;
  bool operator==(const Distribution& o) const;
  Rational prob_of(const Bitset& interp) const;  // 0 when absent
};

// The potential nu_s: limit of the hypothetical derivation sequence from the
// given state, over the rules not yet fired.
Interpretation potential(const GroundCPTheory& theory, const Bitset& fired, const Bitset& state);

// Unfired rules whose body holds classically in `state` and is non-u under
// the potential.
std::vector<RuleId> eligible(const GroundCPTheory& theory, const Bitset& fired, const Bitset& state);

enum class ProcessMode { weak, full };

struct Policy {
  enum class Kind { first_eligible, seeded_random };
  Kind kind = Kind::first_eligible;
  uint64_t seed = 0;
};

struct BuildLimits {
  std::size_t node_cap = 1'000'000;
  std::size_t tree_cap = 1'000'000;
};

// Depth-first construction with backtracking over event choices; nullopt when
// no execution model exists in the context (the theory is invalid there).
std::optional<ExecutionTree> build_execution_model(const GroundCPTheory& theory,
                                                   const Bitset& context, Policy policy = {},
                                                   ProcessMode mode = ProcessMode::full,
                                                   const BuildLimits& limits = {});

// Lower/upper bounds per rule for an event timing; used to prune enumeration
// to trees that can still follow a timing.
struct KappaIntervals {
  std::vector<long> lo, hi;
};

// Enumerates every execution model (weak or full); the callback returns false
// to stop early.  With `prune` set, subtrees whose branch order already
// violates the timing-interval constraints are skipped.
void for_each_execution_model(const GroundCPTheory& theory, const Bitset& context, ProcessMode mode,
                              const std::function<bool(const ExecutionTree&)>& fn,
                              const BuildLimits& limits = {}, const KappaIntervals* prune = nullptr);

std::vector<ExecutionTree> enumerate_execution_models(const GroundCPTheory& theory,
                                                      const Bitset& context, ProcessMode mode,
                                                      const BuildLimits& limits = {});

Distribution leaf_distribution(const ExecutionTree& tree);

struct CheckResult {
  bool ok = true;
  std::string reason;
  std::vector<int> path;  // child indices from the root to the offending node
};

CheckResult check_execution_model(const GroundCPTheory& theory, const ExecutionTree& tree,
                                  const Bitset& context, ProcessMode mode);

// Joint distribution pi(X ∪ J) = prior(X) * pi^X(J).  The prior must sum to 1
// and assign mass only to exogenous interpretations.
Distribution conditional_semantics(const GroundCPTheory& theory,
                                   const std::vector<std::pair<Bitset, Rational>>& prior,
                                   const BuildLimits& limits = {});

// All interpretations of the exogenous atoms (2^k contexts).
std::vector<Bitset> all_contexts(const GroundCPTheory& theory);

std::string tree_to_dot(const GroundCPTheory& theory, const ExecutionTree& tree);
std::string tree_to_json(const GroundCPTheory& theory, const ExecutionTree& tree);

}  // namespace cplogic
