#pragma once

#include <optional>
#include <vector>

#include "cplogic/ground.hpp"
#include "cplogic/process.hpp"

namespace cplogic {

// Assignment of time points to ground atoms.  Exogenous atoms default to 0.
struct Timing {
  std::vector<long> atom_time;
};

bool respects(const GroundCPTheory& theory, const Timing& lambda);

// Positive body occurrences need head time >= body time; negative occurrences
// need strict >.
bool strictly_respects(const GroundCPTheory& theory, const Timing& lambda);

// Witness timing via longest-path layering over the condensed atom dependency
// graph; none iff some strongly connected component contains a negative edge.
std::optional<Timing> find_stratification(const GroundCPTheory& theory);

struct EventTiming {
  std::vector<long> rule_time;
};

struct FollowResult {
  bool follows = false;
  std::optional<EventTiming> witness;
};

// Whether some event timing kappa puts the tree's firings in nondecreasing
// order along every branch.  kappa(r) is confined to [max body time, min head
// time], strictly after negative body atoms.  Throws TimingNotRespected when
// the theory does not respect lambda.
FollowResult follows_timing(const GroundCPTheory& theory, const ExecutionTree& tree,
                            const Timing& lambda);

// Per-rule kappa bounds for `lambda`, shared with enumeration pruning.
KappaIntervals kappa_intervals(const GroundCPTheory& theory, const Timing& lambda);

bool is_valid(const GroundCPTheory& theory, const Bitset& context, const BuildLimits& limits = {});
bool is_valid_all_contexts(const GroundCPTheory& theory, const BuildLimits& limits = {});

}  // namespace cplogic
