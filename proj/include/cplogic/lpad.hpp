#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cplogic/ground.hpp"
#include "cplogic/process.hpp"
#include "cplogic/wfs.hpp"

namespace cplogic {

// One head outcome (index into the rule head) or the empty outcome (-1,
// available only when the head mass is below 1) per rule.
struct Selection {
  std::vector<int> choice;
};

// Streaming odometer over all selections, lexicographic by rule id with
// outcome order (head 0, head 1, ..., empty).
class SelectionCursor {
 public:
  explicit SelectionCursor(const GroundCPTheory& theory);
  bool next(Selection& out);  // false when exhausted

 private:
  const GroundCPTheory& theory_;
  std::vector<int> options_;
  Selection current_;
  bool done_ = false;
  bool first_ = true;
};

// Number of selections (product of per-rule option counts); throws
// ResourceLimit beyond `cap`.
std::size_t selection_count(const GroundCPTheory& theory, std::size_t cap = std::size_t{1} << 20);

std::vector<Selection> enumerate_selections(const GroundCPTheory& theory,
                                            std::size_t cap = std::size_t{1} << 20);

Rational selection_probability(const GroundCPTheory& theory, const Selection& sigma);

// The instance program C^sigma: one rule head <- body per non-empty choice;
// exogenous predicates become the open predicates.
Program instance(const GroundCPTheory& theory, const Selection& sigma);

struct SoundnessResult {
  bool sound = true;
  std::optional<Selection> counterexample;
};

SoundnessResult is_sound(const GroundCPTheory& theory, const Bitset& context,
                         std::size_t cap = std::size_t{1} << 20);

// Instance-based semantics: mass of each total interpretation is the total
// probability of the selections whose instance has that well-founded model in
// the context.  Throws Unsound when some instance model is not total.
Distribution instance_semantics(const GroundCPTheory& theory, const Bitset& context,
                                std::size_t cap = std::size_t{1} << 20);

}  // namespace cplogic
