#pragma once

#include <vector>

#include "cplogic/bitset.hpp"
#include "cplogic/ground.hpp"

namespace cplogic {

// Three truth values ordered f <_t u <_t t by their numeric encoding.
enum class TruthValue : unsigned char { f = 0, u = 1, t = 2 };

inline TruthValue tv_not(TruthValue v) {
  switch (v) {
    case TruthValue::t: return TruthValue::f;
    case TruthValue::f: return TruthValue::t;
    default: return TruthValue::u;
  }
}

inline TruthValue tv_min(TruthValue a, TruthValue b) { return a < b ? a : b; }
inline TruthValue tv_max(TruthValue a, TruthValue b) { return a < b ? b : a; }

// u <_p f and u <_p t; f and t are incomparable.
inline bool tv_leq_precision(TruthValue a, TruthValue b) {
  return a == b || a == TruthValue::u;
}

// A partial Herbrand interpretation: total as a map over the Herbrand base.
class Interpretation {
 public:
  Interpretation() = default;
  Interpretation(std::size_t n, TruthValue init) : vals_(n, init) {}

  // All atoms in `trues` are t, the rest f.
  static Interpretation from_true_set(const Bitset& trues);

  std::size_t size() const { return vals_.size(); }
  TruthValue operator[](AtomId id) const { return vals_[static_cast<std::size_t>(id)]; }
  void set(AtomId id, TruthValue v) { vals_[static_cast<std::size_t>(id)] = v; }

  bool total() const;
  Bitset true_set() const;

  bool operator==(const Interpretation& o) const { return vals_ == o.vals_; }

 private:
  std::vector<TruthValue> vals_;
};

enum class OrderKind { precision, truth };
enum class CmpResult { less_or_equal, greater, incomparable };

// Pointwise comparison of nu1 against nu2.  Throws MismatchedBase when the
// interpretations range over different Herbrand bases.
CmpResult compare(const Interpretation& nu1, const Interpretation& nu2, OrderKind order);

// The three-valued truth function over ground formulas; an absent (null)
// body evaluates to t.
TruthValue eval3(const GroundCPTheory& theory, const FormulaPtr& formula, const Interpretation& nu);

// Classical two-valued evaluation against a total interpretation given as its
// set of true atoms.
bool eval_classical(const GroundCPTheory& theory, const FormulaPtr& formula, const Bitset& trues);

}  // namespace cplogic
