#pragma once

#include <string>
#include <vector>

#include "cplogic/ast.hpp"
#include "cplogic/process.hpp"

namespace cplogic {

struct BnNode {
  std::string name;
  std::vector<std::string> values;
  std::vector<int> parents;  // indices into BayesNet::nodes
  // One row per parent-value combination (row-major over parent value
  // indices); each row is an exact distribution over `values`.
  std::vector<std::vector<Rational>> cpt;

  bool boolean() const { return values.size() == 2 && values[0] == "true" && values[1] == "false"; }
};

struct BayesNet {
  std::vector<BnNode> nodes;
  int node_index(const std::string& name) const;
};

// JSON format documented in the README; probabilities are strings so they
// stay exact.  Errors: CyclicGraph, RowSumNotOne, MissingRow.
BayesNet parse_bn(const std::string& json_text);

// One CP-law per node per parent-value row, with the row as head masses.
// Zero entries drop their disjunct; all-zero rows are omitted entirely.
// Boolean nodes render as bare atoms.
CPTheory bn_to_cp(const BayesNet& bn);

// Exact chain-rule joint over full assignments, encoded over the atoms of the
// grounded translation (the independent oracle for the translation).
Distribution bn_joint(const BayesNet& bn, const GroundCPTheory& universe);

// 1 - prod (1 - alpha_i).
Rational noisy_or(const std::vector<Rational>& alphas);

}  // namespace cplogic
