#include "cplogic/bayes.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "cplogic/errors.hpp"

namespace cplogic {

int BayesNet::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::size_t row_count(const BayesNet& bn, const BnNode& node) {
  std::size_t n = 1;
  for (int p : node.parents) n *= bn.nodes[static_cast<std::size_t>(p)].values.size();
  return n;
}

std::size_t row_rank(const BayesNet& bn, const BnNode& node, const std::vector<int>& parent_values) {
  std::size_t rank = 0;
  for (std::size_t i = 0; i < node.parents.size(); ++i) {
    const BnNode& parent = bn.nodes[static_cast<std::size_t>(node.parents[i])];
    rank = rank * parent.values.size() + static_cast<std::size_t>(parent_values[i]);
  }
  return rank;
}

// Constant name for a node value: the plain value name unless another node's
// domain already claimed it, then <node>_<value>.
std::string value_constant_name(const BayesNet& bn, std::size_t node_index, const std::string& value) {
  for (std::size_t j = 0; j < bn.nodes.size(); ++j) {
    if (j == node_index || bn.nodes[j].boolean()) continue;
    for (const std::string& other : bn.nodes[j].values)
      if (other == value && j < node_index) return bn.nodes[node_index].name + "_" + value;
  }
  return value;
}

}  // namespace

namespace {

BayesNet parse_bn_impl(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw CpError(Errc::syntax_error, "expected an object with a \"nodes\" array");

  BayesNet bn;
  for (const auto& jn : doc["nodes"]) {
    BnNode node;
    node.name = jn.at("name").get<std::string>();
    if (bn.node_index(node.name) >= 0)
      throw CpError(Errc::syntax_error, "duplicate node " + node.name);
    for (const auto& v : jn.at("values")) node.values.push_back(v.get<std::string>());
    if (node.values.size() < 2) throw CpError(Errc::syntax_error, "node " + node.name + " needs >= 2 values");
    bn.nodes.push_back(std::move(node));
  }
  // Parents resolved in a second pass so declaration order is free.
  std::size_t idx = 0;
  for (const auto& jn : doc["nodes"]) {
    BnNode& node = bn.nodes[idx++];
    if (jn.contains("parents"))
      for (const auto& p : jn["parents"]) {
        int pi = bn.node_index(p.get<std::string>());
        if (pi < 0) throw CpError(Errc::syntax_error, "unknown parent " + p.get<std::string>());
        node.parents.push_back(pi);
      }
  }

  // Acyclicity via repeated removal of parentless nodes.
  {
    std::vector<int> indeg(bn.nodes.size(), 0);
    for (const BnNode& n : bn.nodes) indeg[static_cast<std::size_t>(&n - bn.nodes.data())] = static_cast<int>(n.parents.size());
    std::vector<std::size_t> order;
    std::vector<char> removed(bn.nodes.size(), 0);
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
        if (removed[i] || indeg[i] != 0) continue;
        removed[i] = 1;
        progress = true;
        order.push_back(i);
        for (std::size_t j = 0; j < bn.nodes.size(); ++j)
          for (int p : bn.nodes[j].parents)
            if (static_cast<std::size_t>(p) == i) --indeg[j];
      }
    }
    if (order.size() != bn.nodes.size()) throw CpError(Errc::cyclic_graph, "the parent graph has a cycle");
  }

  idx = 0;
  for (const auto& jn : doc["nodes"]) {
    BnNode& node = bn.nodes[idx++];
    std::size_t rows = row_count(bn, node);
    node.cpt.assign(rows, {});
    if (!jn.contains("cpt") || !jn["cpt"].is_array())
      throw CpError(Errc::missing_row, "node " + node.name + " has no cpt");
    for (const auto& jr : jn["cpt"]) {
      std::vector<int> parent_values;
      const auto& given = jr.at("given");
      if (given.size() != node.parents.size())
        throw CpError(Errc::missing_row, "row for " + node.name + " names the wrong number of parents");
      for (std::size_t i = 0; i < node.parents.size(); ++i) {
        const BnNode& parent = bn.nodes[static_cast<std::size_t>(node.parents[i])];
        std::string val = given[i].get<std::string>();
        auto it = std::find(parent.values.begin(), parent.values.end(), val);
        if (it == parent.values.end())
          throw CpError(Errc::missing_row, "value " + val + " not in the domain of " + parent.name);
        parent_values.push_back(static_cast<int>(it - parent.values.begin()));
      }
      std::size_t rank = row_rank(bn, node, parent_values);
      if (!node.cpt[rank].empty())
        throw CpError(Errc::missing_row, "duplicate row for " + node.name);
      std::vector<Rational> dist;
      const auto& probs = jr.at("p");
      if (probs.size() != node.values.size())
        throw CpError(Errc::row_sum_not_one, "row for " + node.name + " has the wrong arity");
      Rational sum = 0;
      for (const auto& p : probs) {
        Rational q = parse_rational(p.get<std::string>());
        if (q < 0) throw CpError(Errc::row_sum_not_one, "negative probability for " + node.name);
        sum += q;
        dist.push_back(std::move(q));
      }
      if (sum != 1)
        throw CpError(Errc::row_sum_not_one,
                      "row for " + node.name + " sums to " + rational_string(sum));
      node.cpt[rank] = std::move(dist);
    }
    for (std::size_t r = 0; r < rows; ++r)
      if (node.cpt[r].empty())
        throw CpError(Errc::missing_row, "node " + node.name + " is missing a cpt row");
  }
  return bn;
}

}  // namespace

BayesNet parse_bn(const std::string& json_text) {
  try {
    return parse_bn_impl(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw CpError(Errc::syntax_error, std::string("bad network JSON: ") + e.what());
  }
}

CPTheory bn_to_cp(const BayesNet& bn) {
  CPTheory theory;
  Vocabulary& vocab = theory.vocab;

  std::vector<PredId> preds(bn.nodes.size());
  std::vector<std::vector<ConstId>> value_consts(bn.nodes.size());
  for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
    const BnNode& node = bn.nodes[i];
    if (node.boolean()) {
      preds[i] = vocab.add_predicate(PredDecl{node.name, 0, false, {}});
    } else {
      std::string sort = node.name + "_dom";
      preds[i] = vocab.add_predicate(PredDecl{node.name, 1, false, {sort}});
      for (const std::string& v : node.values)
        value_consts[i].push_back(vocab.add_constant(value_constant_name(bn, i, v), sort));
    }
  }

  for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
    const BnNode& node = bn.nodes[i];
    std::size_t rows = row_count(bn, node);
    std::vector<int> parent_values(node.parents.size(), 0);
    for (std::size_t rank = 0; rank < rows; ++rank) {
      CPLaw law;
      const std::vector<Rational>& row = node.cpt[row_rank(bn, node, parent_values)];
      for (std::size_t v = 0; v < node.values.size(); ++v) {
        if (row[v] == 0) continue;  // zero entries never appear as head disjuncts
        if (node.boolean()) {
          if (node.values[v] == "false") continue;  // carried by the empty outcome
          law.head.push_back(HeadChoice{AtomRef{preds[i], {}}, row[v]});
        } else {
          law.head.push_back(
              HeadChoice{AtomRef{preds[i], {Term::constant(value_consts[i][v])}}, row[v]});
        }
      }
      if (!node.parents.empty()) {
        FormulaPtr body;
        for (std::size_t pi = 0; pi < node.parents.size(); ++pi) {
          std::size_t parent = static_cast<std::size_t>(node.parents[pi]);
          const BnNode& pnode = bn.nodes[parent];
          FormulaPtr lit;
          if (pnode.boolean()) {
            lit = Formula::atom(preds[parent], {});
            if (pnode.values[static_cast<std::size_t>(parent_values[pi])] == "false")
              lit = Formula::negation(lit);
          } else {
            lit = Formula::atom(preds[parent],
                                {Term::constant(value_consts[parent][static_cast<std::size_t>(parent_values[pi])])});
          }
          body = body ? Formula::conj(body, lit) : lit;
        }
        law.body = body;
      }
      if (!law.head.empty()) {
        law.source_index = static_cast<int>(theory.laws.size());
        theory.laws.push_back(std::move(law));
      }

      // Next parent-value combination, row-major.
      std::size_t c = parent_values.size();
      while (c > 0) {
        std::size_t parent = static_cast<std::size_t>(node.parents[c - 1]);
        if (++parent_values[c - 1] < static_cast<int>(bn.nodes[parent].values.size())) break;
        parent_values[c - 1] = 0;
        --c;
      }
    }
  }
  return theory;
}

Distribution bn_joint(const BayesNet& bn, const GroundCPTheory& universe) {
  Distribution joint;
  std::vector<int> assignment(bn.nodes.size(), 0);
  while (true) {
    Rational p = 1;
    for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
      const BnNode& node = bn.nodes[i];
      std::vector<int> parent_values;
      for (int parent : node.parents) parent_values.push_back(assignment[static_cast<std::size_t>(parent)]);
      p *= node.cpt[row_rank(bn, node, parent_values)][static_cast<std::size_t>(assignment[i])];
    }
    if (p > 0) {
      Bitset interp = universe.empty_atom_set();
      for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
        const BnNode& node = bn.nodes[i];
        std::string atom;
        if (node.boolean()) {
          if (node.values[static_cast<std::size_t>(assignment[i])] != "true") continue;
          atom = node.name;
        } else {
          atom = node.name + "(" +
                 value_constant_name(bn, i, node.values[static_cast<std::size_t>(assignment[i])]) + ")";
        }
        AtomId id = universe.atom_by_name(atom);
        if (id < 0) throw CpError(Errc::undeclared_symbol, "atom " + atom + " missing from the universe");
        interp.set(static_cast<std::size_t>(id));
      }
      joint.mass[interp] += p;
    }

    std::size_t c = assignment.size();
    while (c > 0) {
      if (++assignment[c - 1] < static_cast<int>(bn.nodes[c - 1].values.size())) break;
      assignment[c - 1] = 0;
      --c;
    }
    if (c == 0) break;
  }
  return joint;
}

Rational noisy_or(const std::vector<Rational>& alphas) {
  Rational miss = 1;
  for (const Rational& a : alphas) miss *= Rational(1) - a;
  return Rational(1) - miss;
}

}  // namespace cplogic
