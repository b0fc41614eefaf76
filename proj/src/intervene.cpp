#include "cplogic/intervene.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "cplogic/errors.hpp"
#include "cplogic/parser.hpp"
#include "cplogic/printer.hpp"

namespace cplogic {

InterventionScript parse_intervention(const std::string& json_text) {
  InterventionScript script;
  try {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    if (doc.contains("remove"))
      for (const auto& r : doc["remove"]) {
        if (r.is_number_integer())
          script.removals.emplace_back(r.get<int>());
        else if (r.is_string())
          script.removals.emplace_back(r.get<std::string>());
        else
          throw CpError(Errc::unknown_rule_selector, "selectors are indices or law text");
      }
    if (doc.contains("add"))
      for (const auto& a : doc["add"]) script.additions.push_back(a.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw CpError(Errc::syntax_error, std::string("bad script JSON: ") + e.what());
  }
  return script;
}

CPTheory apply_intervention(const CPTheory& theory, const InterventionScript& script) {
  std::set<int> to_remove;
  for (const auto& selector : script.removals) {
    if (std::holds_alternative<int>(selector)) {
      int idx = std::get<int>(selector);
      bool found = false;
      for (const CPLaw& law : theory.laws)
        if (law.source_index == idx) found = true;
      if (!found)
        throw CpError(Errc::unknown_rule_selector, "no law with index " + std::to_string(idx));
      if (!to_remove.insert(idx).second)
        throw CpError(Errc::unknown_rule_selector, "law " + std::to_string(idx) + " removed twice");
    } else {
      const std::string& text = std::get<std::string>(selector);
      std::vector<int> matches;
      for (const CPLaw& law : theory.laws)
        if (print_law(theory.vocab, law) == text) matches.push_back(law.source_index);
      if (matches.empty()) throw CpError(Errc::unknown_rule_selector, "no law matches: " + text);
      if (matches.size() > 1)
        throw CpError(Errc::unknown_rule_selector, "selector matches several laws: " + text);
      if (!to_remove.insert(matches[0]).second)
        throw CpError(Errc::unknown_rule_selector, "law removed twice: " + text);
    }
  }

  CPTheory out;
  out.vocab = theory.vocab;
  int next_index = 0;
  for (const CPLaw& law : theory.laws) {
    next_index = std::max(next_index, law.source_index + 1);
    if (to_remove.count(law.source_index)) continue;
    out.laws.push_back(law);
  }
  for (const std::string& text : script.additions) {
    CPLaw law = parse_law(text, out.vocab);
    law.source_index = next_index++;
    out.laws.push_back(std::move(law));
  }
  return out;
}

}  // namespace cplogic
