#include "twotls/iel.hpp"

namespace twotls {

std::optional<Law> parse_law(const std::string& name) {
  if (name == "bare") return Law::bare;
  if (name == "rc") return Law::rc;
  return std::nullopt;
}

std::string law_name(Law law) { return law == Law::bare ? "bare" : "rc"; }

LawRegistry LawRegistry::with_builtin_laws() {
  LawRegistry registry;
  for (Law law : {Law::bare, Law::rc}) {
    registry.add(law_name(law), [law](const Configuration<double>& c) { return iel_evaluate(law, c); });
  }
  return registry;
}

void LawRegistry::add(const std::string& name, Evaluator evaluator) {
  if (name.empty()) throw ValidationError("LawRegistry: empty law name");
  laws_[name] = std::move(evaluator);
}

bool LawRegistry::contains(const std::string& name) const { return laws_.count(name) != 0; }

const LawRegistry::Evaluator& LawRegistry::at(const std::string& name) const {
  auto it = laws_.find(name);
  if (it == laws_.end()) throw ValidationError("LawRegistry: unknown law '" + name + "'");
  return it->second;
}

std::vector<std::string> LawRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(laws_.size());
  for (const auto& [name, _] : laws_) out.push_back(name);
  return out;
}

}  // namespace twotls
