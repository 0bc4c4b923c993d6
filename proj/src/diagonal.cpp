#include "tangle/diagonal.hpp"

namespace tangle::diagonal {

namespace {

std::string fresh_name(const lang::DefinitionTable& table,
                       std::string_view base) {
  std::string name(base);
  for (int i = 1; table.contains(name); ++i) {
    name = std::string(base) + "_" + std::to_string(i);
  }
  return name;
}

}  // namespace

std::variant<DeciderRef, std::string> make_decider_ref(
    const lang::DefinitionTable& table, std::string_view name) {
  const lang::Definition* def = table.find(name);
  if (!def) {
    return "no definition named '" + std::string(name) + "'";
  }
  if (def->kind != lang::DefKind::Function) {
    return "'" + std::string(name) + "' is a procedure; a decider must be a "
           "function";
  }
  if (def->params.size() != 2) {
    return "'" + std::string(name) + "' takes " +
           std::to_string(def->params.size()) +
           " parameters; a decider takes two strings";
  }
  return DeciderRef{std::string(name)};
}

Synthesized make_diag(const lang::DefinitionTable& table,
                      const DeciderRef& d) {
  std::string name = fresh_name(table, "diag");
  lang::SourceText src = "procedure " + name + "(s: string);\nbegin\n  if " +
                         d.name + "(s, s) then " + name + "(s)\nend";
  return {std::move(name), std::move(src)};
}

Synthesized make_what(const lang::DefinitionTable& table,
                      const DeciderRef& d) {
  std::string name = fresh_name(table, "what");
  lang::SourceText src = "procedure " + name +
                         "(s: string);\nbegin\n  if not " + d.name +
                         "(s, s) then " + name + "(s)\nend";
  return {std::move(name), std::move(src)};
}

Synthesized make_liar1(const lang::DefinitionTable& table,
                       const DeciderRef& d) {
  std::string name = fresh_name(table, "liar1");
  lang::SourceText src = "procedure " + name + "(s: string);\nbegin\n  if " +
                         d.name + "(s, s) then print('B')\n  else print('A')"
                         "\nend";
  return {std::move(name), std::move(src)};
}

lang::SourceText liar_completion(std::string_view name, bool completion) {
  std::string n(name);
  return "procedure " + n + ";\nbegin\n  if " +
         (completion ? "true" : "false") + " then " + n + "\nend";
}

}  // namespace tangle::diagonal
