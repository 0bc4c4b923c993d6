#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "tangle/lang.hpp"

// Adversary synthesis. Given any decider — a function claiming to answer a
// behavioral question about (program, input) pairs — these builders emit the
// program that self-applies the decider and inverts (or echoes) its answer.
// Synthesis reads the decider's header only, never its body.
namespace tangle::diagonal {

// A function taking exactly two string parameters and returning boolean.
struct DeciderRef {
  std::string name;
};

// Validates the named definition against the decider shape.
std::variant<DeciderRef, std::string> make_decider_ref(
    const lang::DefinitionTable& table, std::string_view name);

struct Synthesized {
  std::string name;  // fresh: base, or base_1, base_2, ...
  lang::SourceText source;
};

// procedure <fresh>(s: string); begin if <d>(s, s) then <fresh>(s) end
Synthesized make_diag(const lang::DefinitionTable& table, const DeciderRef& d);

// As make_diag with the condition negated; base name "what".
Synthesized make_what(const lang::DefinitionTable& table, const DeciderRef& d);

// procedure <fresh>(s: string);
// begin if <d>(s, s) then print('B') else print('A') end
Synthesized make_liar1(const lang::DefinitionTable& table,
                       const DeciderRef& d);

// The one-parameterless liar cannot be synthesized from a decider: its
// condition is informal ("execution of liar terminates"). These are its two
// candidate completions, each of which contradicts the condition it stands
// for: completing with true yields a procedure that diverges, completing
// with false yields one that halts.
lang::SourceText liar_completion(std::string_view name, bool completion);

}  // namespace tangle::diagonal
