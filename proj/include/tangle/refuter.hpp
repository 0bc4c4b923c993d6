#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tangle/diagonal.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"

// Runs the diagonal argument against a concrete decider: synthesize the
// adversary, ask the decider about it, establish the adversary's actual
// behavior with the interpreter, and render a verdict.
namespace tangle::refuter {

enum class Mode : std::uint8_t { Halts, What, PrintsA };

std::string_view mode_name(Mode mode);
std::optional<Mode> mode_from_name(std::string_view name);

enum class Verdict : std::uint8_t {
  WrongAnswer,     // the decider returned a boolean contradicted by execution
  NotTotal,        // the decider itself diverged or faulted on the probe
  Unknown,         // some run exhausted its fuel before a verdict
  SelfFulfilling,  // what-mode: whichever answer was given turned out true
};

std::string_view verdict_name(Verdict verdict);

struct Budgets {
  std::uint64_t decider_fuel = interp::kDefaultFuel;
  std::uint64_t adversary_fuel = interp::kDefaultFuel;
};

struct RefutationReport {
  std::string decider;
  Mode mode = Mode::Halts;
  std::string adversary_name;
  lang::SourceText adversary_source;
  interp::Outcome decider_outcome;                    // eval of d(a, a)
  std::optional<interp::Outcome> adversary_outcome;   // run of a(a)
  Verdict verdict = Verdict::Unknown;
  // Set when observed behavior agrees with the decider in a refuting mode
  // (or disagrees in what-mode) — impossible for this deterministic
  // machine, so it flags an interpreter bug rather than a decider property.
  bool anomaly = false;
  Budgets budgets;
  std::vector<std::string> transcript;  // first/last 100 steps, '…' between
};

// Probes d with the diag adversary: a halting claim must be contradicted by
// the adversary's actual behavior.
RefutationReport refute_halts(const lang::DefinitionTable& table,
                              const diagonal::DeciderRef& d,
                              const Budgets& budgets = {});

// Probes d with the what adversary, whose behavior matches whatever the
// decider answers; a total decider earns SelfFulfilling either way.
RefutationReport audit_what(const lang::DefinitionTable& table,
                            const diagonal::DeciderRef& d,
                            const Budgets& budgets = {});

// Probes a prints-'A' decider with the liar1 adversary, which prints 'B'
// exactly when the decider claims it prints 'A'.
RefutationReport refute_property(const lang::DefinitionTable& table,
                                 const diagonal::DeciderRef& d,
                                 const Budgets& budgets = {});

}  // namespace tangle::refuter
