#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tangle/lang.hpp"

// Deterministic small-step interpreter with a fuel budget and sound
// divergence detection: a program is reported as diverging only when its
// full machine configuration (control + data, output excluded) literally
// repeats. The language has no input, clock, or randomness, so a repeated
// configuration certifies that execution never halts.
namespace tangle::interp {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

using Value = std::variant<bool, std::string>;

enum class FaultKind : std::uint8_t {
  UndefinedName,
  Arity,
  Type,
  LookupMiss,
  NoResultAssigned,
};

std::string_view fault_name(FaultKind kind);

// The configuration at step `first` recurred at step `second`. Replaying
// either prefix reproduces the same configuration; see verify_cycle.
struct CycleWitness {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
};

enum class OutcomeKind : std::uint8_t {
  Halted,
  Diverges,
  FuelExhausted,
  Fault,
};

std::string_view outcome_name(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Halted;
  std::string output;           // print emissions up to the deciding moment
  std::uint64_t steps = 0;      // machine transitions executed
  std::optional<Value> value;   // eval_fn: the function result on Halted
  std::optional<CycleWitness> cycle;  // Diverges
  std::optional<FaultKind> fault;     // Fault
  std::string fault_detail;
};

bool outcome_equal(const Outcome& a, const Outcome& b);

struct TraceEvent {
  std::uint64_t step = 0;
  std::string_view definition;  // definition owning the work item
  std::string action;           // work item about to execute
  std::uint64_t bindings_digest = 0;  // digest of the top frame's locals
};

using TraceFn = std::function<void(const TraceEvent&)>;

struct RunOptions {
  std::uint64_t fuel = kDefaultFuel;
  TraceFn trace;  // called once per step when set
};

// Executes a procedure. Outcomes are values; faults never escape as
// exceptions. Requires the table to have passed validate(); calls into
// missing or ill-used names fault instead of crashing.
Outcome run(const lang::DefinitionTable& table, std::string_view proc,
            const std::vector<std::string>& args, const RunOptions& opts = {});

// Executes a function; Halted additionally carries the result value, and a
// halting path that never assigned the result faults.
Outcome eval_fn(const lang::DefinitionTable& table, std::string_view fn,
                const std::vector<std::string>& args,
                const RunOptions& opts = {});

// Replays the program and checks that the configurations after
// witness.first and witness.second steps are identical.
bool verify_cycle(const lang::DefinitionTable& table, std::string_view entry,
                  bool entry_is_function, const std::vector<std::string>& args,
                  const CycleWitness& witness);

}  // namespace tangle::interp
