#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tangle/eqn.hpp"
#include "tangle/interp.hpp"
#include "tangle/refuter.hpp"

// Report payloads shared by the CLI, the test suites, and the bindings.
// A payload is an ordered JSON value; the human rendering and the JSON
// rendering are both derived from it, and the exit code is a function of
// the payload category alone.
namespace tangle::report {

using Json = nlohmann::ordered_json;

// Exit codes, per command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverges = 10;
inline constexpr int kExitFuelExhausted = 11;
inline constexpr int kExitFault = 12;
inline constexpr int kExitOverdetermined = 20;
inline constexpr int kExitUnderdetermined = 21;
inline constexpr int kExitNotTotal = 30;
inline constexpr int kExitRefuteUnknown = 31;

Json outcome_payload(const interp::Outcome& outcome);
Json classification_payload(const eqn::EquationSystem& sys,
                            const eqn::Classification& c);
Json refutation_payload(const refuter::RefutationReport& report);

int outcome_exit(const interp::Outcome& outcome);
int classification_exit(const eqn::Classification& c);
int refutation_exit(const refuter::RefutationReport& report);

// {"command": ..., "inputs": "fnv1a64:<hex>", "result": ..., "exit": n}
Json envelope(std::string_view command, std::string_view inputs_digest,
              Json result, int exit_code);

// Digest of the bytes that fed a command: file contents plus arguments.
std::string inputs_digest(const std::vector<std::string>& parts);

std::string human_outcome(const interp::Outcome& outcome);
std::string human_classification(const eqn::EquationSystem& sys,
                                 const eqn::Classification& c);
std::string human_refutation(const refuter::RefutationReport& report);

}  // namespace tangle::report
