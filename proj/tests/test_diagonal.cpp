#include <doctest.h>

#include <variant>

#include "support/helpers.hpp"
#include "tangle/diagonal.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"

using namespace tangle;
using testing::parse_ok;

namespace {

const char* kHaltsHeader =
    "function halts(p, i: string): boolean;\nbegin\nend";

const char* kConstants =
    "function alwaysTrue(p, i: string): boolean;\nbegin\n  alwaysTrue := "
    "true\nend;\n"
    "function alwaysFalse(p, i: string): boolean;\nbegin\n  alwaysFalse := "
    "false\nend";

diagonal::DeciderRef ref_ok(const lang::DefinitionTable& table,
                            const std::string& name) {
  auto ref = diagonal::make_decider_ref(table, name);
  REQUIRE(std::holds_alternative<diagonal::DeciderRef>(ref));
  return std::get<diagonal::DeciderRef>(ref);
}

// Parses the synthesized source, adds it to the table, and checks that the
// result validates and round-trips.
lang::DefinitionTable extend_checked(const lang::DefinitionTable& table,
                                     const diagonal::Synthesized& synth) {
  auto extended = table;
  auto parsed = parse_ok(synth.source);
  REQUIRE(parsed.size() == 1);
  CHECK(lang::render(parsed.defs[0]) == synth.source);
  REQUIRE(extended.add(std::move(parsed.defs[0])));
  CHECK(lang::validate(extended).empty());
  return extended;
}

}  // namespace

TEST_CASE("make_diag emits the canonical self-application text") {
  auto table = parse_ok(kHaltsHeader);
  auto synth = diagonal::make_diag(table, ref_ok(table, "halts"));
  CHECK(synth.name == "diag");
  CHECK(synth.source ==
        "procedure diag(s: string);\nbegin\n  if halts(s, s) then diag(s)\n"
        "end");
  extend_checked(table, synth);
}

TEST_CASE("make_what negates the condition") {
  auto table = parse_ok(kHaltsHeader);
  auto synth = diagonal::make_what(table, ref_ok(table, "halts"));
  CHECK(synth.name == "what");
  CHECK(synth.source ==
        "procedure what(s: string);\nbegin\n  if not halts(s, s) then "
        "what(s)\nend");
  extend_checked(table, synth);
}

TEST_CASE("make_liar1 prints the opposite of the claim") {
  auto table = parse_ok(kHaltsHeader);
  auto synth = diagonal::make_liar1(table, ref_ok(table, "halts"));
  CHECK(synth.name == "liar1");
  CHECK(synth.source ==
        "procedure liar1(s: string);\nbegin\n  if halts(s, s) then "
        "print('B')\n  else print('A')\nend");
  extend_checked(table, synth);
}

TEST_CASE("fresh names never collide with table entries") {
  auto table = parse_ok(
      std::string(kHaltsHeader) +
      ";\nprocedure diag(s: string);\nbegin\nend;\n"
      "procedure diag_1(s: string);\nbegin\nend");
  auto synth = diagonal::make_diag(table, ref_ok(table, "halts"));
  CHECK(synth.name == "diag_2");
  // The body self-calls the fresh name, not the base name.
  CHECK(synth.source.find("then diag_2(s)") != std::string::npos);
  extend_checked(table, synth);
}

TEST_CASE("synthesis reads only the decider's header") {
  auto empty_body = parse_ok(kHaltsHeader);
  auto with_body = parse_ok(
      "function halts(p, i: string): boolean;\nbegin\n  halts := "
      "lookup(p) = lookup(i)\nend");
  auto a = diagonal::make_diag(empty_body, ref_ok(empty_body, "halts"));
  auto b = diagonal::make_diag(with_body, ref_ok(with_body, "halts"));
  CHECK(a.name == b.name);
  CHECK(a.source == b.source);
}

TEST_CASE("the diag adversary for a constant-true decider diverges") {
  auto table = parse_ok(kConstants);
  auto synth = diagonal::make_diag(table, ref_ok(table, "alwaysTrue"));
  auto extended = extend_checked(table, synth);
  auto o = interp::run(extended, synth.name, {synth.name});
  REQUIRE(o.kind == interp::OutcomeKind::Diverges);
  CHECK(interp::verify_cycle(extended, synth.name, false, {synth.name},
                             *o.cycle));
}

TEST_CASE("the what adversary for a constant-true decider halts on every "
          "input") {
  auto table = parse_ok(kConstants);
  auto synth = diagonal::make_what(table, ref_ok(table, "alwaysTrue"));
  auto extended = extend_checked(table, synth);
  for (const char* input : {"", "x", "what"}) {
    auto o = interp::run(extended, synth.name, {input});
    CHECK(o.kind == interp::OutcomeKind::Halted);
  }
}

TEST_CASE("liar1 adversaries print B or A per the constant decider") {
  auto table = parse_ok(kConstants);
  auto t = diagonal::make_liar1(table, ref_ok(table, "alwaysTrue"));
  auto extended_t = extend_checked(table, t);
  auto ot = interp::run(extended_t, t.name, {t.name});
  REQUIRE(ot.kind == interp::OutcomeKind::Halted);
  CHECK(ot.output == "B");

  auto f = diagonal::make_liar1(table, ref_ok(table, "alwaysFalse"));
  auto extended_f = extend_checked(table, f);
  auto of = interp::run(extended_f, f.name, {f.name});
  REQUIRE(of.kind == interp::OutcomeKind::Halted);
  CHECK(of.output == "A");
}

TEST_CASE("decider references require the two-string-to-boolean shape") {
  auto table = parse_ok(
      "procedure notAFunction(p, i: string);\nbegin\nend;\n"
      "function oneParam(p: string): boolean;\nbegin\n  oneParam := "
      "true\nend");
  CHECK(std::holds_alternative<std::string>(
      diagonal::make_decider_ref(table, "missing")));
  CHECK(std::holds_alternative<std::string>(
      diagonal::make_decider_ref(table, "notAFunction")));
  CHECK(std::holds_alternative<std::string>(
      diagonal::make_decider_ref(table, "oneParam")));
}

TEST_CASE("liar completions parse canonically and contradict themselves") {
  auto t = diagonal::liar_completion("liarTrue", true);
  auto f = diagonal::liar_completion("liarFalse", false);
  auto table_t = parse_ok(t);
  auto table_f = parse_ok(f);
  CHECK(lang::render(table_t.defs[0]) == t);
  CHECK(lang::render(table_f.defs[0]) == f);
  // Completing with "terminates" yields divergence and vice versa.
  CHECK(interp::run(table_t, "liarTrue", {}).kind ==
        interp::OutcomeKind::Diverges);
  CHECK(interp::run(table_f, "liarFalse", {}).kind ==
        interp::OutcomeKind::Halted);
}
