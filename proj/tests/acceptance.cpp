// Acceptance suite: every release-gating property in one binary, one
// pass/fail line each. Run via ctest or directly:
//
//   tangle_acceptance --cli <path-to-tangle> --assets <path-to-assets>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "support/helpers.hpp"
#include "tangle/diagonal.hpp"
#include "tangle/eqn.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"
#include "tangle/refuter.hpp"

using namespace tangle;

namespace {

struct Suite {
  int failures = 0;

  void criterion(int number, const std::string& name, bool ok,
                 const std::string& detail = "") {
    std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++failures;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

lang::DefinitionTable load_programs(const std::string& path) {
  auto table = testing::parse_ok(read_file(path));
  auto errors = lang::validate(table);
  if (!errors.empty()) {
    throw std::runtime_error(path + ": " + errors[0].to_string());
  }
  return table;
}

diagonal::DeciderRef ref(const lang::DefinitionTable& table,
                         const std::string& name) {
  auto r = diagonal::make_decider_ref(table, name);
  if (auto* err = std::get_if<std::string>(&r)) {
    throw std::runtime_error(*err);
  }
  return std::get<diagonal::DeciderRef>(r);
}

const char* kTotalDeciders[] = {
    "alwaysTrue",      "alwaysFalse",      "byName",        "byGo",
    "selfEq",          "selfNeq",          "emptyInput",    "startsWithProc",
    "startsWithFun",   "evenSourceLength", "endsLikeBlock",
};

struct ClassifyExpectation {
  const char* file;
  eqn::Label label;
  std::uint64_t count;
};

// --------------------------------------------------------------------------

bool classification_exactness(const std::string& assets, std::string& note) {
  const ClassifyExpectation expectations[] = {
      {"liar.eqn", eqn::Label::Overdetermined, 0},
      {"truthteller.eqn", eqn::Label::Underdetermined, 2},
      {"bg.eqn", eqn::Label::Overdetermined, 0},
      {"h.eqn", eqn::Label::Underdetermined, 2},
  };
  for (const auto& e : expectations) {
    auto sys = testing::parse_eqn_ok(read_file(assets + "/" + e.file));
    auto c = testing::classify_ok(sys);
    if (c.label != e.label || c.count != e.count) {
      note = std::string(e.file) + " gave " +
             std::string(eqn::label_name(c.label)) + " count " +
             std::to_string(c.count);
      return false;
    }
    if (e.count == 2) {
      if (c.models[0] != eqn::Assignment{true} ||
          c.models[1] != eqn::Assignment{false}) {
        note = std::string(e.file) + " models are not {true},{false}";
        return false;
      }
    }
  }
  note = "liar 0, truthteller 2, bg 0, h 2, models exact";
  return true;
}

bool oracle_equivalence(std::string& note) {
  std::mt19937 rng(424242);
  testing::EqnGenerator gen{rng};
  for (int i = 0; i < 1000; ++i) {
    auto sys = gen.generate(8);
    auto c = testing::classify_ok(sys);
    auto oracle = testing::BruteForceOracle::solve(sys);
    std::set<std::vector<bool>> mine(c.models.begin(), c.models.end());
    if (c.count != oracle.count || mine != oracle.models) {
      note = "disagreement on system " + std::to_string(i);
      return false;
    }
  }
  note = "1000/1000 random systems agree";
  return true;
}

bool ground_truth_runs(const lang::DefinitionTable& programs,
                       std::string& note) {
  auto stop = interp::run(programs, "stop", {});
  if (stop.kind != interp::OutcomeKind::Halted) {
    note = "stop did not halt";
    return false;
  }
  auto go = interp::run(programs, "go", {});
  if (go.kind != interp::OutcomeKind::Diverges || !go.cycle) {
    note = "go did not yield a cycle";
    return false;
  }
  if (!interp::verify_cycle(programs, "go", false, {}, *go.cycle)) {
    note = "go's cycle witness failed replay";
    return false;
  }
  note = "stop Halted; go Diverges with replayable witness (" +
         std::to_string(go.cycle->first) + "," +
         std::to_string(go.cycle->second) + ")";
  return true;
}

bool witness_replays(const lang::DefinitionTable& corpus,
                     const refuter::RefutationReport& report) {
  auto extended = corpus;
  auto parsed = lang::parse(report.adversary_source);
  auto* t = std::get_if<lang::DefinitionTable>(&parsed);
  if (!t || t->size() != 1) return false;
  extended.add(std::move(t->defs[0]));
  if (!report.adversary_outcome) return false;
  const interp::Outcome& actual = *report.adversary_outcome;
  if (actual.kind == interp::OutcomeKind::Diverges) {
    return actual.cycle && interp::verify_cycle(extended,
                                                report.adversary_name, false,
                                                {report.adversary_name},
                                                *actual.cycle);
  }
  if (actual.kind != interp::OutcomeKind::Halted) return false;
  auto replay =
      interp::run(extended, report.adversary_name, {report.adversary_name});
  return interp::outcome_equal(replay, actual);
}

bool universal_refutation(const lang::DefinitionTable& corpus,
                          std::string& note) {
  int refuted = 0;
  for (const char* name : kTotalDeciders) {
    auto report = refuter::refute_halts(corpus, ref(corpus, name));
    if (report.verdict != refuter::Verdict::WrongAnswer) {
      note = std::string(name) + " got " +
             std::string(refuter::verdict_name(report.verdict));
      return false;
    }
    if (!witness_replays(corpus, report)) {
      note = std::string(name) + " produced a non-replayable witness";
      return false;
    }
    ++refuted;
  }
  note = std::to_string(refuted) + "/11 total deciders refuted, 0 survivors";
  return true;
}

bool underdetermination(const lang::DefinitionTable& corpus,
                        std::string& note) {
  std::set<interp::OutcomeKind> behaviors;
  for (const char* name : kTotalDeciders) {
    auto report = refuter::audit_what(corpus, ref(corpus, name));
    if (report.verdict != refuter::Verdict::SelfFulfilling) {
      note = std::string(name) + " got " +
             std::string(refuter::verdict_name(report.verdict));
      return false;
    }
    behaviors.insert(report.adversary_outcome->kind);
  }
  if (!behaviors.count(interp::OutcomeKind::Halted) ||
      !behaviors.count(interp::OutcomeKind::Diverges)) {
    note = "only one behavior branch was exercised";
    return false;
  }
  note = "11/11 self-fulfilling; both Halted and Diverges branches seen";
  return true;
}

bool rice_demonstration(const lang::DefinitionTable& corpus,
                        std::string& note) {
  auto t = refuter::refute_property(corpus, ref(corpus, "alwaysTrue"));
  auto f = refuter::refute_property(corpus, ref(corpus, "alwaysFalse"));
  if (t.verdict != refuter::Verdict::WrongAnswer ||
      f.verdict != refuter::Verdict::WrongAnswer) {
    note = "expected WrongAnswer for both constant deciders";
    return false;
  }
  if (!t.adversary_outcome || t.adversary_outcome->output != "B" ||
      !f.adversary_outcome || f.adversary_outcome->output != "A") {
    note = "outputs were not exactly \"B\" and \"A\"";
    return false;
  }
  note = "claimed-true printed \"B\"; claimed-false printed \"A\"";
  return true;
}

bool interpreter_properties(const lang::DefinitionTable& programs,
                            std::string& note) {
  auto exercise = [&](const lang::DefinitionTable& table,
                      const lang::Definition& d) -> bool {
    std::vector<std::string> args(d.params.size(), "x");
    bool is_fn = d.kind == lang::DefKind::Function;
    interp::RunOptions base;
    base.fuel = 400;
    auto run_with = [&](std::uint64_t fuel) {
      interp::RunOptions opts;
      opts.fuel = fuel;
      return is_fn ? interp::eval_fn(table, d.name, args, opts)
                   : interp::run(table, d.name, args, opts);
    };
    auto first = run_with(400);
    if (!interp::outcome_equal(first, run_with(400))) return false;
    if (first.kind != interp::OutcomeKind::FuelExhausted) {
      if (!interp::outcome_equal(first, run_with(4000))) return false;
    }
    if (first.kind == interp::OutcomeKind::Diverges) {
      for (std::uint64_t fuel : {400ull, 4000ull, 40000ull}) {
        auto again = run_with(fuel);
        if (again.kind != interp::OutcomeKind::Diverges) return false;
        if (!interp::outcome_equal(again, first)) return false;
      }
      if (!interp::verify_cycle(table, d.name, is_fn, args, *first.cycle)) {
        return false;
      }
    }
    return true;
  };

  for (const lang::Definition& d : programs.defs) {
    if (!exercise(programs, d)) {
      note = "demo program " + d.name + " violated a property";
      return false;
    }
  }
  std::mt19937 rng(777);
  testing::ProgramGenerator gen{rng, {}};
  int diverging = 0;
  for (int i = 0; i < 200; ++i) {
    lang::DefinitionTable table = gen.generate();
    if (!lang::validate(table).empty()) {
      note = "generator produced an invalid table";
      return false;
    }
    for (const lang::Definition& d : table.defs) {
      if (!exercise(table, d)) {
        note = "random program " + std::to_string(i) + "/" + d.name +
               " violated a property";
        return false;
      }
      std::vector<std::string> args(d.params.size(), "x");
      interp::RunOptions opts;
      opts.fuel = 400;
      auto o = d.kind == lang::DefKind::Function
                   ? interp::eval_fn(table, d.name, args, opts)
                   : interp::run(table, d.name, args, opts);
      if (o.kind == interp::OutcomeKind::Diverges) ++diverging;
    }
  }
  note = "demo corpus plus 200 random programs; " + std::to_string(diverging) +
         " diverging runs certified";
  return diverging > 0;
}

bool round_trips(const std::string& assets,
                 const lang::DefinitionTable& programs,
                 const lang::DefinitionTable& corpus, std::string& note) {
  int checked = 0;
  auto check_def = [&](const lang::Definition& d) -> bool {
    auto parsed = lang::parse(lang::render(d));
    auto* t = std::get_if<lang::DefinitionTable>(&parsed);
    if (!t || t->size() != 1) return false;
    ++checked;
    return lang::structurally_equal(d, t->defs[0]);
  };
  for (const auto& d : programs.defs) {
    if (!check_def(d)) {
      note = "demo definition " + d.name;
      return false;
    }
  }
  for (const auto& d : corpus.defs) {
    if (!check_def(d)) {
      note = "corpus definition " + d.name;
      return false;
    }
  }
  for (const char* decider : {"alwaysTrue", "byName"}) {
    auto r = ref(corpus, decider);
    for (const auto& synth :
         {diagonal::make_diag(corpus, r), diagonal::make_what(corpus, r),
          diagonal::make_liar1(corpus, r)}) {
      auto parsed = lang::parse(synth.source);
      auto* t = std::get_if<lang::DefinitionTable>(&parsed);
      if (!t || t->size() != 1 || !check_def(t->defs[0])) {
        note = "synthesized " + synth.name + " for " + decider;
        return false;
      }
      if (lang::render(t->defs[0]) != synth.source) {
        note = "synthesized " + synth.name + " is not canonical";
        return false;
      }
    }
  }
  // The bundled program file is stored in canonical form.
  std::string demo_bytes = read_file(assets + "/demo.tangle");
  if (lang::render_table(programs) != demo_bytes) {
    note = "demo.tangle is not canonical";
    return false;
  }
  note = std::to_string(checked) + " definitions round-tripped";
  return true;
}

struct CliResult {
  int exit = -1;
  std::string output;
};

CliResult run_cli(const std::string& command) {
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, n);
  }
  int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit = WEXITSTATUS(status);
  return result;
}

bool demo_determinism(const std::string& cli, std::string& note) {
  CliResult human = run_cli(cli + " demo");
  if (human.exit != 0) {
    note = "tangle demo exited " + std::to_string(human.exit);
    return false;
  }
  CliResult a = run_cli(cli + " demo --json");
  CliResult b = run_cli(cli + " demo --json");
  if (a.exit != 0 || b.exit != 0) {
    note = "tangle demo --json exited nonzero";
    return false;
  }
  if (a.output.empty() || a.output != b.output) {
    note = "JSON output differed between runs";
    return false;
  }
  note = "exit 0; " + std::to_string(a.output.size()) +
         " JSON bytes identical across two runs";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli, assets;
  for (int i = 1; i + 1 < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--cli") cli = argv[++i];
    if (arg == "--assets") assets = argv[++i];
  }
  if (cli.empty() || assets.empty()) {
    std::cerr << "usage: tangle_acceptance --cli <tangle> --assets <dir>\n";
    return 2;
  }

  Suite suite;
  try {
    auto programs = load_programs(assets + "/demo.tangle");
    auto corpus = load_programs(assets + "/deciders.tangle");

    std::string note;
    bool ok;

    ok = classification_exactness(assets, note);
    suite.criterion(1, "classification exactness", ok, note);

    ok = oracle_equivalence(note);
    suite.criterion(2, "oracle equivalence", ok, note);

    ok = ground_truth_runs(programs, note);
    suite.criterion(3, "ground-truth runs", ok, note);

    ok = universal_refutation(corpus, note);
    suite.criterion(4, "universal refutation", ok, note);

    ok = underdetermination(corpus, note);
    suite.criterion(5, "underdetermination demonstration", ok, note);

    ok = rice_demonstration(corpus, note);
    suite.criterion(6, "property (prints 'A') demonstration", ok, note);

    ok = interpreter_properties(programs, note);
    suite.criterion(7, "interpreter properties", ok, note);

    ok = round_trips(assets, programs, corpus, note);
    suite.criterion(8, "parse/render round-trip", ok, note);

    ok = demo_determinism(cli, note);
    suite.criterion(9, "demo determinism", ok, note);
  } catch (const std::exception& e) {
    std::cerr << "acceptance setup failed: " << e.what() << "\n";
    return 2;
  }

  if (suite.failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", suite.failures);
  return 1;
}
