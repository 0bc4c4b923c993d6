#include "tangle/demo.hpp"

#include <sstream>
#include <utility>
#include <variant>

#include "tangle/demo_assets.inc"
#include "tangle/diagonal.hpp"
#include "tangle/eqn.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"
#include "tangle/refuter.hpp"

namespace tangle::demo {

const Assets& bundled_assets() {
  static const Assets assets{
      generated::kDemoTangle, generated::kDecidersTangle,
      generated::kLiarEqn,    generated::kTruthtellerEqn,
      generated::kBgEqn,      generated::kHEqn,
  };
  return assets;
}

namespace {

std::string classify_summary(const std::string& text) {
  auto parsed = eqn::parse_system(text);
  if (auto* err = std::get_if<eqn::ParseError>(&parsed)) {
    return err->to_string();
  }
  auto& sys = std::get<eqn::EquationSystem>(parsed);
  auto classified = eqn::classify(sys);
  if (auto* err = std::get_if<eqn::SizeLimitError>(&classified)) {
    return err->to_string();
  }
  auto& c = std::get<eqn::Classification>(classified);
  std::ostringstream os;
  os << eqn::label_name(c.label) << " count=" << c.count;
  if (c.count > 0 && c.count <= 4) {
    os << " [";
    for (std::size_t i = 0; i < c.models.size(); ++i) {
      if (i) os << "; ";
      os << eqn::format_assignment(sys, c.models[i]);
    }
    os << "]";
  }
  return os.str();
}

std::string run_summary(const lang::DefinitionTable& table,
                        const std::string& proc,
                        const std::vector<std::string>& args) {
  interp::Outcome o = interp::run(table, proc, args);
  switch (o.kind) {
    case interp::OutcomeKind::Halted:
      return "Halted output='" + o.output + "'";
    case interp::OutcomeKind::Diverges: {
      bool verified = o.cycle && interp::verify_cycle(table, proc, false,
                                                      args, *o.cycle);
      return verified ? "Diverges (cycle verified)" : "Diverges (unverified)";
    }
    case interp::OutcomeKind::FuelExhausted:
      return "FuelExhausted";
    case interp::OutcomeKind::Fault:
      return "Fault " + std::string(interp::fault_name(*o.fault));
  }
  return "?";
}

std::string refute_summary(const lang::DefinitionTable& table,
                           const std::string& decider, refuter::Mode mode) {
  auto ref = diagonal::make_decider_ref(table, decider);
  if (auto* err = std::get_if<std::string>(&ref)) return *err;
  refuter::RefutationReport r;
  switch (mode) {
    case refuter::Mode::Halts:
      r = refuter::refute_halts(table, std::get<diagonal::DeciderRef>(ref));
      break;
    case refuter::Mode::What:
      r = refuter::audit_what(table, std::get<diagonal::DeciderRef>(ref));
      break;
    case refuter::Mode::PrintsA:
      r = refuter::refute_property(table,
                                   std::get<diagonal::DeciderRef>(ref));
      break;
  }
  std::ostringstream os;
  os << refuter::verdict_name(r.verdict);
  const interp::Outcome& d = r.decider_outcome;
  if (d.kind == interp::OutcomeKind::Halted && d.value &&
      std::holds_alternative<bool>(*d.value)) {
    os << " (claimed " << (std::get<bool>(*d.value) ? "true" : "false");
    if (r.adversary_outcome) {
      if (mode == refuter::Mode::PrintsA &&
          r.adversary_outcome->kind == interp::OutcomeKind::Halted) {
        os << "; output '" << r.adversary_outcome->output << "'";
      } else {
        os << "; adversary "
           << interp::outcome_name(r.adversary_outcome->kind);
      }
    }
    os << ")";
  }
  return os.str();
}

struct Runner {
  DemoReport report;

  void check(std::string name, std::string expected, std::string actual) {
    Check c{std::move(name), std::move(expected), std::move(actual), false};
    c.pass = c.expected == c.actual;
    (c.pass ? report.passed : report.failed)++;
    report.checks.push_back(std::move(c));
  }
};

}  // namespace

DemoReport run_demo(const Assets& assets) {
  Runner r;

  r.check("classify liar", "Overdetermined count=0",
          classify_summary(assets.liar_eqn));
  r.check("classify truthteller",
          "Underdetermined count=2 [U↦true; U↦false]",
          classify_summary(assets.truthteller_eqn));
  r.check("classify bg", "Overdetermined count=0",
          classify_summary(assets.bg_eqn));
  r.check("classify h", "Underdetermined count=2 [H↦true; H↦false]",
          classify_summary(assets.h_eqn));

  auto parsed_demo = lang::parse(assets.demo_tangle);
  if (auto* err = std::get_if<lang::ParseError>(&parsed_demo)) {
    r.check("parse demo programs", "ok", err->to_string());
  } else {
    auto& table = std::get<lang::DefinitionTable>(parsed_demo);
    r.check("run stop", "Halted output=''", run_summary(table, "stop", {}));
    r.check("run go", "Diverges (cycle verified)",
            run_summary(table, "go", {}));
    // Each completion of the unfinishable liar contradicts the condition it
    // stands for: true claims termination yet diverges, false claims
    // nontermination yet halts.
    r.check("liar completed with true", "Diverges (cycle verified)",
            run_summary(table, "liarTrue", {}));
    r.check("liar completed with false", "Halted output=''",
            run_summary(table, "liarFalse", {}));
  }

  auto parsed_deciders = lang::parse(assets.deciders_tangle);
  if (auto* err = std::get_if<lang::ParseError>(&parsed_deciders)) {
    r.check("parse decider corpus", "ok", err->to_string());
  } else {
    auto& table = std::get<lang::DefinitionTable>(parsed_deciders);
    r.check("refute halts alwaysTrue",
            "WrongAnswer (claimed true; adversary Diverges)",
            refute_summary(table, "alwaysTrue", refuter::Mode::Halts));
    r.check("refute halts alwaysFalse",
            "WrongAnswer (claimed false; adversary Halted)",
            refute_summary(table, "alwaysFalse", refuter::Mode::Halts));
    r.check("audit what alwaysTrue",
            "SelfFulfilling (claimed true; adversary Halted)",
            refute_summary(table, "alwaysTrue", refuter::Mode::What));
    r.check("audit what alwaysFalse",
            "SelfFulfilling (claimed false; adversary Diverges)",
            refute_summary(table, "alwaysFalse", refuter::Mode::What));
    r.check("refute prints-a alwaysTrue",
            "WrongAnswer (claimed true; output 'B')",
            refute_summary(table, "alwaysTrue", refuter::Mode::PrintsA));
    r.check("refute prints-a alwaysFalse",
            "WrongAnswer (claimed false; output 'A')",
            refute_summary(table, "alwaysFalse", refuter::Mode::PrintsA));
  }

  return r.report;
}

report::Json demo_payload(const DemoReport& report) {
  report::Json j;
  report::Json checks = report::Json::array();
  for (const Check& c : report.checks) {
    report::Json item;
    item["name"] = c.name;
    item["expected"] = c.expected;
    item["actual"] = c.actual;
    item["pass"] = c.pass;
    checks.push_back(std::move(item));
  }
  j["checks"] = std::move(checks);
  j["passed"] = report.passed;
  j["failed"] = report.failed;
  return j;
}

std::string human_demo(const DemoReport& report) {
  std::ostringstream os;
  for (const Check& c : report.checks) {
    if (c.pass) {
      os << "[ok]   " << c.name << ": " << c.actual << "\n";
    } else {
      os << "[FAIL] " << c.name << ": expected \"" << c.expected
         << "\", got \"" << c.actual << "\"\n";
    }
  }
  os << "demo: " << report.passed << "/" << (report.passed + report.failed)
     << " checks passed\n";
  return os.str();
}

int demo_exit(const DemoReport& report) {
  return report.failed == 0 ? report::kExitOk : 1;
}

}  // namespace tangle::demo
