#include "tangle/report.hpp"

#include <sstream>

#include "tangle/digest.hpp"

namespace tangle::report {

namespace {

Json value_json(const interp::Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  return std::get<std::string>(v);
}

std::string quote_output(const std::string& s) {
  return "\"" + s + "\"";
}

}  // namespace

Json outcome_payload(const interp::Outcome& outcome) {
  Json j;
  j["kind"] = std::string(interp::outcome_name(outcome.kind));
  j["steps"] = outcome.steps;
  j["output"] = outcome.output;
  if (outcome.value) {
    j["value"] = value_json(*outcome.value);
  }
  if (outcome.cycle) {
    j["witness"] = Json{{"first", outcome.cycle->first},
                        {"second", outcome.cycle->second}};
  }
  if (outcome.fault) {
    j["fault"] = std::string(interp::fault_name(*outcome.fault));
    j["detail"] = outcome.fault_detail;
  }
  return j;
}

Json classification_payload(const eqn::EquationSystem& sys,
                            const eqn::Classification& c) {
  Json j;
  j["label"] = std::string(eqn::label_name(c.label));
  j["count"] = c.count;
  Json models = Json::array();
  for (const eqn::Assignment& m : c.models) {
    Json model;
    for (std::size_t i = 0; i < m.size(); ++i) {
      model[sys.equations[i].name] = static_cast<bool>(m[i]);
    }
    models.push_back(std::move(model));
  }
  j["models"] = std::move(models);
  j["explanation"] = eqn::explain(sys, c);
  return j;
}

Json refutation_payload(const refuter::RefutationReport& report) {
  Json j;
  j["decider"] = report.decider;
  j["mode"] = std::string(refuter::mode_name(report.mode));
  j["verdict"] = std::string(refuter::verdict_name(report.verdict));
  j["anomaly"] = report.anomaly;
  j["adversary"] = Json{{"name", report.adversary_name},
                        {"source", report.adversary_source}};
  j["fuel"] = Json{{"decider", report.budgets.decider_fuel},
                   {"adversary", report.budgets.adversary_fuel}};
  j["decider_outcome"] = outcome_payload(report.decider_outcome);
  if (report.adversary_outcome) {
    j["adversary_outcome"] = outcome_payload(*report.adversary_outcome);
  } else {
    j["adversary_outcome"] = nullptr;
  }
  j["transcript"] = report.transcript;
  return j;
}

int outcome_exit(const interp::Outcome& outcome) {
  switch (outcome.kind) {
    case interp::OutcomeKind::Halted: return kExitOk;
    case interp::OutcomeKind::Diverges: return kExitDiverges;
    case interp::OutcomeKind::FuelExhausted: return kExitFuelExhausted;
    case interp::OutcomeKind::Fault: return kExitFault;
  }
  return kExitUsage;
}

int classification_exit(const eqn::Classification& c) {
  switch (c.label) {
    case eqn::Label::Determined: return kExitOk;
    case eqn::Label::Overdetermined: return kExitOverdetermined;
    case eqn::Label::Underdetermined: return kExitUnderdetermined;
  }
  return kExitUsage;
}

int refutation_exit(const refuter::RefutationReport& report) {
  switch (report.verdict) {
    case refuter::Verdict::WrongAnswer:
    case refuter::Verdict::SelfFulfilling:
      return kExitOk;
    case refuter::Verdict::NotTotal: return kExitNotTotal;
    case refuter::Verdict::Unknown: return kExitRefuteUnknown;
  }
  return kExitUsage;
}

Json envelope(std::string_view command, std::string_view inputs_digest,
              Json result, int exit_code) {
  Json j;
  j["command"] = std::string(command);
  j["inputs"] = std::string(inputs_digest);
  j["result"] = std::move(result);
  j["exit"] = exit_code;
  return j;
}

std::string inputs_digest(const std::vector<std::string>& parts) {
  std::uint64_t h = kFnvOffsetBasis;
  for (const std::string& p : parts) {
    h = fnv1a64(p, h);
    h ^= kFnvPrime;  // separator so {"ab",""} and {"a","b"} differ
    h *= kFnvPrime;
  }
  return "fnv1a64:" + hex64(h);
}

std::string human_outcome(const interp::Outcome& outcome) {
  std::ostringstream os;
  os << "outcome: " << interp::outcome_name(outcome.kind) << "\n";
  os << "steps: " << outcome.steps << "\n";
  if (outcome.value) {
    if (const bool* b = std::get_if<bool>(&*outcome.value)) {
      os << "value: " << (*b ? "true" : "false") << "\n";
    } else {
      os << "value: " << quote_output(std::get<std::string>(*outcome.value))
         << "\n";
    }
  }
  if (outcome.cycle) {
    os << "cycle: configuration at step " << outcome.cycle->first
       << " recurs at step " << outcome.cycle->second << "\n";
  }
  if (outcome.fault) {
    os << "fault: " << interp::fault_name(*outcome.fault) << " ("
       << outcome.fault_detail << ")\n";
  }
  os << "output: " << quote_output(outcome.output) << "\n";
  return os.str();
}

std::string human_classification(const eqn::EquationSystem& sys,
                                 const eqn::Classification& c) {
  std::ostringstream os;
  os << "label: " << eqn::label_name(c.label) << "\n";
  os << "count: " << c.count << "\n";
  os << eqn::explain(sys, c);
  return os.str();
}

std::string human_refutation(const refuter::RefutationReport& report) {
  std::ostringstream os;
  os << "decider: " << report.decider << "\n";
  os << "mode: " << refuter::mode_name(report.mode) << "\n";
  os << "adversary " << report.adversary_name << ":\n";
  std::istringstream src(report.adversary_source);
  for (std::string line; std::getline(src, line);) {
    os << "  " << line << "\n";
  }
  os << "decider answer: ";
  const interp::Outcome& d = report.decider_outcome;
  if (d.kind == interp::OutcomeKind::Halted && d.value &&
      std::holds_alternative<bool>(*d.value)) {
    os << (std::get<bool>(*d.value) ? "true" : "false") << " (in " << d.steps
       << " steps)\n";
  } else {
    os << interp::outcome_name(d.kind) << "\n";
  }
  if (report.adversary_outcome) {
    const interp::Outcome& a = *report.adversary_outcome;
    os << "adversary behavior: " << interp::outcome_name(a.kind);
    if (a.cycle) {
      os << " (configuration at step " << a.cycle->first << " recurs at step "
         << a.cycle->second << ")";
    }
    if (a.kind == interp::OutcomeKind::Halted) {
      os << " with output " << quote_output(a.output);
    }
    os << "\n";
  }
  os << "verdict: " << refuter::verdict_name(report.verdict) << "\n";
  if (report.anomaly) {
    os << "anomaly: observed behavior is impossible for a deterministic "
          "machine; suspect an interpreter bug\n";
  }
  return os.str();
}

}  // namespace tangle::report
