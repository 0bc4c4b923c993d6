#include "tangle/refuter.hpp"

#include <sstream>
#include <utility>
#include <variant>

#include "tangle/digest.hpp"

namespace tangle::refuter {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Halts: return "halts";
    case Mode::What: return "what";
    case Mode::PrintsA: return "prints-a";
  }
  return "?";
}

std::optional<Mode> mode_from_name(std::string_view name) {
  if (name == "halts") return Mode::Halts;
  if (name == "what") return Mode::What;
  if (name == "prints-a") return Mode::PrintsA;
  return std::nullopt;
}

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::WrongAnswer: return "WrongAnswer";
    case Verdict::NotTotal: return "NotTotal";
    case Verdict::Unknown: return "Unknown";
    case Verdict::SelfFulfilling: return "SelfFulfilling";
  }
  return "?";
}

namespace {

constexpr std::size_t kTranscriptEdge = 100;

// Keeps the first and last kTranscriptEdge trace lines; the middle is
// replaced by a single elision marker.
struct TranscriptCollector {
  std::vector<std::string> head;
  std::vector<std::string> tail;  // ring buffer once full
  std::size_t tail_next = 0;
  std::uint64_t total = 0;

  void add(const interp::TraceEvent& ev) {
    std::ostringstream os;
    os << "step=" << ev.step << " def=" << ev.definition
       << " action=" << ev.action << " locals=" << hex64(ev.bindings_digest);
    std::string line = os.str();
    ++total;
    if (head.size() < kTranscriptEdge) {
      head.push_back(std::move(line));
      return;
    }
    if (tail.size() < kTranscriptEdge) {
      tail.push_back(std::move(line));
    } else {
      tail[tail_next] = std::move(line);
      tail_next = (tail_next + 1) % kTranscriptEdge;
    }
  }

  std::vector<std::string> finish() const {
    std::vector<std::string> out = head;
    if (total > head.size() + tail.size()) {
      out.push_back("…");
    }
    for (std::size_t i = 0; i < tail.size(); ++i) {
      out.push_back(tail[(tail_next + i) % tail.size()]);
    }
    return out;
  }
};

struct Probe {
  lang::DefinitionTable extended;
  diagonal::Synthesized adversary;
  bool setup_ok = false;
};

Probe set_up(const lang::DefinitionTable& table,
             const diagonal::Synthesized& synthesized) {
  Probe p;
  p.adversary = synthesized;
  p.extended = table;
  auto parsed = lang::parse(synthesized.source);
  auto* fresh = std::get_if<lang::DefinitionTable>(&parsed);
  if (!fresh || fresh->size() != 1) return p;
  p.setup_ok = p.extended.add(std::move(fresh->defs[0]));
  return p;
}

// A boolean claim is "matched" when the adversary's behavior agrees with it:
// true ↔ Halted, false ↔ Diverges.
enum class Agreement : std::uint8_t { Matched, Contradicted, Undecided };

Agreement judge_halting(bool claim, const interp::Outcome& actual) {
  switch (actual.kind) {
    case interp::OutcomeKind::Halted:
      return claim ? Agreement::Matched : Agreement::Contradicted;
    case interp::OutcomeKind::Diverges:
      return claim ? Agreement::Contradicted : Agreement::Matched;
    case interp::OutcomeKind::FuelExhausted:
      return Agreement::Undecided;
    case interp::OutcomeKind::Fault:
      // The adversary only calls the decider, which already halted cleanly
      // on the same arguments; a fault here cannot reflect the decider.
      return Agreement::Undecided;
  }
  return Agreement::Undecided;
}

Agreement judge_prints_a(bool claim, const interp::Outcome& actual) {
  if (actual.kind != interp::OutcomeKind::Halted) {
    return Agreement::Undecided;  // liar1 halts whenever the decider did
  }
  bool printed_a = actual.output.find('A') != std::string::npos;
  return printed_a == claim ? Agreement::Matched : Agreement::Contradicted;
}

RefutationReport probe_decider(const lang::DefinitionTable& table,
                               const diagonal::DeciderRef& d, Mode mode,
                               const Budgets& budgets) {
  RefutationReport report;
  report.decider = d.name;
  report.mode = mode;
  report.budgets = budgets;

  diagonal::Synthesized synthesized;
  switch (mode) {
    case Mode::Halts: synthesized = diagonal::make_diag(table, d); break;
    case Mode::What: synthesized = diagonal::make_what(table, d); break;
    case Mode::PrintsA: synthesized = diagonal::make_liar1(table, d); break;
  }
  Probe probe = set_up(table, synthesized);
  report.adversary_name = probe.adversary.name;
  report.adversary_source = probe.adversary.source;
  if (!probe.setup_ok) {
    report.verdict = Verdict::Unknown;
    report.anomaly = true;  // synthesized source failed to parse: a bug
    return report;
  }

  TranscriptCollector decider_trace;
  interp::RunOptions decider_opts;
  decider_opts.fuel = budgets.decider_fuel;
  decider_opts.trace = [&](const interp::TraceEvent& ev) {
    decider_trace.add(ev);
  };
  report.decider_outcome =
      interp::eval_fn(probe.extended, d.name,
                      {probe.adversary.name, probe.adversary.name},
                      decider_opts);

  switch (report.decider_outcome.kind) {
    case interp::OutcomeKind::Diverges:
    case interp::OutcomeKind::Fault:
      report.verdict = Verdict::NotTotal;
      report.transcript = decider_trace.finish();
      return report;
    case interp::OutcomeKind::FuelExhausted:
      report.verdict = Verdict::Unknown;
      report.transcript = decider_trace.finish();
      return report;
    case interp::OutcomeKind::Halted:
      break;
  }

  const bool* claim = report.decider_outcome.value
                          ? std::get_if<bool>(&*report.decider_outcome.value)
                          : nullptr;
  if (!claim) {
    report.verdict = Verdict::Unknown;
    report.anomaly = true;  // a validated decider must produce a boolean
    report.transcript = decider_trace.finish();
    return report;
  }

  TranscriptCollector adversary_trace;
  interp::RunOptions adversary_opts;
  adversary_opts.fuel = budgets.adversary_fuel;
  adversary_opts.trace = [&](const interp::TraceEvent& ev) {
    adversary_trace.add(ev);
  };
  report.adversary_outcome =
      interp::run(probe.extended, probe.adversary.name,
                  {probe.adversary.name}, adversary_opts);
  report.transcript = adversary_trace.finish();

  Agreement agreement = mode == Mode::PrintsA
                            ? judge_prints_a(*claim, *report.adversary_outcome)
                            : judge_halting(*claim, *report.adversary_outcome);
  if (agreement == Agreement::Undecided) {
    report.verdict = Verdict::Unknown;
    // Anything but plain fuel exhaustion is impossible once the decider
    // halted on the same arguments.
    report.anomaly = report.adversary_outcome->kind !=
                     interp::OutcomeKind::FuelExhausted;
    return report;
  }

  if (mode == Mode::What) {
    if (agreement == Agreement::Matched) {
      report.verdict = Verdict::SelfFulfilling;
    } else {
      report.verdict = Verdict::WrongAnswer;
      report.anomaly = true;  // a total decider cannot lose at what
    }
    return report;
  }

  if (agreement == Agreement::Contradicted) {
    report.verdict = Verdict::WrongAnswer;
  } else {
    report.verdict = Verdict::Unknown;
    report.anomaly = true;  // the adversary inverts the claim by shape
  }
  return report;
}

}  // namespace

RefutationReport refute_halts(const lang::DefinitionTable& table,
                              const diagonal::DeciderRef& d,
                              const Budgets& budgets) {
  return probe_decider(table, d, Mode::Halts, budgets);
}

RefutationReport audit_what(const lang::DefinitionTable& table,
                            const diagonal::DeciderRef& d,
                            const Budgets& budgets) {
  return probe_decider(table, d, Mode::What, budgets);
}

RefutationReport refute_property(const lang::DefinitionTable& table,
                                 const diagonal::DeciderRef& d,
                                 const Budgets& budgets) {
  return probe_decider(table, d, Mode::PrintsA, budgets);
}

}  // namespace tangle::refuter
