#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "tangle/demo.hpp"
#include "tangle/diagonal.hpp"
#include "tangle/digest.hpp"
#include "tangle/eqn.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"
#include "tangle/refuter.hpp"
#include "tangle/report.hpp"

namespace {

using tangle::report::Json;

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t parse_fuel(const std::string& text, const std::string& origin) {
  if (text.empty() || text.size() > 19) {
    throw UsageError{origin + " must be a positive step count"};
  }
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw UsageError{origin + " must be a positive step count"};
    }
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (v == 0) throw UsageError{origin + " must be a positive step count"};
  return v;
}

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("TANGLE_FUEL")) {
    return parse_fuel(env, "TANGLE_FUEL");
  }
  return tangle::interp::kDefaultFuel;
}

tangle::lang::DefinitionTable load_table(const std::string& path) {
  std::string text = read_file(path);
  auto parsed = tangle::lang::parse(text);
  if (auto* err = std::get_if<tangle::lang::ParseError>(&parsed)) {
    throw UsageError{path + ": " + err->to_string()};
  }
  auto table = std::get<tangle::lang::DefinitionTable>(std::move(parsed));
  auto errors = tangle::lang::validate(table);
  if (!errors.empty()) {
    std::string msg = path + ": validation failed";
    for (const auto& e : errors) msg += "\n  " + e.to_string();
    throw UsageError{msg};
  }
  return table;
}

tangle::interp::TraceFn stderr_trace(bool enabled) {
  if (!enabled) return {};
  return [](const tangle::interp::TraceEvent& ev) {
    std::cerr << "step=" << ev.step << " def=" << ev.definition
              << " action=" << ev.action
              << " locals=" << tangle::hex64(ev.bindings_digest) << "\n";
  };
}

int emit(const Json& envelope, const std::string& human, bool json) {
  if (json) {
    std::cout << envelope.dump(2) << "\n";
  } else {
    std::cout << human;
  }
  return envelope.at("exit").get<int>();
}

int cmd_run(const std::string& path, const std::string& proc,
            const std::vector<std::string>& args, std::uint64_t fuel,
            bool json, bool trace) {
  std::string text = read_file(path);
  auto table = load_table(path);
  const tangle::lang::Definition* def = table.find(proc);
  if (!def) throw UsageError{"no definition named '" + proc + "'"};
  if (def->kind != tangle::lang::DefKind::Procedure) {
    throw UsageError{"'" + proc + "' is a function; run expects a procedure"};
  }
  if (def->params.size() != args.size()) {
    throw UsageError{"'" + proc + "' expects " +
                     std::to_string(def->params.size()) + " arguments, got " +
                     std::to_string(args.size())};
  }
  tangle::interp::RunOptions opts;
  opts.fuel = fuel;
  opts.trace = stderr_trace(trace);
  tangle::interp::Outcome outcome = tangle::interp::run(table, proc, args, opts);

  std::vector<std::string> digest_parts{text, proc};
  digest_parts.insert(digest_parts.end(), args.begin(), args.end());
  digest_parts.push_back(std::to_string(fuel));
  Json envelope = tangle::report::envelope(
      "run", tangle::report::inputs_digest(digest_parts),
      tangle::report::outcome_payload(outcome),
      tangle::report::outcome_exit(outcome));
  return emit(envelope, tangle::report::human_outcome(outcome), json);
}

int cmd_classify(const std::string& path, bool json) {
  std::string text = read_file(path);
  auto parsed = tangle::eqn::parse_system(text);
  if (auto* err = std::get_if<tangle::eqn::ParseError>(&parsed)) {
    throw UsageError{path + ": " + err->to_string()};
  }
  auto& sys = std::get<tangle::eqn::EquationSystem>(parsed);
  auto classified = tangle::eqn::classify(sys);
  if (auto* err = std::get_if<tangle::eqn::SizeLimitError>(&classified)) {
    throw UsageError{path + ": " + err->to_string()};
  }
  auto& c = std::get<tangle::eqn::Classification>(classified);
  Json envelope = tangle::report::envelope(
      "classify", tangle::report::inputs_digest({text}),
      tangle::report::classification_payload(sys, c),
      tangle::report::classification_exit(c));
  return emit(envelope, tangle::report::human_classification(sys, c), json);
}

tangle::diagonal::DeciderRef decider_or_throw(
    const tangle::lang::DefinitionTable& table, const std::string& name) {
  auto ref = tangle::diagonal::make_decider_ref(table, name);
  if (auto* err = std::get_if<std::string>(&ref)) throw UsageError{*err};
  return std::get<tangle::diagonal::DeciderRef>(ref);
}

int cmd_diag(const std::string& path, const std::string& decider,
             const std::string& mode_name, bool json) {
  std::string text = read_file(path);
  auto table = load_table(path);
  auto ref = decider_or_throw(table, decider);
  auto mode = tangle::refuter::mode_from_name(mode_name);
  if (!mode) throw UsageError{"unknown mode '" + mode_name + "'"};
  tangle::diagonal::Synthesized synth;
  switch (*mode) {
    case tangle::refuter::Mode::Halts:
      synth = tangle::diagonal::make_diag(table, ref);
      break;
    case tangle::refuter::Mode::What:
      synth = tangle::diagonal::make_what(table, ref);
      break;
    case tangle::refuter::Mode::PrintsA:
      synth = tangle::diagonal::make_liar1(table, ref);
      break;
  }
  Json result;
  result["decider"] = decider;
  result["mode"] = mode_name;
  result["name"] = synth.name;
  result["source"] = synth.source;
  Json envelope = tangle::report::envelope(
      "diag", tangle::report::inputs_digest({text, decider, mode_name}),
      std::move(result), tangle::report::kExitOk);
  std::string human = synth.name + ":\n" + synth.source + "\n";
  return emit(envelope, human, json);
}

int cmd_refute(const std::string& path, const std::string& decider,
               const std::string& mode_name, std::uint64_t fuel, bool json,
               bool trace) {
  std::string text = read_file(path);
  auto table = load_table(path);
  auto ref = decider_or_throw(table, decider);
  auto mode = tangle::refuter::mode_from_name(mode_name);
  if (!mode) throw UsageError{"unknown mode '" + mode_name + "'"};
  tangle::refuter::Budgets budgets{fuel, fuel};
  tangle::refuter::RefutationReport report;
  switch (*mode) {
    case tangle::refuter::Mode::Halts:
      report = tangle::refuter::refute_halts(table, ref, budgets);
      break;
    case tangle::refuter::Mode::What:
      report = tangle::refuter::audit_what(table, ref, budgets);
      break;
    case tangle::refuter::Mode::PrintsA:
      report = tangle::refuter::refute_property(table, ref, budgets);
      break;
  }
  if (trace) {
    for (const std::string& line : report.transcript) {
      std::cerr << line << "\n";
    }
  }
  Json envelope = tangle::report::envelope(
      "refute",
      tangle::report::inputs_digest(
          {text, decider, mode_name, std::to_string(fuel)}),
      tangle::report::refutation_payload(report),
      tangle::report::refutation_exit(report));
  return emit(envelope, tangle::report::human_refutation(report), json);
}

int cmd_demo(bool json) {
  const tangle::demo::Assets& assets = tangle::demo::bundled_assets();
  tangle::demo::DemoReport report = tangle::demo::run_demo(assets);
  Json envelope = tangle::report::envelope(
      "demo",
      tangle::report::inputs_digest(
          {assets.demo_tangle, assets.deciders_tangle, assets.liar_eqn,
           assets.truthteller_eqn, assets.bg_eqn, assets.h_eqn}),
      tangle::demo::demo_payload(report), tangle::demo::demo_exit(report));
  return emit(envelope, tangle::demo::human_demo(report), json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tangle - run mini-Pascal programs, classify self-referential boolean "
      "specifications, and refute halting/property deciders"};
  app.require_subcommand(1);

  std::string file, proc, decider, mode = "halts";
  std::vector<std::string> args;
  std::string fuel_text;
  bool json = false, trace = false;

  auto add_fuel = [&](CLI::App* cmd) {
    cmd->add_option("--fuel", fuel_text,
                    "step budget (default 1000000 or TANGLE_FUEL)");
  };
  auto add_json = [&](CLI::App* cmd) {
    cmd->add_flag("--json", json, "structured report on stdout");
  };
  auto add_trace = [&](CLI::App* cmd) {
    cmd->add_flag("--trace", trace, "step trace on stderr");
  };

  CLI::App* run = app.add_subcommand("run", "execute a procedure");
  run->add_option("file", file, "a .tangle source file")->required();
  run->add_option("procedure", proc, "procedure to execute")->required();
  run->add_option("args", args, "string arguments");
  add_fuel(run);
  add_json(run);
  add_trace(run);

  CLI::App* classify =
      app.add_subcommand("classify", "classify an equation system");
  classify->add_option("file", file, "a .eqn file")->required();
  add_json(classify);

  CLI::App* diag =
      app.add_subcommand("diag", "print the adversary for a decider");
  diag->add_option("file", file, "a .tangle source file")->required();
  diag->add_option("decider", decider, "decider function name")->required();
  diag->add_option("--mode", mode, "halts | what | prints-a")
      ->check(CLI::IsMember({"halts", "what", "prints-a"}));
  add_json(diag);

  CLI::App* refute =
      app.add_subcommand("refute", "probe a decider with its adversary");
  refute->add_option("file", file, "a .tangle source file")->required();
  refute->add_option("decider", decider, "decider function name")->required();
  refute->add_option("--mode", mode, "halts | what | prints-a")
      ->check(CLI::IsMember({"halts", "what", "prints-a"}));
  add_fuel(refute);
  add_json(refute);
  add_trace(refute);

  CLI::App* demo = app.add_subcommand("demo", "run the bundled checks");
  add_json(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return tangle::report::kExitUsage;
  }

  try {
    std::uint64_t fuel =
        fuel_text.empty() ? default_fuel() : parse_fuel(fuel_text, "--fuel");
    if (run->parsed()) return cmd_run(file, proc, args, fuel, json, trace);
    if (classify->parsed()) return cmd_classify(file, json);
    if (diag->parsed()) return cmd_diag(file, decider, mode, json);
    if (refute->parsed())
      return cmd_refute(file, decider, mode, fuel, json, trace);
    if (demo->parsed()) return cmd_demo(json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return tangle::report::kExitUsage;
  }
  return tangle::report::kExitUsage;
}
