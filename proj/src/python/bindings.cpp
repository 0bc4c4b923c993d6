#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <variant>

#include "tangle/demo.hpp"
#include "tangle/diagonal.hpp"
#include "tangle/eqn.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"
#include "tangle/refuter.hpp"
#include "tangle/report.hpp"

namespace py = pybind11;

namespace {

using tangle::report::Json;

py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const Json& item : j) out.append(json_to_py(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
      }
      return out;
    }
    default: return py::none();
  }
}

struct Table {
  tangle::lang::DefinitionTable table;
};

Table parse_or_throw(const std::string& text) {
  auto parsed = tangle::lang::parse(text);
  if (auto* err = std::get_if<tangle::lang::ParseError>(&parsed)) {
    throw py::value_error(err->to_string());
  }
  return Table{std::get<tangle::lang::DefinitionTable>(std::move(parsed))};
}

std::vector<std::string> validate_table(const Table& t) {
  std::vector<std::string> out;
  for (const auto& e : tangle::lang::validate(t.table)) {
    out.push_back(e.to_string());
  }
  return out;
}

tangle::diagonal::DeciderRef decider_or_throw(const Table& t,
                                              const std::string& name) {
  auto ref = tangle::diagonal::make_decider_ref(t.table, name);
  if (auto* err = std::get_if<std::string>(&ref)) {
    throw py::value_error(*err);
  }
  return std::get<tangle::diagonal::DeciderRef>(ref);
}

tangle::refuter::Mode mode_or_throw(const std::string& mode) {
  auto m = tangle::refuter::mode_from_name(mode);
  if (!m) throw py::value_error("unknown mode '" + mode + "'");
  return *m;
}

py::object run_program(const Table& t, const std::string& proc,
                       const std::vector<std::string>& args,
                       std::uint64_t fuel) {
  tangle::interp::RunOptions opts;
  opts.fuel = fuel;
  auto outcome = tangle::interp::run(t.table, proc, args, opts);
  return json_to_py(tangle::report::outcome_payload(outcome));
}

py::object eval_function(const Table& t, const std::string& fn,
                         const std::vector<std::string>& args,
                         std::uint64_t fuel) {
  tangle::interp::RunOptions opts;
  opts.fuel = fuel;
  auto outcome = tangle::interp::eval_fn(t.table, fn, args, opts);
  return json_to_py(tangle::report::outcome_payload(outcome));
}

py::object classify_text(const std::string& text) {
  auto parsed = tangle::eqn::parse_system(text);
  if (auto* err = std::get_if<tangle::eqn::ParseError>(&parsed)) {
    throw py::value_error(err->to_string());
  }
  auto& sys = std::get<tangle::eqn::EquationSystem>(parsed);
  auto classified = tangle::eqn::classify(sys);
  if (auto* err = std::get_if<tangle::eqn::SizeLimitError>(&classified)) {
    throw py::value_error(err->to_string());
  }
  auto& c = std::get<tangle::eqn::Classification>(classified);
  return json_to_py(tangle::report::classification_payload(sys, c));
}

py::tuple synthesize(const Table& t, const std::string& decider,
                     const std::string& mode) {
  auto ref = decider_or_throw(t, decider);
  tangle::diagonal::Synthesized synth;
  switch (mode_or_throw(mode)) {
    case tangle::refuter::Mode::Halts:
      synth = tangle::diagonal::make_diag(t.table, ref);
      break;
    case tangle::refuter::Mode::What:
      synth = tangle::diagonal::make_what(t.table, ref);
      break;
    case tangle::refuter::Mode::PrintsA:
      synth = tangle::diagonal::make_liar1(t.table, ref);
      break;
  }
  return py::make_tuple(synth.name, synth.source);
}

py::object refute(const Table& t, const std::string& decider,
                  const std::string& mode, std::uint64_t decider_fuel,
                  std::uint64_t adversary_fuel) {
  auto ref = decider_or_throw(t, decider);
  tangle::refuter::Budgets budgets{decider_fuel, adversary_fuel};
  tangle::refuter::RefutationReport report;
  switch (mode_or_throw(mode)) {
    case tangle::refuter::Mode::Halts:
      report = tangle::refuter::refute_halts(t.table, ref, budgets);
      break;
    case tangle::refuter::Mode::What:
      report = tangle::refuter::audit_what(t.table, ref, budgets);
      break;
    case tangle::refuter::Mode::PrintsA:
      report = tangle::refuter::refute_property(t.table, ref, budgets);
      break;
  }
  return json_to_py(tangle::report::refutation_payload(report));
}

py::object run_demo_py() {
  auto report = tangle::demo::run_demo();
  Json j = tangle::demo::demo_payload(report);
  return json_to_py(j);
}

}  // namespace

PYBIND11_MODULE(_tangle, m) {
  m.doc() =
      "Mini-Pascal interpreter, self-referential specification classifier, "
      "and decider refuter";

  m.attr("DEFAULT_FUEL") = tangle::interp::kDefaultFuel;

  py::class_<Table>(m, "Table")
      .def("names",
           [](const Table& t) {
             std::vector<std::string> out;
             for (const auto& d : t.table.defs) out.push_back(d.name);
             return out;
           })
      .def("source",
           [](const Table& t, const std::string& name) {
             const auto* src = t.table.source(name);
             if (!src) throw py::key_error("no definition named " + name);
             return *src;
           })
      .def("render",
           [](const Table& t) { return tangle::lang::render_table(t.table); })
      .def("__len__", [](const Table& t) { return t.table.size(); })
      .def("__contains__", [](const Table& t, const std::string& name) {
        return t.table.contains(name);
      });

  m.def("parse", &parse_or_throw, py::arg("text"),
        "Parse .tangle source into a definition table.");
  m.def("validate", &validate_table, py::arg("table"),
        "Header-local checks; returns a list of error strings (empty = ok).");
  m.def("run", &run_program, py::arg("table"), py::arg("procedure"),
        py::arg("args") = std::vector<std::string>{},
        py::arg("fuel") = tangle::interp::kDefaultFuel,
        "Execute a procedure; returns the outcome as a dict.");
  m.def("eval_fn", &eval_function, py::arg("table"), py::arg("function"),
        py::arg("args") = std::vector<std::string>{},
        py::arg("fuel") = tangle::interp::kDefaultFuel,
        "Evaluate a function; Halted outcomes carry the result value.");
  m.def("classify", &classify_text, py::arg("text"),
        "Parse and classify an equation system; returns a dict with label, "
        "count, models, and explanation.");
  m.def("synthesize", &synthesize, py::arg("table"), py::arg("decider"),
        py::arg("mode") = "halts",
        "Build the adversary for a decider; returns (name, source).");
  m.def("refute", &refute, py::arg("table"), py::arg("decider"),
        py::arg("mode") = "halts",
        py::arg("decider_fuel") = tangle::interp::kDefaultFuel,
        py::arg("adversary_fuel") = tangle::interp::kDefaultFuel,
        "Probe a decider with its adversary; returns the report as a dict.");
  m.def("demo", &run_demo_py, "Run the bundled checks; returns the report.");
}
