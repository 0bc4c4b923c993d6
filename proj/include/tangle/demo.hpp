#pragma once

#include <string>
#include <vector>

#include "tangle/report.hpp"

// The bundled end-to-end demonstration: classifies the classic
// self-referential sentence systems, runs the ground-truth programs, shows
// both completions of the unfinishable liar procedure contradicting
// themselves, and refutes the two constant deciders in every mode. Each
// check compares against a frozen expectation, so the demo doubles as a
// self-test of the distribution.
namespace tangle::demo {

// Asset texts are compiled in; the demo needs no files on disk.
struct Assets {
  std::string demo_tangle;
  std::string deciders_tangle;
  std::string liar_eqn;
  std::string truthteller_eqn;
  std::string bg_eqn;
  std::string h_eqn;
};

const Assets& bundled_assets();

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct DemoReport {
  std::vector<Check> checks;
  int passed = 0;
  int failed = 0;
};

DemoReport run_demo(const Assets& assets = bundled_assets());

report::Json demo_payload(const DemoReport& report);
std::string human_demo(const DemoReport& report);
int demo_exit(const DemoReport& report);

}  // namespace tangle::demo
