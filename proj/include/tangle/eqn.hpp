#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Self-referential boolean equation systems: named unknowns with defining
// equations `x = φ(x, y, ...)`, classified by exhaustive enumeration of all
// assignments. `B(x)` reads the truth value of the named sentence, so a
// system can talk about its own equations.
namespace tangle::eqn {

inline constexpr int kMaxUnknowns = 20;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct ParseError {
  SourceLoc loc;
  std::string message;
  std::string to_string() const;
};

enum class ExprKind : std::uint8_t { Lit, Ref, Holds, Not, Eq, And, Or };

struct Expr {
  ExprKind kind{};
  bool lit = false;       // Lit
  int target = -1;        // Ref / Holds: unknown index
  std::vector<int> args;  // Not: 1; Eq/And/Or: 2
};

struct Equation {
  std::string name;
  int rhs = -1;  // expr id
};

struct EquationSystem {
  std::vector<Equation> equations;  // unknowns, in definition order
  std::vector<Expr> exprs;

  int unknown_index(std::string_view name) const;
};

enum class Label : std::uint8_t { Overdetermined, Determined, Underdetermined };

std::string_view label_name(Label label);

// An assignment maps unknown i (definition order) to models[i].
using Assignment = std::vector<bool>;

struct Classification {
  std::uint64_t count = 0;
  std::vector<Assignment> models;  // all of them, lexicographic, true first
  Label label = Label::Overdetermined;
};

struct SizeLimitError {
  int unknowns = 0;
  std::string to_string() const;
};

// Syntax: one equation per line or ';'-separated, `name = expr`, operators
// =, not, and, or, parentheses, literals true/false, B(name).
std::variant<EquationSystem, ParseError> parse_system(std::string_view src);

std::variant<Classification, SizeLimitError> classify(
    const EquationSystem& sys);

// Human-readable account: which equation each assignment falsifies
// (overdetermined), or the list of models.
std::string explain(const EquationSystem& sys, const Classification& c);

// Renders one assignment as "B↦true, G↦false".
std::string format_assignment(const EquationSystem& sys, const Assignment& a);

}  // namespace tangle::eqn
