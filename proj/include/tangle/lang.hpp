#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

// Grammar, parser, AST, and canonical printer for the mini Pascal-like
// language all programs and deciders are written in.
//
// The language, in one breath: a source file is a sequence of procedure and
// function definitions. Parameters are strings, functions return boolean and
// deliver their result Pascal-style by assigning to their own name. There are
// no integers, arrays, or loops; recursion is the only repetition. Builtins
// lookup/concat/length/charat give deciders a minimal string toolkit.
namespace tangle::lang {

using SourceText = std::string;

// CRLF / lone CR become LF. Applied by parse() on ingestion.
SourceText normalize_newlines(std::string_view text);

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct ParseError {
  SourceLoc loc;
  std::string message;
  std::vector<std::string> expected;  // expected-token set, may be empty
  std::string to_string() const;
};

struct SemanticError {
  std::string definition;  // definition the error was found in
  SourceLoc loc;
  std::string message;
  std::string to_string() const;
};

enum class ExprKind : std::uint8_t {
  BoolLit,
  StrLit,
  Var,     // parameter, or the enclosing function's result variable
  FnCall,  // user function or builtin (length/charat)
  Not,
  Eq,      // boolean iff or string equality; operands must agree
  Concat,
  Lookup,  // source text of a named definition
};

// Statements and expressions live in per-definition arenas and refer to each
// other by index. -1 means "absent".
struct Expr {
  ExprKind kind{};
  SourceLoc loc{};
  bool bool_value = false;    // BoolLit
  std::string text;           // StrLit value; Var / FnCall name
  std::vector<int> args;      // FnCall: n; Not/Lookup: 1; Eq/Concat: 2
};

enum class StmtKind : std::uint8_t { If, Call, ResultAssign, Print };

struct Stmt {
  StmtKind kind{};
  SourceLoc loc{};
  int cond = -1;          // If
  int then_block = -1;    // If
  int else_block = -1;    // If; -1 when no else branch
  std::string name;       // Call target; ResultAssign target
  std::vector<int> args;  // Call arguments (expr ids)
  int value = -1;         // ResultAssign / Print operand (expr id)
};

using Block = std::vector<int>;  // statement ids

enum class DefKind : std::uint8_t { Procedure, Function };

struct Definition {
  std::string name;
  DefKind kind = DefKind::Procedure;
  std::vector<std::string> params;  // all of type string
  std::vector<Expr> exprs;
  std::vector<Stmt> stmts;
  std::vector<Block> blocks;
  int body = -1;  // block id
};

// Structural equality; source locations and arena layout are ignored.
bool structurally_equal(const Definition& a, const Definition& b);

// Ordered collection of definitions plus their canonical source text. The
// stored text is what lookup() hands back to programs, so it is always the
// canonical rendering, never the bytes the definition was parsed from.
struct DefinitionTable {
  std::vector<Definition> defs;
  std::vector<SourceText> sources;  // index-aligned with defs
  std::unordered_map<std::string, int> index;

  bool contains(std::string_view name) const;
  const Definition* find(std::string_view name) const;
  int find_index(std::string_view name) const;  // -1 when absent
  const SourceText* source(std::string_view name) const;
  // Appends a definition, refreshing its canonical source.
  // Returns false on a name clash.
  bool add(Definition def);
  std::size_t size() const { return defs.size(); }
};

bool table_equal(const DefinitionTable& a, const DefinitionTable& b);

// Reserved words. `print` is a statement keyword, not a callable name.
bool is_keyword(std::string_view word);

// Builtin string functions: lookup, concat, length, charat. All take and
// return strings; numeric arguments are decimal numerals ("42"), indices are
// 1-based. Returns the arity, or nullopt for non-builtins.
std::optional<int> builtin_arity(std::string_view name);

std::variant<DefinitionTable, ParseError> parse(const SourceText& src);

// Canonical form: 2-space indentation, LF line endings, no trailing
// whitespace, single quotes, no space before '('. parse(render(d)) is
// structurally equal to d for every well-formed definition.
SourceText render(const Definition& def);
SourceText render_table(const DefinitionTable& table);

// Header-local well-formedness: arity, argument types, call-target
// existence, and result-variable discipline (procedures never assign a
// result; a function assigns only to its own name). Bodies of callees are
// never consulted, only their headers. Empty = ok.
std::vector<SemanticError> validate(const DefinitionTable& table);

}  // namespace tangle::lang
