#include "tangle/eqn.hpp"

#include <cctype>
#include <sstream>

namespace tangle::eqn {

namespace {

constexpr int kMaxNesting = 500;
constexpr std::size_t kExplainCap = 64;  // assignments/models listed in full

}  // namespace

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << "parse error at " << loc.line << ":" << loc.column << ": " << message;
  return os.str();
}

std::string SizeLimitError::to_string() const {
  return "system has " + std::to_string(unknowns) +
         " unknowns; the enumeration bound is " + std::to_string(kMaxUnknowns);
}

std::string_view label_name(Label label) {
  switch (label) {
    case Label::Overdetermined: return "Overdetermined";
    case Label::Determined: return "Determined";
    case Label::Underdetermined: return "Underdetermined";
  }
  return "?";
}

int EquationSystem::unknown_index(std::string_view name) const {
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (equations[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class TokKind : std::uint8_t {
  Word,
  Equal,
  LParen,
  RParen,
  Sep,  // ';' or newline
  Eof,
};

struct Token {
  TokKind kind;
  SourceLoc loc;
  std::string text;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  SourceLoc loc{1, 1};
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    SourceLoc at = loc;
    if (c == '\n' || c == ';') {
      out.push_back({TokKind::Sep, at, ""});
      advance(c);
      ++i;
    } else if (c == '\r' || std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) ||
              src[i] == '_')) {
        word += src[i];
        advance(src[i]);
        ++i;
      }
      out.push_back({TokKind::Word, at, std::move(word)});
    } else if (c == '=') {
      out.push_back({TokKind::Equal, at, "="});
      advance(c);
      ++i;
    } else if (c == '(') {
      out.push_back({TokKind::LParen, at, "("});
      advance(c);
      ++i;
    } else if (c == ')') {
      out.push_back({TokKind::RParen, at, ")"});
      advance(c);
      ++i;
    } else {
      throw ParseError{at, std::string("unexpected character '") + c + "'"};
    }
  }
  out.push_back({TokKind::Eof, loc, ""});
  return out;
}

// Unknowns are only known after the whole system is read, so references are
// collected by name and resolved in a second pass.
struct PendingExpr {
  ExprKind kind{};
  bool lit = false;
  std::string name;  // Ref / Holds target
  SourceLoc loc;
  std::vector<int> args;
};

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  int depth = 0;
  std::vector<PendingExpr> exprs;

  const Token& peek() const { return toks[pos]; }
  const Token& take() {
    const Token& t = toks[pos];
    if (pos + 1 < toks.size()) ++pos;
    return t;
  }
  bool at(TokKind k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const {
    return peek().kind == TokKind::Word && peek().text == w;
  }

  [[noreturn]] void fail(std::string msg) {
    throw ParseError{peek().loc, std::move(msg)};
  }

  int add(PendingExpr e) {
    exprs.push_back(std::move(e));
    return static_cast<int>(exprs.size() - 1);
  }

  // expr := disj ('=' disj)?   -- '=' does not chain
  int parse_expr() {
    if (++depth > kMaxNesting) fail("nesting too deep");
    int lhs = parse_disj();
    if (at(TokKind::Equal)) {
      SourceLoc at_loc = take().loc;
      int rhs = parse_disj();
      PendingExpr e;
      e.kind = ExprKind::Eq;
      e.loc = at_loc;
      e.args = {lhs, rhs};
      lhs = add(std::move(e));
    }
    --depth;
    return lhs;
  }

  int parse_disj() {
    int lhs = parse_conj();
    while (at_word("or")) {
      SourceLoc at_loc = take().loc;
      int rhs = parse_conj();
      PendingExpr e;
      e.kind = ExprKind::Or;
      e.loc = at_loc;
      e.args = {lhs, rhs};
      lhs = add(std::move(e));
    }
    return lhs;
  }

  int parse_conj() {
    int lhs = parse_neg();
    while (at_word("and")) {
      SourceLoc at_loc = take().loc;
      int rhs = parse_neg();
      PendingExpr e;
      e.kind = ExprKind::And;
      e.loc = at_loc;
      e.args = {lhs, rhs};
      lhs = add(std::move(e));
    }
    return lhs;
  }

  int parse_neg() {
    if (++depth > kMaxNesting) fail("nesting too deep");
    int result;
    if (at_word("not")) {
      SourceLoc at_loc = take().loc;
      int operand = parse_neg();
      PendingExpr e;
      e.kind = ExprKind::Not;
      e.loc = at_loc;
      e.args = {operand};
      result = add(std::move(e));
    } else {
      result = parse_atom();
    }
    --depth;
    return result;
  }

  int parse_atom() {
    const Token& t = peek();
    if (t.kind == TokKind::LParen) {
      take();
      int inner = parse_expr();
      if (!at(TokKind::RParen)) fail("expected ')'");
      take();
      return inner;
    }
    if (t.kind != TokKind::Word) fail("expected an expression");
    if (t.text == "true" || t.text == "false") {
      PendingExpr e;
      e.kind = ExprKind::Lit;
      e.lit = t.text == "true";
      e.loc = t.loc;
      take();
      return add(std::move(e));
    }
    if (t.text == "not" || t.text == "and" || t.text == "or") {
      fail("unexpected '" + t.text + "'");
    }
    std::string name = take().text;
    if (name == "B" && at(TokKind::LParen)) {
      SourceLoc at_loc = peek().loc;
      take();
      if (!at(TokKind::Word)) fail("expected a sentence name inside B(...)");
      std::string target = take().text;
      if (!at(TokKind::RParen)) fail("expected ')'");
      take();
      PendingExpr e;
      e.kind = ExprKind::Holds;
      e.name = std::move(target);
      e.loc = at_loc;
      return add(std::move(e));
    }
    PendingExpr e;
    e.kind = ExprKind::Ref;
    e.name = std::move(name);
    e.loc = t.loc;
    return add(std::move(e));
  }

  EquationSystem run() {
    EquationSystem sys;
    std::vector<int> rhs_ids;
    for (;;) {
      while (at(TokKind::Sep)) take();
      if (at(TokKind::Eof)) break;
      if (!at(TokKind::Word)) fail("expected an equation name");
      const Token& name_tok = take();
      std::string name = name_tok.text;
      if (name == "true" || name == "false" || name == "not" ||
          name == "and" || name == "or") {
        throw ParseError{name_tok.loc,
                         "'" + name + "' cannot name an unknown"};
      }
      for (const Equation& eq : sys.equations) {
        if (eq.name == name) {
          throw ParseError{name_tok.loc, "duplicate equation for '" + name +
                                             "'"};
        }
      }
      if (!at(TokKind::Equal)) fail("expected '=' after the equation name");
      take();
      int rhs = parse_expr();
      if (!at(TokKind::Sep) && !at(TokKind::Eof)) {
        fail("unexpected input after the equation");
      }
      sys.equations.push_back({std::move(name), rhs});
      rhs_ids.push_back(rhs);
    }
    // Resolve names; every Ref/Holds target must be one of the unknowns.
    sys.exprs.reserve(exprs.size());
    for (PendingExpr& p : exprs) {
      Expr e;
      e.kind = p.kind;
      e.lit = p.lit;
      e.args = std::move(p.args);
      if (p.kind == ExprKind::Ref || p.kind == ExprKind::Holds) {
        e.target = sys.unknown_index(p.name);
        if (e.target < 0) {
          throw ParseError{p.loc, "undefined name '" + p.name + "'"};
        }
      }
      sys.exprs.push_back(std::move(e));
    }
    return sys;
  }
};

bool eval(const EquationSystem& sys, int id, const Assignment& v) {
  const Expr& e = sys.exprs[static_cast<std::size_t>(id)];
  switch (e.kind) {
    case ExprKind::Lit: return e.lit;
    case ExprKind::Ref: return v[static_cast<std::size_t>(e.target)];
    case ExprKind::Holds: return v[static_cast<std::size_t>(e.target)];
    case ExprKind::Not: return !eval(sys, e.args[0], v);
    case ExprKind::Eq: return eval(sys, e.args[0], v) == eval(sys, e.args[1], v);
    case ExprKind::And: return eval(sys, e.args[0], v) && eval(sys, e.args[1], v);
    case ExprKind::Or: return eval(sys, e.args[0], v) || eval(sys, e.args[1], v);
  }
  return false;
}

// First equation the assignment falsifies, or -1 when it is a model.
int failing_equation(const EquationSystem& sys, const Assignment& v) {
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    if (v[i] != eval(sys, sys.equations[i].rhs, v)) return static_cast<int>(i);
  }
  return -1;
}

// Assignments are enumerated lexicographically with true before false, so
// the all-true assignment comes first.
Assignment assignment_at(std::size_t n, std::uint64_t ordinal) {
  Assignment v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = ((ordinal >> (n - 1 - i)) & 1) == 0;
  }
  return v;
}

}  // namespace

std::variant<EquationSystem, ParseError> parse_system(std::string_view src) {
  try {
    Parser parser{lex(src), 0, 0, {}};
    return parser.run();
  } catch (ParseError& e) {
    return e;
  }
}

std::variant<Classification, SizeLimitError> classify(
    const EquationSystem& sys) {
  std::size_t n = sys.equations.size();
  if (n > kMaxUnknowns) {
    return SizeLimitError{static_cast<int>(n)};
  }
  Classification c;
  std::uint64_t total = 1ull << n;
  for (std::uint64_t ordinal = 0; ordinal < total; ++ordinal) {
    Assignment v = assignment_at(n, ordinal);
    if (failing_equation(sys, v) < 0) {
      ++c.count;
      c.models.push_back(std::move(v));
    }
  }
  c.label = c.count == 0   ? Label::Overdetermined
            : c.count == 1 ? Label::Determined
                           : Label::Underdetermined;
  return c;
}

std::string format_assignment(const EquationSystem& sys, const Assignment& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += sys.equations[i].name;
    out += "↦";
    out += a[i] ? "true" : "false";
  }
  return out;
}

std::string explain(const EquationSystem& sys, const Classification& c) {
  std::ostringstream os;
  std::size_t n = sys.equations.size();
  std::uint64_t total = 1ull << n;
  switch (c.label) {
    case Label::Overdetermined: {
      os << "overdetermined: none of the " << total
         << " assignments satisfies the system\n";
      std::uint64_t listed = 0;
      for (std::uint64_t ordinal = 0; ordinal < total; ++ordinal) {
        if (listed == kExplainCap) {
          os << "  … (" << (total - listed) << " more)\n";
          break;
        }
        Assignment v = assignment_at(n, ordinal);
        int failing = failing_equation(sys, v);
        os << "  " << format_assignment(sys, v) << " fails equation "
           << sys.equations[static_cast<std::size_t>(failing)].name << "\n";
        ++listed;
      }
      break;
    }
    case Label::Determined:
      os << "determined: unique model\n";
      os << "  model: " << format_assignment(sys, c.models[0]) << "\n";
      break;
    case Label::Underdetermined: {
      os << "underdetermined: " << c.count << " of " << total
         << " assignments satisfy the system\n";
      std::size_t listed = 0;
      for (const Assignment& m : c.models) {
        if (listed == kExplainCap) {
          os << "  … (" << (c.models.size() - listed) << " more)\n";
          break;
        }
        os << "  model: " << format_assignment(sys, m) << "\n";
        ++listed;
      }
      break;
    }
  }
  return os.str();
}

}  // namespace tangle::eqn
