#include "tangle/lang.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <utility>

namespace tangle::lang {

namespace {

constexpr int kMaxNesting = 1000;

const std::array<std::string_view, 11> kKeywords = {
    "procedure", "function", "begin", "end",  "if",    "then",
    "else",      "not",      "true",  "false", "print",
};

const std::array<std::string_view, 4> kBuiltins = {"lookup", "concat",
                                                   "length", "charat"};

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::optional<int> builtin_arity(std::string_view name) {
  if (name == "lookup") return 1;
  if (name == "concat") return 2;
  if (name == "length") return 1;
  if (name == "charat") return 2;
  return std::nullopt;
}

SourceText normalize_newlines(std::string_view text) {
  SourceText out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      out += '\n';
    } else {
      out += c;
    }
  }
  return out;
}

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << "parse error at " << loc.line << ":" << loc.column << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << ", ";
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

std::string SemanticError::to_string() const {
  std::ostringstream os;
  os << definition << " at " << loc.line << ":" << loc.column << ": "
     << message;
  return os.str();
}

bool DefinitionTable::contains(std::string_view name) const {
  return find_index(name) >= 0;
}

int DefinitionTable::find_index(std::string_view name) const {
  auto it = index.find(std::string(name));
  return it == index.end() ? -1 : it->second;
}

const Definition* DefinitionTable::find(std::string_view name) const {
  int i = find_index(name);
  return i < 0 ? nullptr : &defs[static_cast<std::size_t>(i)];
}

const SourceText* DefinitionTable::source(std::string_view name) const {
  int i = find_index(name);
  return i < 0 ? nullptr : &sources[static_cast<std::size_t>(i)];
}

bool DefinitionTable::add(Definition def) {
  if (contains(def.name)) return false;
  index.emplace(def.name, static_cast<int>(defs.size()));
  sources.push_back(render(def));
  defs.push_back(std::move(def));
  return true;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class TokKind : std::uint8_t {
  Word,    // identifier or keyword
  String,  // decoded literal
  LParen,
  RParen,
  Comma,
  Semi,
  Colon,
  Assign,  // :=
  Equal,
  Eof,
};

struct Token {
  TokKind kind;
  SourceLoc loc;
  std::string text;  // Word: spelling; String: decoded value
};

const char* tok_name(TokKind k) {
  switch (k) {
    case TokKind::Word: return "identifier";
    case TokKind::String: return "string literal";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::Comma: return "','";
    case TokKind::Semi: return "';'";
    case TokKind::Colon: return "':'";
    case TokKind::Assign: return "':='";
    case TokKind::Equal: return "'='";
    case TokKind::Eof: return "end of input";
  }
  return "?";
}

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  SourceLoc loc{1, 1};

  explicit Lexer(std::string_view s) : src(s) {}

  bool done() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }
  char take() {
    char c = src[pos++];
    if (c == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
    return c;
  }

  [[noreturn]] void fail(SourceLoc at, std::string msg,
                         std::vector<std::string> expected = {}) {
    throw ParseError{at, std::move(msg), std::move(expected)};
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      // Skip whitespace and { ... } comments (non-nesting).
      while (!done()) {
        if (std::isspace(static_cast<unsigned char>(peek()))) {
          take();
        } else if (peek() == '{') {
          SourceLoc open = loc;
          take();
          bool closed = false;
          while (!done()) {
            if (take() == '}') {
              closed = true;
              break;
            }
          }
          if (!closed) fail(open, "unterminated comment");
        } else {
          break;
        }
      }
      if (done()) {
        out.push_back({TokKind::Eof, loc, ""});
        return out;
      }
      SourceLoc start = loc;
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string word;
        while (!done() &&
               (std::isalnum(static_cast<unsigned char>(peek())) ||
                peek() == '_')) {
          word += take();
        }
        out.push_back({TokKind::Word, start, std::move(word)});
      } else if (c == '\'') {
        take();
        std::string value;
        bool closed = false;
        while (!done()) {
          char d = peek();
          if (d == '\n') break;  // string literals stay on one line
          take();
          if (d == '\'') {
            if (!done() && peek() == '\'') {
              value += '\'';
              take();
            } else {
              closed = true;
              break;
            }
          } else {
            value += d;
          }
        }
        if (!closed) fail(start, "unterminated string literal");
        out.push_back({TokKind::String, start, std::move(value)});
      } else {
        take();
        switch (c) {
          case '(': out.push_back({TokKind::LParen, start, "("}); break;
          case ')': out.push_back({TokKind::RParen, start, ")"}); break;
          case ',': out.push_back({TokKind::Comma, start, ","}); break;
          case ';': out.push_back({TokKind::Semi, start, ";"}); break;
          case '=': out.push_back({TokKind::Equal, start, "="}); break;
          case ':':
            if (!done() && peek() == '=') {
              take();
              out.push_back({TokKind::Assign, start, ":="});
            } else {
              out.push_back({TokKind::Colon, start, ":"});
            }
            break;
          default:
            fail(start, std::string("unexpected character '") + c + "'");
        }
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  int depth = 0;

  // Current definition being built.
  Definition* def = nullptr;

  explicit Parser(std::vector<Token> t) : toks(std::move(t)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& take() {
    const Token& t = toks[pos];
    if (pos + 1 < toks.size()) ++pos;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string msg,
                         std::vector<std::string> expected = {}) {
    throw ParseError{at.loc, std::move(msg), std::move(expected)};
  }

  bool at(TokKind k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const {
    return peek().kind == TokKind::Word && peek().text == w;
  }

  const Token& expect(TokKind k, std::string what) {
    if (!at(k)) {
      fail(peek(), "found " + describe(peek()), {std::move(what)});
    }
    return take();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) {
      fail(peek(), "found " + describe(peek()),
           {"'" + std::string(w) + "'"});
    }
    take();
  }

  static std::string describe(const Token& t) {
    if (t.kind == TokKind::Word) return "'" + t.text + "'";
    if (t.kind == TokKind::String) return "string literal";
    return tok_name(t.kind);
  }

  std::string expect_identifier(std::string what) {
    if (!at(TokKind::Word) || is_keyword(peek().text)) {
      fail(peek(), "found " + describe(peek()), {std::move(what)});
    }
    return take().text;
  }

  struct NestGuard {
    Parser& p;
    explicit NestGuard(Parser& parser, const Token& at) : p(parser) {
      if (++p.depth > kMaxNesting) {
        p.fail(at, "nesting too deep");
      }
    }
    ~NestGuard() { --p.depth; }
  };

  DefinitionTable parse_table() {
    DefinitionTable table;
    // Optional ';' separators between definitions; a trailing ';' is fine.
    while (!at(TokKind::Eof)) {
      if (at(TokKind::Semi)) {
        take();
        continue;
      }
      const Token& start = peek();
      Definition d = parse_definition();
      if (table.contains(d.name)) {
        fail(start, "duplicate definition '" + d.name + "'");
      }
      table.add(std::move(d));
    }
    return table;
  }

  Definition parse_definition() {
    Definition d;
    def = &d;
    bool is_function;
    if (at_word("procedure")) {
      is_function = false;
    } else if (at_word("function")) {
      is_function = true;
    } else {
      fail(peek(), "found " + describe(peek()),
           {"'procedure'", "'function'"});
    }
    take();
    d.kind = is_function ? DefKind::Function : DefKind::Procedure;
    d.name = expect_identifier("identifier");
    if (at(TokKind::LParen)) {
      take();
      parse_param_groups(d);
      expect(TokKind::RParen, "')'");
    }
    if (is_function) {
      expect(TokKind::Colon, "':'");
      expect_word("boolean");
    }
    expect(TokKind::Semi, "';'");
    d.body = parse_block();
    def = nullptr;
    return d;
  }

  void parse_param_groups(Definition& d) {
    for (;;) {
      std::vector<std::string> group;
      group.push_back(expect_identifier("parameter name"));
      while (at(TokKind::Comma)) {
        take();
        group.push_back(expect_identifier("parameter name"));
      }
      expect(TokKind::Colon, "':'");
      const Token& ty = peek();
      expect_word("string");
      (void)ty;
      for (auto& name : group) {
        if (name == d.name) {
          fail(peek(), "parameter '" + name +
                           "' collides with the definition name");
        }
        if (std::find(d.params.begin(), d.params.end(), name) !=
            d.params.end()) {
          fail(peek(), "duplicate parameter '" + name + "'");
        }
        d.params.push_back(std::move(name));
      }
      if (at(TokKind::Semi)) {
        take();
        continue;
      }
      break;
    }
  }

  // begin [stmt (';' stmt)* [';']] end
  int parse_block() {
    const Token& open = peek();
    NestGuard guard(*this, open);
    expect_word("begin");
    Block block;
    if (!at_word("end")) {
      block.push_back(parse_stmt());
      while (at(TokKind::Semi)) {
        take();
        if (at_word("end")) break;  // trailing ';'
        block.push_back(parse_stmt());
      }
    }
    expect_word("end");
    def->blocks.push_back(std::move(block));
    return static_cast<int>(def->blocks.size() - 1);
  }

  // A branch of `if` is a single statement or a begin/end block; either way
  // it becomes a Block in the AST.
  int parse_branch() {
    if (at_word("begin")) return parse_block();
    Block block{parse_stmt()};
    def->blocks.push_back(std::move(block));
    return static_cast<int>(def->blocks.size() - 1);
  }

  int add_stmt(Stmt s) {
    def->stmts.push_back(std::move(s));
    return static_cast<int>(def->stmts.size() - 1);
  }
  int add_expr(Expr e) {
    def->exprs.push_back(std::move(e));
    return static_cast<int>(def->exprs.size() - 1);
  }

  int parse_stmt() {
    const Token& start = peek();
    NestGuard guard(*this, start);
    if (at_word("if")) {
      take();
      Stmt s;
      s.kind = StmtKind::If;
      s.loc = start.loc;
      s.cond = parse_expr();
      expect_word("then");
      s.then_block = parse_branch();
      if (at_word("else")) {
        take();
        s.else_block = parse_branch();
      }
      return add_stmt(std::move(s));
    }
    if (at_word("print")) {
      take();
      Stmt s;
      s.kind = StmtKind::Print;
      s.loc = start.loc;
      expect(TokKind::LParen, "'('");
      s.value = parse_expr();
      expect(TokKind::RParen, "')'");
      return add_stmt(std::move(s));
    }
    std::string name = expect_identifier("statement");
    if (at(TokKind::Assign)) {
      take();
      Stmt s;
      s.kind = StmtKind::ResultAssign;
      s.loc = start.loc;
      s.name = std::move(name);
      s.value = parse_expr();
      return add_stmt(std::move(s));
    }
    Stmt s;
    s.kind = StmtKind::Call;
    s.loc = start.loc;
    s.name = std::move(name);
    if (at(TokKind::LParen)) {
      take();
      if (!at(TokKind::RParen)) {
        s.args.push_back(parse_expr());
        while (at(TokKind::Comma)) {
          take();
          s.args.push_back(parse_expr());
        }
      }
      expect(TokKind::RParen, "')'");
    }
    return add_stmt(std::move(s));
  }

  // expr  := unary ('=' unary)?           -- '=' does not chain
  // unary := 'not' unary | primary
  int parse_expr() {
    const Token& start = peek();
    NestGuard guard(*this, start);
    int lhs = parse_unary();
    if (at(TokKind::Equal)) {
      const Token& eq = take();
      int rhs = parse_unary();
      Expr e;
      e.kind = ExprKind::Eq;
      e.loc = eq.loc;
      e.args = {lhs, rhs};
      return add_expr(std::move(e));
    }
    return lhs;
  }

  int parse_unary() {
    const Token& start = peek();
    NestGuard guard(*this, start);
    if (at_word("not")) {
      take();
      int operand = parse_unary();
      Expr e;
      e.kind = ExprKind::Not;
      e.loc = start.loc;
      e.args = {operand};
      return add_expr(std::move(e));
    }
    return parse_primary();
  }

  int parse_primary() {
    const Token& start = peek();
    if (at_word("true") || at_word("false")) {
      Expr e;
      e.kind = ExprKind::BoolLit;
      e.loc = start.loc;
      e.bool_value = at_word("true");
      take();
      return add_expr(std::move(e));
    }
    if (at(TokKind::String)) {
      Expr e;
      e.kind = ExprKind::StrLit;
      e.loc = start.loc;
      e.text = take().text;
      return add_expr(std::move(e));
    }
    if (at(TokKind::LParen)) {
      take();
      int inner = parse_expr();
      expect(TokKind::RParen, "')'");
      return inner;
    }
    if (!at(TokKind::Word) || is_keyword(peek().text)) {
      fail(peek(), "found " + describe(peek()), {"expression"});
    }
    std::string name = take().text;
    if (at(TokKind::LParen)) {
      take();
      std::vector<int> args;
      if (!at(TokKind::RParen)) {
        args.push_back(parse_expr());
        while (at(TokKind::Comma)) {
          take();
          args.push_back(parse_expr());
        }
      }
      expect(TokKind::RParen, "')'");
      return make_call(std::move(name), std::move(args), start.loc);
    }
    // Bare identifier: a parameter or the enclosing function's result
    // variable reads as a Var; anything else is a zero-argument call.
    bool is_param = std::find(def->params.begin(), def->params.end(), name) !=
                    def->params.end();
    bool is_result =
        def->kind == DefKind::Function && name == def->name;
    Expr e;
    if (is_param || is_result) {
      e.kind = ExprKind::Var;
    } else {
      e.kind = ExprKind::FnCall;
    }
    e.loc = start.loc;
    e.text = std::move(name);
    return add_expr(std::move(e));
  }

  // concat/lookup get dedicated nodes; their arity is part of the syntax.
  int make_call(std::string name, std::vector<int> args, SourceLoc loc) {
    Expr e;
    e.loc = loc;
    if (name == "concat") {
      if (args.size() != 2) {
        throw ParseError{loc, "concat expects 2 arguments, got " +
                                  std::to_string(args.size()),
                         {}};
      }
      e.kind = ExprKind::Concat;
      e.args = std::move(args);
    } else if (name == "lookup") {
      if (args.size() != 1) {
        throw ParseError{loc, "lookup expects 1 argument, got " +
                                  std::to_string(args.size()),
                         {}};
      }
      e.kind = ExprKind::Lookup;
      e.args = std::move(args);
    } else {
      e.kind = ExprKind::FnCall;
      e.text = std::move(name);
      e.args = std::move(args);
    }
    return add_expr(std::move(e));
  }
};

}  // namespace

std::variant<DefinitionTable, ParseError> parse(const SourceText& src) {
  try {
    SourceText normalized = normalize_newlines(src);
    Lexer lexer(normalized);
    Parser parser(lexer.run());
    return parser.parse_table();
  } catch (ParseError& e) {
    return e;
  }
}

// ---------------------------------------------------------------------------
// Canonical printer
// ---------------------------------------------------------------------------

namespace {

std::string quote(const std::string& value) {
  std::string out = "'";
  for (char c : value) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
  return out;
}

struct Renderer {
  const Definition& def;
  std::string out;

  void indent(int level) { out.append(static_cast<std::size_t>(level) * 2, ' '); }

  // Parenthesize an Eq appearing as an operand of Eq or not.
  void expr(int id, bool operand_position = false) {
    const Expr& e = def.exprs[static_cast<std::size_t>(id)];
    switch (e.kind) {
      case ExprKind::BoolLit:
        out += e.bool_value ? "true" : "false";
        break;
      case ExprKind::StrLit:
        out += quote(e.text);
        break;
      case ExprKind::Var:
        out += e.text;
        break;
      case ExprKind::FnCall:
        out += e.text;
        if (e.args.empty()) {
          // A bare name in expression position reads a variable, so
          // zero-argument calls keep their parentheses.
          out += "()";
        } else {
          call_args(e.args);
        }
        break;
      case ExprKind::Concat:
        out += "concat(";
        expr(e.args[0]);
        out += ", ";
        expr(e.args[1]);
        out += ")";
        break;
      case ExprKind::Lookup:
        out += "lookup(";
        expr(e.args[0]);
        out += ")";
        break;
      case ExprKind::Not:
        out += "not ";
        expr(e.args[0], true);
        break;
      case ExprKind::Eq:
        if (operand_position) out += "(";
        expr(e.args[0], true);
        out += " = ";
        expr(e.args[1], true);
        if (operand_position) out += ")";
        break;
    }
  }

  void call_args(const std::vector<int>& args) {
    if (args.empty()) return;  // zero-argument calls are bare names
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      expr(args[i]);
    }
    out += ")";
  }

  bool is_single_plain(int block_id) const {
    const Block& b = def.blocks[static_cast<std::size_t>(block_id)];
    return b.size() == 1 &&
           def.stmts[static_cast<std::size_t>(b[0])].kind != StmtKind::If;
  }

  // Renders a branch after 'then '/'else '. Single plain statements stay
  // inline; an else-branch holding a single if becomes an else-if chain.
  void branch(int block_id, int level, bool allow_if_inline) {
    const Block& b = def.blocks[static_cast<std::size_t>(block_id)];
    bool inline_ok =
        b.size() == 1 &&
        (allow_if_inline ||
         def.stmts[static_cast<std::size_t>(b[0])].kind != StmtKind::If);
    if (inline_ok) {
      stmt(b[0], level, /*at_line_start=*/false);
      return;
    }
    out += "begin\n";
    block_body(block_id, level + 1);
    indent(level);
    out += "end";
  }

  void block_body(int block_id, int level) {
    const Block& b = def.blocks[static_cast<std::size_t>(block_id)];
    for (std::size_t i = 0; i < b.size(); ++i) {
      indent(level);
      stmt(b[i], level, /*at_line_start=*/true);
      if (i + 1 < b.size()) out += ";";
      out += "\n";
    }
  }

  void stmt(int id, int level, bool at_line_start) {
    (void)at_line_start;
    const Stmt& s = def.stmts[static_cast<std::size_t>(id)];
    switch (s.kind) {
      case StmtKind::Call:
        out += s.name;
        call_args(s.args);
        break;
      case StmtKind::ResultAssign:
        out += s.name;
        out += " := ";
        expr(s.value);
        break;
      case StmtKind::Print:
        out += "print(";
        expr(s.value);
        out += ")";
        break;
      case StmtKind::If:
        out += "if ";
        expr(s.cond);
        out += " then ";
        branch(s.then_block, level, /*allow_if_inline=*/false);
        if (s.else_block >= 0) {
          out += "\n";
          indent(level);
          out += "else ";
          branch(s.else_block, level, /*allow_if_inline=*/true);
        }
        break;
    }
  }

  std::string run() {
    out += def.kind == DefKind::Function ? "function " : "procedure ";
    out += def.name;
    if (!def.params.empty()) {
      out += "(";
      for (std::size_t i = 0; i < def.params.size(); ++i) {
        if (i) out += ", ";
        out += def.params[i];
      }
      out += ": string)";
    }
    if (def.kind == DefKind::Function) out += ": boolean";
    out += ";\nbegin\n";
    block_body(def.body, 1);
    out += "end";
    return std::move(out);
  }
};

}  // namespace

SourceText render(const Definition& def) { return Renderer{def, {}}.run(); }

SourceText render_table(const DefinitionTable& table) {
  SourceText out;
  for (std::size_t i = 0; i < table.defs.size(); ++i) {
    if (i) out += ";\n\n";
    out += table.sources[i];
  }
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

namespace {

bool expr_equal(const Definition& a, int ia, const Definition& b, int ib) {
  const Expr& ea = a.exprs[static_cast<std::size_t>(ia)];
  const Expr& eb = b.exprs[static_cast<std::size_t>(ib)];
  if (ea.kind != eb.kind) return false;
  if (ea.kind == ExprKind::BoolLit && ea.bool_value != eb.bool_value)
    return false;
  if (ea.text != eb.text) return false;
  if (ea.args.size() != eb.args.size()) return false;
  for (std::size_t i = 0; i < ea.args.size(); ++i) {
    if (!expr_equal(a, ea.args[i], b, eb.args[i])) return false;
  }
  return true;
}

bool block_equal(const Definition& a, int ba, const Definition& b, int bb);

bool stmt_equal(const Definition& a, int ia, const Definition& b, int ib) {
  const Stmt& sa = a.stmts[static_cast<std::size_t>(ia)];
  const Stmt& sb = b.stmts[static_cast<std::size_t>(ib)];
  if (sa.kind != sb.kind || sa.name != sb.name) return false;
  switch (sa.kind) {
    case StmtKind::If: {
      if (!expr_equal(a, sa.cond, b, sb.cond)) return false;
      if (!block_equal(a, sa.then_block, b, sb.then_block)) return false;
      bool ea = sa.else_block >= 0, eb = sb.else_block >= 0;
      if (ea != eb) return false;
      return !ea || block_equal(a, sa.else_block, b, sb.else_block);
    }
    case StmtKind::Call: {
      if (sa.args.size() != sb.args.size()) return false;
      for (std::size_t i = 0; i < sa.args.size(); ++i) {
        if (!expr_equal(a, sa.args[i], b, sb.args[i])) return false;
      }
      return true;
    }
    case StmtKind::ResultAssign:
    case StmtKind::Print:
      return expr_equal(a, sa.value, b, sb.value);
  }
  return false;
}

bool block_equal(const Definition& a, int ba, const Definition& b, int bb) {
  const Block& xa = a.blocks[static_cast<std::size_t>(ba)];
  const Block& xb = b.blocks[static_cast<std::size_t>(bb)];
  if (xa.size() != xb.size()) return false;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    if (!stmt_equal(a, xa[i], b, xb[i])) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const Definition& a, const Definition& b) {
  return a.name == b.name && a.kind == b.kind && a.params == b.params &&
         block_equal(a, a.body, b, b.body);
}

bool table_equal(const DefinitionTable& a, const DefinitionTable& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a.defs[i], b.defs[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

enum class Type : std::uint8_t { Bool, Str };

struct Validator {
  const DefinitionTable& table;
  std::vector<SemanticError> errors;
  const Definition* def = nullptr;

  void report(SourceLoc loc, std::string msg) {
    errors.push_back({def ? def->name : "", loc, std::move(msg)});
  }

  // nullopt = already reported, suppress cascading errors
  std::optional<Type> infer(int expr_id) {
    const Expr& e = def->exprs[static_cast<std::size_t>(expr_id)];
    switch (e.kind) {
      case ExprKind::BoolLit:
        return Type::Bool;
      case ExprKind::StrLit:
        return Type::Str;
      case ExprKind::Var:
        // Parameters are strings; the result variable is boolean.
        if (e.text == def->name) return Type::Bool;
        return Type::Str;
      case ExprKind::Not: {
        auto t = infer(e.args[0]);
        if (t && *t != Type::Bool) {
          report(e.loc, "operand of 'not' must be boolean");
          return std::nullopt;
        }
        return t ? std::optional(Type::Bool) : std::nullopt;
      }
      case ExprKind::Eq: {
        auto lhs = infer(e.args[0]);
        auto rhs = infer(e.args[1]);
        if (lhs && rhs && *lhs != *rhs) {
          report(e.loc, "'=' requires operands of the same type");
          return std::nullopt;
        }
        if (!lhs || !rhs) return std::nullopt;
        return Type::Bool;
      }
      case ExprKind::Concat: {
        bool ok = require(e.args[0], Type::Str, "concat argument") &
                  require(e.args[1], Type::Str, "concat argument");
        return ok ? std::optional(Type::Str) : std::nullopt;
      }
      case ExprKind::Lookup: {
        bool ok = require(e.args[0], Type::Str, "lookup argument");
        return ok ? std::optional(Type::Str) : std::nullopt;
      }
      case ExprKind::FnCall:
        return infer_call(e);
    }
    return std::nullopt;
  }

  bool require(int expr_id, Type want, const char* what) {
    auto got = infer(expr_id);
    if (!got) return false;
    if (*got != want) {
      const Expr& e = def->exprs[static_cast<std::size_t>(expr_id)];
      report(e.loc, std::string(what) + " must be " +
                        (want == Type::Str ? "a string" : "boolean"));
      return false;
    }
    return true;
  }

  std::optional<Type> infer_call(const Expr& e) {
    bool args_ok = true;
    for (int a : e.args) {
      args_ok &= require(a, Type::Str, "call argument");
    }
    if (auto arity = builtin_arity(e.text)) {
      if (static_cast<int>(e.args.size()) != *arity) {
        report(e.loc, "builtin '" + e.text + "' expects " +
                          std::to_string(*arity) + " arguments, got " +
                          std::to_string(e.args.size()));
        return std::nullopt;
      }
      return args_ok ? std::optional(Type::Str) : std::nullopt;
    }
    const Definition* target = table.find(e.text);
    if (!target) {
      report(e.loc, "call to undefined name '" + e.text + "'");
      return std::nullopt;
    }
    if (target->kind != DefKind::Function) {
      report(e.loc, "'" + e.text + "' is a procedure, not a function");
      return std::nullopt;
    }
    if (target->params.size() != e.args.size()) {
      report(e.loc, "call to '" + e.text + "' expects " +
                        std::to_string(target->params.size()) +
                        " arguments, got " + std::to_string(e.args.size()));
      return std::nullopt;
    }
    return args_ok ? std::optional(Type::Bool) : std::nullopt;
  }

  void check_stmt(int stmt_id) {
    const Stmt& s = def->stmts[static_cast<std::size_t>(stmt_id)];
    switch (s.kind) {
      case StmtKind::If:
        require(s.cond, Type::Bool, "if condition");
        check_block(s.then_block);
        if (s.else_block >= 0) check_block(s.else_block);
        break;
      case StmtKind::Print:
        infer(s.value);  // either type prints
        break;
      case StmtKind::ResultAssign:
        if (def->kind != DefKind::Function) {
          report(s.loc, "result assignment inside a procedure");
        } else if (s.name != def->name) {
          report(s.loc, "assignment target '" + s.name +
                            "' is not the function's result variable");
        }
        require(s.value, Type::Bool, "function result");
        break;
      case StmtKind::Call: {
        for (int a : s.args) require(a, Type::Str, "call argument");
        if (builtin_arity(s.name)) {
          report(s.loc, "builtin '" + s.name +
                            "' is a function and cannot be called as a "
                            "statement");
          break;
        }
        const Definition* target = table.find(s.name);
        if (!target) {
          report(s.loc, "call to undefined name '" + s.name + "'");
          break;
        }
        if (target->kind != DefKind::Procedure) {
          report(s.loc,
                 "'" + s.name + "' is a function; its result must be used");
          break;
        }
        if (target->params.size() != s.args.size()) {
          report(s.loc, "call to '" + s.name + "' expects " +
                            std::to_string(target->params.size()) +
                            " arguments, got " +
                            std::to_string(s.args.size()));
        }
        break;
      }
    }
  }

  void check_block(int block_id) {
    for (int sid : def->blocks[static_cast<std::size_t>(block_id)]) {
      check_stmt(sid);
    }
  }

  std::vector<SemanticError> run() {
    for (const Definition& d : table.defs) {
      def = &d;
      if (builtin_arity(d.name)) {
        report({}, "'" + d.name + "' shadows a builtin function");
      }
      check_block(d.body);
    }
    return std::move(errors);
  }
};

}  // namespace

std::vector<SemanticError> validate(const DefinitionTable& table) {
  return Validator{table, {}, nullptr}.run();
}

}  // namespace tangle::lang
