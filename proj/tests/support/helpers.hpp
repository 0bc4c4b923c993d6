#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tangle/eqn.hpp"
#include "tangle/interp.hpp"
#include "tangle/lang.hpp"

// Shared test machinery: parse helpers, a generator of random well-formed
// programs, a generator of random equation systems, and an independent
// brute-force classifier used as the oracle for tangle::eqn::classify.
namespace tangle::testing {

inline lang::DefinitionTable parse_ok(const std::string& text) {
  auto parsed = lang::parse(text);
  if (auto* err = std::get_if<lang::ParseError>(&parsed)) {
    throw std::runtime_error("unexpected parse failure: " + err->to_string());
  }
  return std::get<lang::DefinitionTable>(std::move(parsed));
}

inline eqn::EquationSystem parse_eqn_ok(const std::string& text) {
  auto parsed = eqn::parse_system(text);
  if (auto* err = std::get_if<eqn::ParseError>(&parsed)) {
    throw std::runtime_error("unexpected parse failure: " + err->to_string());
  }
  return std::get<eqn::EquationSystem>(std::move(parsed));
}

inline eqn::Classification classify_ok(const eqn::EquationSystem& sys) {
  auto classified = eqn::classify(sys);
  if (auto* err = std::get_if<eqn::SizeLimitError>(&classified)) {
    throw std::runtime_error(err->to_string());
  }
  return std::get<eqn::Classification>(std::move(classified));
}

// ---------------------------------------------------------------------------
// Random well-formed programs
// ---------------------------------------------------------------------------

// Builds one definition's arenas incrementally.
struct DefBuilder {
  lang::Definition def;

  explicit DefBuilder(std::string name, lang::DefKind kind,
                      std::vector<std::string> params) {
    def.name = std::move(name);
    def.kind = kind;
    def.params = std::move(params);
  }

  int expr(lang::Expr e) {
    def.exprs.push_back(std::move(e));
    return static_cast<int>(def.exprs.size() - 1);
  }
  int stmt(lang::Stmt s) {
    def.stmts.push_back(std::move(s));
    return static_cast<int>(def.stmts.size() - 1);
  }
  int block(lang::Block b) {
    def.blocks.push_back(std::move(b));
    return static_cast<int>(def.blocks.size() - 1);
  }

  int bool_lit(bool v) {
    lang::Expr e;
    e.kind = lang::ExprKind::BoolLit;
    e.bool_value = v;
    return expr(std::move(e));
  }
  int str_lit(std::string v) {
    lang::Expr e;
    e.kind = lang::ExprKind::StrLit;
    e.text = std::move(v);
    return expr(std::move(e));
  }
  int var(std::string name) {
    lang::Expr e;
    e.kind = lang::ExprKind::Var;
    e.text = std::move(name);
    return expr(std::move(e));
  }
  int unary(lang::ExprKind kind, int a) {
    lang::Expr e;
    e.kind = kind;
    e.args = {a};
    return expr(std::move(e));
  }
  int binary(lang::ExprKind kind, int a, int b) {
    lang::Expr e;
    e.kind = kind;
    e.args = {a, b};
    return expr(std::move(e));
  }
  int call_expr(std::string name, std::vector<int> args) {
    lang::Expr e;
    e.kind = lang::ExprKind::FnCall;
    e.text = std::move(name);
    e.args = std::move(args);
    return expr(std::move(e));
  }
};

struct Header {
  std::string name;
  lang::DefKind kind;
  int arity;
};

struct ProgramGenerator {
  std::mt19937& rng;
  std::vector<Header> headers;

  int pick(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  }
  bool chance(int percent) { return pick(100) < percent; }

  const Header* random_of(lang::DefKind kind) {
    std::vector<const Header*> found;
    for (const Header& h : headers) {
      if (h.kind == kind) found.push_back(&h);
    }
    if (found.empty()) return nullptr;
    return found[static_cast<std::size_t>(pick(static_cast<int>(found.size())))];
  }

  // Call arguments stay leaves: a recursive call whose argument stacks
  // concat on itself would grow its state exponentially under the fuel cap.
  int gen_leaf_str(DefBuilder& b) {
    static const char* kLits[] = {"", "a", "ab", "1", "x"};
    if (!b.def.params.empty() && chance(50)) {
      return b.var(b.def.params[static_cast<std::size_t>(
          pick(static_cast<int>(b.def.params.size())))]);
    }
    return b.str_lit(kLits[pick(5)]);
  }

  int gen_str(DefBuilder& b, int depth) {
    if (depth <= 0 || chance(40)) {
      return gen_leaf_str(b);
    }
    switch (pick(4)) {
      case 0:
        return b.binary(lang::ExprKind::Concat, gen_str(b, depth - 1),
                        gen_str(b, depth - 1));
      case 1:
        return b.call_expr("length", {gen_str(b, depth - 1)});
      case 2:
        return b.call_expr("charat", {gen_str(b, depth - 1), b.str_lit("1")});
      default: {
        // Mostly resolvable lookups, with the odd miss.
        std::string name = chance(85) && !headers.empty()
                               ? headers[static_cast<std::size_t>(pick(
                                             static_cast<int>(headers.size())))]
                                     .name
                               : "nosuch";
        return b.unary(lang::ExprKind::Lookup, b.str_lit(std::move(name)));
      }
    }
  }

  int gen_bool(DefBuilder& b, int depth) {
    if (depth <= 0 || chance(35)) {
      return b.bool_lit(chance(50));
    }
    switch (pick(4)) {
      case 0:
        return b.unary(lang::ExprKind::Not, gen_bool(b, depth - 1));
      case 1:
        return b.binary(lang::ExprKind::Eq, gen_str(b, depth - 1),
                        gen_str(b, depth - 1));
      case 2: {
        int lhs = gen_bool(b, depth - 1);
        int rhs = gen_bool(b, depth - 1);
        return b.binary(lang::ExprKind::Eq, lhs, rhs);
      }
      default: {
        const Header* fn = random_of(lang::DefKind::Function);
        if (!fn) return b.bool_lit(chance(50));
        std::vector<int> args;
        for (int i = 0; i < fn->arity; ++i) args.push_back(gen_leaf_str(b));
        return b.call_expr(fn->name, std::move(args));
      }
    }
  }

  int gen_stmt(DefBuilder& b, int depth) {
    int roll = pick(b.def.kind == lang::DefKind::Function ? 10 : 7);
    if (roll < 3) {  // print
      lang::Stmt s;
      s.kind = lang::StmtKind::Print;
      s.value = chance(50) ? gen_str(b, depth) : gen_bool(b, depth);
      return b.stmt(std::move(s));
    }
    if (roll < 5) {  // call a procedure
      const Header* target = random_of(lang::DefKind::Procedure);
      if (!target) {
        lang::Stmt s;
        s.kind = lang::StmtKind::Print;
        s.value = b.str_lit("a");
        return b.stmt(std::move(s));
      }
      lang::Stmt s;
      s.kind = lang::StmtKind::Call;
      s.name = target->name;
      for (int i = 0; i < target->arity; ++i) {
        s.args.push_back(gen_leaf_str(b));
      }
      return b.stmt(std::move(s));
    }
    if (roll < 7 && depth > 0) {  // if
      lang::Stmt s;
      s.kind = lang::StmtKind::If;
      s.cond = gen_bool(b, depth);
      lang::Block then_block;
      int then_count = 1 + pick(2);
      for (int i = 0; i < then_count; ++i) {
        then_block.push_back(gen_stmt(b, depth - 1));
      }
      s.then_block = b.block(std::move(then_block));
      if (chance(50)) {
        lang::Block else_block{gen_stmt(b, depth - 1)};
        s.else_block = b.block(std::move(else_block));
      }
      return b.stmt(std::move(s));
    }
    if (b.def.kind == lang::DefKind::Function) {  // assign the result
      lang::Stmt s;
      s.kind = lang::StmtKind::ResultAssign;
      s.name = b.def.name;
      s.value = gen_bool(b, depth);
      return b.stmt(std::move(s));
    }
    lang::Stmt s;
    s.kind = lang::StmtKind::Print;
    s.value = gen_str(b, depth);
    return b.stmt(std::move(s));
  }

  lang::DefinitionTable generate() {
    static const char* kNames[] = {"alpha", "beta", "gamma"};
    static const char* kParams[] = {"p", "q"};
    int count = 1 + pick(3);
    headers.clear();
    for (int i = 0; i < count; ++i) {
      Header h;
      h.name = kNames[i];
      h.kind = chance(50) ? lang::DefKind::Procedure : lang::DefKind::Function;
      h.arity = pick(3);
      headers.push_back(std::move(h));
    }
    lang::DefinitionTable table;
    for (const Header& h : headers) {
      std::vector<std::string> params;
      for (int i = 0; i < h.arity; ++i) params.emplace_back(kParams[i]);
      DefBuilder b(h.name, h.kind, std::move(params));
      lang::Block body;
      int stmts = pick(4);
      for (int i = 0; i < stmts; ++i) body.push_back(gen_stmt(b, 2));
      b.def.body = b.block(std::move(body));
      table.add(std::move(b.def));
    }
    return table;
  }
};

// ---------------------------------------------------------------------------
// Random equation systems and the independent classification oracle
// ---------------------------------------------------------------------------

struct EqnGenerator {
  std::mt19937& rng;

  int pick(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  }

  int gen_expr(eqn::EquationSystem& sys, int names, int depth) {
    auto add = [&](eqn::Expr e) {
      sys.exprs.push_back(std::move(e));
      return static_cast<int>(sys.exprs.size() - 1);
    };
    if (depth <= 0 || pick(100) < 35) {
      switch (pick(3)) {
        case 0: {
          eqn::Expr e;
          e.kind = eqn::ExprKind::Lit;
          e.lit = pick(2) == 0;
          return add(std::move(e));
        }
        case 1: {
          eqn::Expr e;
          e.kind = eqn::ExprKind::Ref;
          e.target = pick(names);
          return add(std::move(e));
        }
        default: {
          eqn::Expr e;
          e.kind = eqn::ExprKind::Holds;
          e.target = pick(names);
          return add(std::move(e));
        }
      }
    }
    switch (pick(4)) {
      case 0: {
        int a = gen_expr(sys, names, depth - 1);
        eqn::Expr e;
        e.kind = eqn::ExprKind::Not;
        e.args = {a};
        return add(std::move(e));
      }
      case 1:
      case 2: {
        int a = gen_expr(sys, names, depth - 1);
        int b = gen_expr(sys, names, depth - 1);
        eqn::Expr e;
        e.kind = pick(2) == 0 ? eqn::ExprKind::And : eqn::ExprKind::Or;
        e.args = {a, b};
        return add(std::move(e));
      }
      default: {
        int a = gen_expr(sys, names, depth - 1);
        int b = gen_expr(sys, names, depth - 1);
        eqn::Expr e;
        e.kind = eqn::ExprKind::Eq;
        e.args = {a, b};
        return add(std::move(e));
      }
    }
  }

  eqn::EquationSystem generate(int max_names) {
    int n = 1 + pick(max_names);
    eqn::EquationSystem sys;
    for (int i = 0; i < n; ++i) {
      sys.equations.push_back({"X" + std::to_string(i), -1});
    }
    for (int i = 0; i < n; ++i) {
      sys.equations[static_cast<std::size_t>(i)].rhs = gen_expr(sys, n, 3);
    }
    return sys;
  }
};

// Deliberately different from eqn::classify: iterates assignments as an
// odometer from all-false upward and re-evaluates with its own walker.
struct BruteForceOracle {
  static bool eval(const eqn::EquationSystem& sys, int id,
                   const std::vector<bool>& v) {
    const eqn::Expr& e = sys.exprs[static_cast<std::size_t>(id)];
    switch (e.kind) {
      case eqn::ExprKind::Lit: return e.lit;
      case eqn::ExprKind::Ref:
      case eqn::ExprKind::Holds:
        return v[static_cast<std::size_t>(e.target)];
      case eqn::ExprKind::Not: return !eval(sys, e.args[0], v);
      case eqn::ExprKind::Eq:
        return eval(sys, e.args[0], v) == eval(sys, e.args[1], v);
      case eqn::ExprKind::And:
        return eval(sys, e.args[0], v) && eval(sys, e.args[1], v);
      case eqn::ExprKind::Or:
        return eval(sys, e.args[0], v) || eval(sys, e.args[1], v);
    }
    return false;
  }

  struct Result {
    std::uint64_t count = 0;
    std::set<std::vector<bool>> models;
  };

  static Result solve(const eqn::EquationSystem& sys) {
    Result r;
    std::size_t n = sys.equations.size();
    std::vector<bool> v(n, false);
    for (;;) {
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i] != eval(sys, sys.equations[i].rhs, v)) {
          all = false;
          break;
        }
      }
      if (all) {
        ++r.count;
        r.models.insert(v);
      }
      // odometer increment
      std::size_t i = 0;
      while (i < n && v[i]) {
        v[i] = false;
        ++i;
      }
      if (i == n) break;
      v[i] = true;
    }
    return r;
  }
};

}  // namespace tangle::testing
