#include "tangle/interp.hpp"

#include <cassert>
#include <cstring>
#include <unordered_map>
#include <utility>

#include "tangle/digest.hpp"

namespace tangle::interp {

std::string_view fault_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::UndefinedName: return "undefined-name";
    case FaultKind::Arity: return "arity";
    case FaultKind::Type: return "type";
    case FaultKind::LookupMiss: return "lookup-miss";
    case FaultKind::NoResultAssigned: return "no-result-assigned";
  }
  return "?";
}

std::string_view outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Halted: return "Halted";
    case OutcomeKind::Diverges: return "Diverges";
    case OutcomeKind::FuelExhausted: return "FuelExhausted";
    case OutcomeKind::Fault: return "Fault";
  }
  return "?";
}

bool outcome_equal(const Outcome& a, const Outcome& b) {
  if (a.kind != b.kind || a.output != b.output || a.steps != b.steps)
    return false;
  if (a.value.has_value() != b.value.has_value()) return false;
  if (a.value && *a.value != *b.value) return false;
  if (a.cycle.has_value() != b.cycle.has_value()) return false;
  if (a.cycle && (a.cycle->first != b.cycle->first ||
                  a.cycle->second != b.cycle->second))
    return false;
  if (a.fault != b.fault || a.fault_detail != b.fault_detail) return false;
  return true;
}

namespace {

using lang::DefKind;
using lang::Definition;
using lang::DefinitionTable;
using lang::Expr;
using lang::ExprKind;
using lang::Stmt;
using lang::StmtKind;

// One work item per pending machine action. The work stack, value stack, and
// frame stack together are the Configuration; the output buffer is excluded
// (it is write-only and cannot influence control).
enum class WorkKind : std::uint8_t {
  Seq,           // def, block, position
  StmtDispatch,  // def, stmt
  ExprDispatch,  // def, expr
  Branch,        // def, stmt (If); pops the condition value
  CallApply,     // def, stmt (Call); pops the arguments
  InvokeApply,   // def, expr (FnCall); pops the arguments
  StoreResult,   // def, stmt; pops the result value
  PrintApply,    // def, stmt; pops the printed value
  NotApply,      // def, expr
  EqApply,       // def, expr
  ConcatApply,   // def, expr
  LookupApply,   // def, expr
  ProcExit,      // pop the top (procedure) frame
  FnExit,        // pop the top (function) frame, pushing its result
};

struct WorkItem {
  WorkKind kind{};
  std::int32_t def = -1;
  std::int32_t a = -1;
  std::int32_t b = -1;
};

struct Frame {
  std::int32_t def = -1;
  std::vector<Value> locals;  // parameters, in declaration order
  bool result_assigned = false;
  Value result;
};

struct FaultInfo {
  FaultKind kind;
  std::string detail;
};

void append_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf += static_cast<char>((v >> (8 * i)) & 0xff);
}

void append_value(std::string& buf, const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) {
    buf += 'B';
    buf += *b ? '\1' : '\0';
  } else {
    const std::string& s = std::get<std::string>(v);
    buf += 'S';
    append_u32(buf, static_cast<std::uint32_t>(s.size()));
    buf += s;
  }
}

// ---------------------------------------------------------------------------
// Incremental configuration hashing
//
// Divergence detection needs the hash of the full configuration after every
// step, but a step only touches the tops of the three stacks. Each stack
// keeps a chain of prefix hashes (one entry per item), so a push costs one
// item digest and a pop is a pop_back. Equal configurations always produce
// equal chain values; a hash match is then confirmed by a byte-exact replay
// before Diverges is reported, so collisions cannot forge a verdict.
// ---------------------------------------------------------------------------

struct H2 {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

constexpr std::uint64_t kSeedB = 0x9e3779b97f4a7c15ull;

inline std::uint64_t fnv_byte(std::uint64_t h, unsigned char c) {
  return (h ^ c) * kFnvPrime;
}

inline std::uint64_t fnv_u32(std::uint64_t h, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) h = fnv_byte(h, (v >> (8 * i)) & 0xff);
  return h;
}

inline std::uint64_t fnv_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) h = fnv_byte(h, (v >> (8 * i)) & 0xff);
  return h;
}

inline std::uint64_t fnv_bytes(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) h = fnv_byte(h, c);
  return h;
}

inline H2 chain(H2 prefix, H2 item) {
  return {fnv_u64(fnv_u64(prefix.a, item.a), item.b),
          fnv_u64(fnv_u64(prefix.b, item.b), item.a)};
}

H2 value_digest(const Value& v) {
  H2 h{kFnvOffsetBasis, kSeedB};
  if (const bool* b = std::get_if<bool>(&v)) {
    h.a = fnv_byte(fnv_byte(h.a, 'B'), *b);
    h.b = fnv_byte(fnv_byte(h.b, 'B'), *b);
  } else {
    const std::string& s = std::get<std::string>(v);
    h.a = fnv_bytes(fnv_u32(fnv_byte(h.a, 'S'),
                            static_cast<std::uint32_t>(s.size())),
                    s);
    h.b = fnv_bytes(fnv_u32(fnv_byte(h.b, 'S'),
                            static_cast<std::uint32_t>(s.size())),
                    s);
  }
  return h;
}

H2 work_digest(const WorkItem& w) {
  H2 h{kFnvOffsetBasis, kSeedB};
  std::uint64_t packed = (static_cast<std::uint64_t>(w.kind) << 32) ^
                         static_cast<std::uint32_t>(w.def);
  std::uint64_t packed2 = (static_cast<std::uint64_t>(
                               static_cast<std::uint32_t>(w.a))
                           << 32) ^
                          static_cast<std::uint32_t>(w.b);
  h.a = fnv_u64(fnv_u64(h.a, packed), packed2);
  h.b = fnv_u64(fnv_u64(h.b, packed2), packed);
  return h;
}

H2 frame_digest(const Frame& f) {
  H2 h{kFnvOffsetBasis, kSeedB};
  h.a = fnv_u32(h.a, static_cast<std::uint32_t>(f.def));
  h.b = fnv_u32(h.b, static_cast<std::uint32_t>(f.def));
  for (const Value& v : f.locals) {
    h = chain(h, value_digest(v));
  }
  h.a = fnv_byte(h.a, f.result_assigned);
  h.b = fnv_byte(h.b, f.result_assigned);
  if (f.result_assigned) h = chain(h, value_digest(f.result));
  return h;
}

struct Machine {
  const DefinitionTable& table;
  std::vector<Frame> frames;
  std::vector<WorkItem> work;
  std::vector<Value> values;
  std::string output;
  std::optional<FaultInfo> fault;
  // Prefix-hash chains, index-aligned one past their stacks.
  std::vector<H2> frame_pref{{0x1000, 0x1001}};
  std::vector<H2> work_pref{{0x2000, 0x2001}};
  std::vector<H2> value_pref{{0x3000, 0x3001}};

  explicit Machine(const DefinitionTable& t) : table(t) {}

  const Definition& def_at(std::int32_t i) const {
    return table.defs[static_cast<std::size_t>(i)];
  }

  void fail(FaultKind kind, std::string detail) {
    fault = FaultInfo{kind, std::move(detail)};
  }

  H2 config_hash() const {
    H2 h = frame_pref.back();
    h = chain(h, work_pref.back());
    h = chain(h, value_pref.back());
    return h;
  }

  // --- stack mutations; every change goes through these ---

  void push(WorkKind kind, std::int32_t def = -1, std::int32_t a = -1,
            std::int32_t b = -1) {
    WorkItem item{kind, def, a, b};
    work_pref.push_back(chain(work_pref.back(), work_digest(item)));
    work.push_back(item);
  }

  WorkItem pop_work() {
    WorkItem item = work.back();
    work.pop_back();
    work_pref.pop_back();
    return item;
  }

  void push_value(Value v) {
    value_pref.push_back(chain(value_pref.back(), value_digest(v)));
    values.push_back(std::move(v));
  }

  void push_frame(Frame f) {
    frame_pref.push_back(chain(frame_pref.back(), frame_digest(f)));
    frames.push_back(std::move(f));
  }

  void pop_frame() {
    frames.pop_back();
    frame_pref.pop_back();
  }

  void set_result(Value v) {
    Frame& f = frames.back();
    f.result = std::move(v);
    f.result_assigned = true;
    frame_pref.pop_back();
    frame_pref.push_back(chain(frame_pref.back(), frame_digest(f)));
  }

  bool pop_value(Value& out) {
    if (values.empty()) {
      fail(FaultKind::Type, "internal: value stack underflow");
      return false;
    }
    out = std::move(values.back());
    values.pop_back();
    value_pref.pop_back();
    return true;
  }

  bool pop_bool(bool& out, const char* what) {
    Value v;
    if (!pop_value(v)) return false;
    if (const bool* b = std::get_if<bool>(&v)) {
      out = *b;
      return true;
    }
    fail(FaultKind::Type, std::string(what) + " is not boolean");
    return false;
  }

  bool pop_string(std::string& out, const char* what) {
    Value v;
    if (!pop_value(v)) return false;
    if (std::string* s = std::get_if<std::string>(&v)) {
      out = std::move(*s);
      return true;
    }
    fail(FaultKind::Type, std::string(what) + " is not a string");
    return false;
  }

  // Pops argc values in evaluation order.
  std::vector<Value> pop_args(std::size_t argc) {
    if (values.size() < argc) {
      fail(FaultKind::Type, "internal: value stack underflow");
      return {};
    }
    std::vector<Value> args(values.end() - static_cast<long>(argc),
                            values.end());
    values.resize(values.size() - argc);
    value_pref.resize(value_pref.size() - argc);
    return args;
  }

  // Byte-exact encoding used by replay verification.
  void serialize(std::string& buf) const {
    append_u32(buf, static_cast<std::uint32_t>(frames.size()));
    for (const Frame& f : frames) {
      append_u32(buf, static_cast<std::uint32_t>(f.def));
      append_u32(buf, static_cast<std::uint32_t>(f.locals.size()));
      for (const Value& v : f.locals) append_value(buf, v);
      buf += f.result_assigned ? '\1' : '\0';
      if (f.result_assigned) append_value(buf, f.result);
    }
    append_u32(buf, static_cast<std::uint32_t>(work.size()));
    for (const WorkItem& w : work) {
      buf += static_cast<char>(w.kind);
      append_u32(buf, static_cast<std::uint32_t>(w.def));
      append_u32(buf, static_cast<std::uint32_t>(w.a));
      append_u32(buf, static_cast<std::uint32_t>(w.b));
    }
    append_u32(buf, static_cast<std::uint32_t>(values.size()));
    for (const Value& v : values) append_value(buf, v);
  }

  void dispatch_stmt(const WorkItem& item) {
    const Stmt& s = def_at(item.def).stmts[static_cast<std::size_t>(item.a)];
    switch (s.kind) {
      case StmtKind::If:
        push(WorkKind::Branch, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, s.cond);
        break;
      case StmtKind::Print:
        push(WorkKind::PrintApply, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, s.value);
        break;
      case StmtKind::ResultAssign:
        push(WorkKind::StoreResult, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, s.value);
        break;
      case StmtKind::Call:
        push(WorkKind::CallApply, item.def, item.a);
        for (std::size_t i = s.args.size(); i-- > 0;) {
          push(WorkKind::ExprDispatch, item.def, s.args[i]);
        }
        break;
    }
  }

  void dispatch_expr(const WorkItem& item) {
    const Definition& d = def_at(item.def);
    const Expr& e = d.exprs[static_cast<std::size_t>(item.a)];
    switch (e.kind) {
      case ExprKind::BoolLit:
        push_value(e.bool_value);
        break;
      case ExprKind::StrLit:
        push_value(e.text);
        break;
      case ExprKind::Var: {
        Frame& f = frames.back();
        if (e.text == d.name) {
          if (!f.result_assigned) {
            fail(FaultKind::UndefinedName,
                 "result variable '" + e.text + "' read before assignment");
            return;
          }
          push_value(f.result);
          return;
        }
        for (std::size_t i = 0; i < d.params.size(); ++i) {
          if (d.params[i] == e.text) {
            push_value(f.locals[i]);
            return;
          }
        }
        fail(FaultKind::UndefinedName, "unknown variable '" + e.text + "'");
        break;
      }
      case ExprKind::Not:
        push(WorkKind::NotApply, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, e.args[0]);
        break;
      case ExprKind::Eq:
        push(WorkKind::EqApply, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, e.args[1]);
        push(WorkKind::ExprDispatch, item.def, e.args[0]);
        break;
      case ExprKind::Concat:
        push(WorkKind::ConcatApply, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, e.args[1]);
        push(WorkKind::ExprDispatch, item.def, e.args[0]);
        break;
      case ExprKind::Lookup:
        push(WorkKind::LookupApply, item.def, item.a);
        push(WorkKind::ExprDispatch, item.def, e.args[0]);
        break;
      case ExprKind::FnCall:
        push(WorkKind::InvokeApply, item.def, item.a);
        for (std::size_t i = e.args.size(); i-- > 0;) {
          push(WorkKind::ExprDispatch, item.def, e.args[i]);
        }
        break;
    }
  }

  void apply_branch(const WorkItem& item) {
    const Stmt& s = def_at(item.def).stmts[static_cast<std::size_t>(item.a)];
    bool cond;
    if (!pop_bool(cond, "if condition")) return;
    if (cond) {
      push(WorkKind::Seq, item.def, s.then_block, 0);
    } else if (s.else_block >= 0) {
      push(WorkKind::Seq, item.def, s.else_block, 0);
    }
  }

  // Procedure call. A call whose frame has nothing left to do but exit
  // replaces that frame instead of stacking a new one; self-recursive loops
  // like `procedure go; begin go end` therefore revisit the same
  // configuration instead of growing without bound.
  void apply_call(const WorkItem& item) {
    const Stmt& s = def_at(item.def).stmts[static_cast<std::size_t>(item.a)];
    std::vector<Value> args = pop_args(s.args.size());
    if (fault) return;
    int target = table.find_index(s.name);
    if (target < 0) {
      fail(FaultKind::UndefinedName,
           "call to undefined name '" + s.name + "'");
      return;
    }
    const Definition& td = table.defs[static_cast<std::size_t>(target)];
    if (td.kind != DefKind::Procedure) {
      fail(FaultKind::Type, "'" + s.name + "' is not a procedure");
      return;
    }
    if (td.params.size() != args.size()) {
      fail(FaultKind::Arity, "call to '" + s.name + "' expects " +
                                 std::to_string(td.params.size()) +
                                 " arguments, got " +
                                 std::to_string(args.size()));
      return;
    }
    if (!work.empty() && work.back().kind == WorkKind::ProcExit) {
      pop_frame();  // tail call: the pending exit now closes the callee
    } else {
      push(WorkKind::ProcExit);
    }
    push_frame(Frame{target, std::move(args), false, {}});
    push(WorkKind::Seq, target, td.body, 0);
  }

  // Function call: builtins compute immediately; user functions push a
  // frame. `f := g(...)` in tail position collapses the caller frame the
  // same way tail procedure calls do.
  void apply_invoke(const WorkItem& item) {
    const Expr& e = def_at(item.def).exprs[static_cast<std::size_t>(item.a)];
    std::vector<Value> args = pop_args(e.args.size());
    if (fault) return;
    if (lang::builtin_arity(e.text)) {
      apply_builtin(e.text, args);
      return;
    }
    int target = table.find_index(e.text);
    if (target < 0) {
      fail(FaultKind::UndefinedName,
           "call to undefined name '" + e.text + "'");
      return;
    }
    const Definition& td = table.defs[static_cast<std::size_t>(target)];
    if (td.kind != DefKind::Function) {
      fail(FaultKind::Type, "'" + e.text + "' is not a function");
      return;
    }
    if (td.params.size() != args.size()) {
      fail(FaultKind::Arity, "call to '" + e.text + "' expects " +
                                 std::to_string(td.params.size()) +
                                 " arguments, got " +
                                 std::to_string(args.size()));
      return;
    }
    std::size_t n = work.size();
    if (n >= 2 && work[n - 1].kind == WorkKind::StoreResult &&
        work[n - 2].kind == WorkKind::FnExit) {
      pop_work();   // the store-and-return pattern passes the value up
      pop_frame();  // unchanged FnExit now closes the callee
    } else {
      push(WorkKind::FnExit);
    }
    push_frame(Frame{target, std::move(args), false, {}});
    push(WorkKind::Seq, target, td.body, 0);
  }

  void apply_builtin(const std::string& name, std::vector<Value>& args) {
    std::vector<std::string> strs;
    strs.reserve(args.size());
    for (Value& v : args) {
      if (std::string* s = std::get_if<std::string>(&v)) {
        strs.push_back(std::move(*s));
      } else {
        fail(FaultKind::Type, "argument of '" + name + "' is not a string");
        return;
      }
    }
    if (name == "lookup") {
      const lang::SourceText* src = table.source(strs[0]);
      if (!src) {
        fail(FaultKind::LookupMiss, "no definition named '" + strs[0] + "'");
        return;
      }
      push_value(*src);
    } else if (name == "concat") {
      push_value(strs[0] + strs[1]);
    } else if (name == "length") {
      push_value(std::to_string(strs[0].size()));
    } else if (name == "charat") {
      const std::string& s = strs[0];
      const std::string& ix = strs[1];
      bool numeric = !ix.empty() && ix.size() <= 19;
      std::uint64_t v = 0;
      for (char c : ix) {
        if (c < '0' || c > '9') {
          numeric = false;
          break;
        }
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
      }
      if (!numeric) {
        fail(FaultKind::Type, "charat index '" + ix + "' is not a decimal "
                              "numeral");
        return;
      }
      if (v < 1 || v > s.size()) {
        fail(FaultKind::Type, "charat index " + ix + " out of range for a "
                              "string of length " + std::to_string(s.size()));
        return;
      }
      push_value(std::string(1, s[v - 1]));
    } else {
      fail(FaultKind::UndefinedName, "unknown builtin '" + name + "'");
    }
  }

  void append_printed(const Value& v) {
    if (const bool* b = std::get_if<bool>(&v)) {
      output += *b ? "true" : "false";
    } else {
      output += std::get<std::string>(v);
    }
  }

  void step() {
    WorkItem item = pop_work();
    switch (item.kind) {
      case WorkKind::Seq: {
        const lang::Block& block =
            def_at(item.def).blocks[static_cast<std::size_t>(item.a)];
        if (static_cast<std::size_t>(item.b) < block.size()) {
          if (static_cast<std::size_t>(item.b) + 1 < block.size()) {
            push(WorkKind::Seq, item.def, item.a, item.b + 1);
          }
          push(WorkKind::StmtDispatch, item.def,
               block[static_cast<std::size_t>(item.b)]);
        }
        break;
      }
      case WorkKind::StmtDispatch: dispatch_stmt(item); break;
      case WorkKind::ExprDispatch: dispatch_expr(item); break;
      case WorkKind::Branch: apply_branch(item); break;
      case WorkKind::CallApply: apply_call(item); break;
      case WorkKind::InvokeApply: apply_invoke(item); break;
      case WorkKind::StoreResult: {
        Value v;
        if (!pop_value(v)) return;
        if (!std::holds_alternative<bool>(v)) {
          fail(FaultKind::Type, "function result is not boolean");
          return;
        }
        set_result(std::move(v));
        break;
      }
      case WorkKind::PrintApply: {
        Value v;
        if (!pop_value(v)) return;
        append_printed(v);
        break;
      }
      case WorkKind::NotApply: {
        bool b;
        if (!pop_bool(b, "operand of 'not'")) return;
        push_value(!b);
        break;
      }
      case WorkKind::EqApply: {
        Value rhs, lhs;
        if (!pop_value(rhs) || !pop_value(lhs)) return;
        if (lhs.index() != rhs.index()) {
          fail(FaultKind::Type, "'=' operands have different types");
          return;
        }
        push_value(lhs == rhs);
        break;
      }
      case WorkKind::ConcatApply: {
        std::string rhs, lhs;
        if (!pop_string(rhs, "concat argument") ||
            !pop_string(lhs, "concat argument"))
          return;
        push_value(lhs + rhs);
        break;
      }
      case WorkKind::LookupApply: {
        std::string name;
        if (!pop_string(name, "lookup argument")) return;
        const lang::SourceText* src = table.source(name);
        if (!src) {
          fail(FaultKind::LookupMiss, "no definition named '" + name + "'");
          return;
        }
        push_value(*src);
        break;
      }
      case WorkKind::ProcExit:
        pop_frame();
        break;
      case WorkKind::FnExit: {
        Frame& f = frames.back();
        if (!f.result_assigned) {
          fail(FaultKind::NoResultAssigned,
               "'" + def_at(f.def).name +
                   "' halted without assigning its result");
          return;
        }
        Value v = std::move(f.result);
        pop_frame();
        push_value(std::move(v));
        break;
      }
    }
  }

  std::string describe_top() const {
    if (work.empty()) return "halt";
    const WorkItem& w = work.back();
    auto at = [&](const char* label) {
      return std::string(label) + " " + def_at(w.def).name + "#" +
             std::to_string(w.a);
    };
    switch (w.kind) {
      case WorkKind::Seq:
        return "seq " + def_at(w.def).name + " b" + std::to_string(w.a) +
               "+" + std::to_string(w.b);
      case WorkKind::StmtDispatch: return at("stmt");
      case WorkKind::ExprDispatch: return at("expr");
      case WorkKind::Branch: return at("branch");
      case WorkKind::CallApply: return at("call");
      case WorkKind::InvokeApply: return at("invoke");
      case WorkKind::StoreResult: return at("store");
      case WorkKind::PrintApply: return at("print");
      case WorkKind::NotApply: return at("not");
      case WorkKind::EqApply: return at("eq");
      case WorkKind::ConcatApply: return at("concat");
      case WorkKind::LookupApply: return at("lookup");
      case WorkKind::ProcExit: return "proc-exit";
      case WorkKind::FnExit: return "fn-exit";
    }
    return "?";
  }
};

struct HashKey {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  bool operator==(const HashKey&) const = default;
};

struct HashKeyHash {
  std::size_t operator()(const HashKey& k) const {
    return static_cast<std::size_t>(k.a ^ (k.b << 1 | k.b >> 63));
  }
};

struct CaptureRequest {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  std::string at_first;
  std::string at_second;
  bool got_first = false;
  bool got_second = false;
};

Outcome make_fault(FaultKind kind, std::string detail, std::string output = "",
                   std::uint64_t steps = 0) {
  Outcome o;
  o.kind = OutcomeKind::Fault;
  o.fault = kind;
  o.fault_detail = std::move(detail);
  o.output = std::move(output);
  o.steps = steps;
  return o;
}

bool replay_matches(const DefinitionTable& table, std::string_view entry,
                    bool is_function, const std::vector<std::string>& args,
                    std::uint64_t first, std::uint64_t second);

Outcome execute(const DefinitionTable& table, std::string_view entry,
                bool is_function, const std::vector<std::string>& args,
                const RunOptions& opts, CaptureRequest* capture) {
  int idx = table.find_index(entry);
  if (idx < 0) {
    return make_fault(FaultKind::UndefinedName,
                      "no definition named '" + std::string(entry) + "'");
  }
  const Definition& d = table.defs[static_cast<std::size_t>(idx)];
  if (is_function && d.kind != DefKind::Function) {
    return make_fault(FaultKind::Type,
                      "'" + std::string(entry) + "' is not a function");
  }
  if (!is_function && d.kind != DefKind::Procedure) {
    return make_fault(FaultKind::Type,
                      "'" + std::string(entry) + "' is not a procedure");
  }
  if (args.size() != d.params.size()) {
    return make_fault(FaultKind::Arity,
                      "'" + std::string(entry) + "' expects " +
                          std::to_string(d.params.size()) +
                          " arguments, got " + std::to_string(args.size()));
  }

  Machine m(table);
  Frame top;
  top.def = idx;
  for (const std::string& a : args) top.locals.emplace_back(a);
  m.push_frame(std::move(top));
  m.push(is_function ? WorkKind::FnExit : WorkKind::ProcExit);
  m.push(WorkKind::Seq, idx, d.body, 0);

  std::uint64_t fuel = capture ? capture->second + 1 : opts.fuel;
  std::unordered_map<HashKey, std::uint64_t, HashKeyHash> seen;
  std::uint64_t steps = 0;

  for (;;) {
    if (capture) {
      if (steps == capture->first) {
        capture->at_first.clear();
        m.serialize(capture->at_first);
        capture->got_first = true;
      }
      if (steps == capture->second) {
        capture->at_second.clear();
        m.serialize(capture->at_second);
        capture->got_second = true;
        return Outcome{};  // replay only; the outcome is not used
      }
    }
    if (m.work.empty()) {
      Outcome o;
      o.kind = OutcomeKind::Halted;
      o.output = std::move(m.output);
      o.steps = steps;
      if (is_function) {
        if (m.values.size() == 1) {
          o.value = std::move(m.values.back());
        } else {
          return make_fault(FaultKind::Type, "internal: missing result value",
                            std::move(o.output), steps);
        }
      }
      return o;
    }
    if (!capture) {
      H2 h = m.config_hash();
      HashKey key{h.a, h.b};
      auto it = seen.find(key);
      if (it != seen.end()) {
        // Hashes can collide; only a byte-identical replay earns Diverges.
        if (replay_matches(table, entry, is_function, args, it->second,
                           steps)) {
          Outcome o;
          o.kind = OutcomeKind::Diverges;
          o.cycle = CycleWitness{it->second, steps};
          o.output = std::move(m.output);
          o.steps = steps;
          return o;
        }
      } else {
        seen.emplace(key, steps);
      }
    }
    if (steps == fuel) {
      Outcome o;
      o.kind = OutcomeKind::FuelExhausted;
      o.output = std::move(m.output);
      o.steps = steps;
      return o;
    }
    if (opts.trace && !capture) {
      TraceEvent ev;
      ev.step = steps;
      ev.definition =
          m.frames.empty()
              ? std::string_view{}
              : std::string_view(
                    table.defs[static_cast<std::size_t>(m.frames.back().def)]
                        .name);
      ev.action = m.describe_top();
      if (!m.frames.empty()) {
        std::string lbuf;
        for (const Value& v : m.frames.back().locals) append_value(lbuf, v);
        ev.bindings_digest = fnv1a64(lbuf);
      }
      opts.trace(ev);
    }
    m.step();
    ++steps;
    if (m.fault) {
      return make_fault(m.fault->kind, std::move(m.fault->detail),
                        std::move(m.output), steps);
    }
  }
}

bool replay_matches(const DefinitionTable& table, std::string_view entry,
                    bool is_function, const std::vector<std::string>& args,
                    std::uint64_t first, std::uint64_t second) {
  CaptureRequest capture;
  capture.first = first;
  capture.second = second;
  RunOptions opts;
  opts.fuel = second + 1;
  execute(table, entry, is_function, args, opts, &capture);
  return capture.got_first && capture.got_second &&
         capture.at_first == capture.at_second;
}

}  // namespace

Outcome run(const lang::DefinitionTable& table, std::string_view proc,
            const std::vector<std::string>& args, const RunOptions& opts) {
  return execute(table, proc, /*is_function=*/false, args, opts, nullptr);
}

Outcome eval_fn(const lang::DefinitionTable& table, std::string_view fn,
                const std::vector<std::string>& args, const RunOptions& opts) {
  return execute(table, fn, /*is_function=*/true, args, opts, nullptr);
}

bool verify_cycle(const lang::DefinitionTable& table, std::string_view entry,
                  bool entry_is_function, const std::vector<std::string>& args,
                  const CycleWitness& witness) {
  if (witness.first >= witness.second) return false;
  return replay_matches(table, entry, entry_is_function, args, witness.first,
                        witness.second);
}

}  // namespace tangle::interp
