#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace viewforge {

/// Sort expressions as written in documents: `Car`, `Set Car`, plus the
/// built-in `Id` (every identifier and EXTERNAL), `In Branch` (input
/// messages of a class) and `Out` (output message sequences).
struct SortExpr {
  enum class Kind { Named, Set, In, Id, Out };
  Kind kind = Kind::Named;
  std::string name;  // base sort or class; empty for Id/Out

  static SortExpr named(std::string n) { return {Kind::Named, std::move(n)}; }
  static SortExpr set_of(std::string n) { return {Kind::Set, std::move(n)}; }
  static SortExpr input_of(std::string c) { return {Kind::In, std::move(c)}; }
  static SortExpr id() { return {Kind::Id, {}}; }
  static SortExpr out() { return {Kind::Out, {}}; }

  bool operator==(const SortExpr&) const = default;
  bool operator<(const SortExpr& o) const {
    return kind != o.kind ? kind < o.kind : name < o.name;
  }
};

std::string to_string(const SortExpr& s);

enum class Op {
  // terms
  Name,     // attribute, local variable or literal; resolved at evaluation
  Primed,   // name'
  Int,
  Self,
  In,
  Out,
  SetLit,   // {a, b}
  SeqLit,   // <a, b>
  InMsg,    // sender?m(args): args[0] is the sender, receiver is self
  OutMsg,   // recv!m(args):   args[0] is the receiver, sender is self
  Add,
  Sub,
  Card,     // card(S)
  Arg,      // arg(msg, k), 1-based
  // formulas
  True,
  False,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Elem,
  Subset,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
using Term = ExprPtr;
using Formula = ExprPtr;

struct Expr {
  Op op;
  std::string name;        // Name/Primed/message method/quantified variable
  std::int64_t number = 0; // Int literal, Arg index
  SortExpr sort;           // quantifier sort
  std::vector<ExprPtr> args;
};

namespace ex {

ExprPtr name(std::string n);
ExprPtr primed(std::string n);
ExprPtr integer(std::int64_t v);
ExprPtr self();
ExprPtr in();
ExprPtr out();
ExprPtr truth();
ExprPtr falsity();
ExprPtr set_lit(std::vector<ExprPtr> elems);
ExprPtr seq_lit(std::vector<ExprPtr> items);
ExprPtr in_msg(ExprPtr sender, std::string method, std::vector<ExprPtr> args);
ExprPtr out_msg(ExprPtr receiver, std::string method, std::vector<ExprPtr> args);
ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
ExprPtr unary(Op op, ExprPtr a);
ExprPtr arg(ExprPtr msg, std::int64_t index);
ExprPtr eq(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
/// Conjunction that drops `true` operands; empty list gives `true`.
ExprPtr conj(const std::vector<ExprPtr>& parts);
ExprPtr disj(const std::vector<ExprPtr>& parts);
ExprPtr implies(ExprPtr a, ExprPtr b);
ExprPtr iff(ExprPtr a, ExprPtr b);
ExprPtr exists(std::string var, SortExpr sort, ExprPtr body);
ExprPtr forall(std::string var, SortExpr sort, ExprPtr body);

struct TypedVar {
  std::string name;  // may carry a trailing ' for primed attributes
  SortExpr sort;
};

/// Nests one quantifier per variable, first variable outermost.
ExprPtr exists_all(const std::vector<TypedVar>& vars, ExprPtr body);
ExprPtr forall_all(const std::vector<TypedVar>& vars, ExprPtr body);

}  // namespace ex

bool is_formula_op(Op op);

/// Deep structural equality.
bool equal(const Expr& a, const Expr& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

/// Surface-syntax rendering with minimal parentheses; reparses to an equal tree.
std::string render(const Expr& e);
inline std::string render(const ExprPtr& e) { return render(*e); }

/// Free variable names. Primed occurrences appear as `x'`; `self`, `in` and
/// `out` appear under those names. Names bound by quantifiers are excluded.
std::set<std::string> free_names(const Expr& e);

/// Capture-avoiding replacement of free occurrences of `var` (which may be a
/// primed name `x'`) by `replacement`.
ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement);

/// Replaces every free occurrence of a name in `attributes` by its primed
/// form. Throws AlreadyPrimed when the formula already mentions a primed name.
ExprPtr prime(const ExprPtr& f, const std::set<std::string>& attributes);

/// Number of occurrences of Name/Primed nodes for `name` (free or not).
std::size_t count_occurrences(const Expr& e, const std::string& name, bool primed);

/// Primed attribute names (without the ') that occur free.
std::set<std::string> primed_names(const Expr& e);

}  // namespace viewforge
