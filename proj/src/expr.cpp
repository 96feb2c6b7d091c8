#include "viewforge/expr.hpp"

#include <atomic>
#include <sstream>

#include "viewforge/error.hpp"

namespace viewforge {

std::string to_string(const SortExpr& s) {
  switch (s.kind) {
    case SortExpr::Kind::Named: return s.name;
    case SortExpr::Kind::Set: return "Set " + s.name;
    case SortExpr::Kind::In: return "In " + s.name;
    case SortExpr::Kind::Id: return "Id";
    case SortExpr::Kind::Out: return "Out";
  }
  return s.name;
}

namespace ex {

namespace {
ExprPtr make(Op op, std::string name = {}, std::vector<ExprPtr> args = {}) {
  return std::make_shared<const Expr>(Expr{op, std::move(name), 0, {}, std::move(args)});
}
}  // namespace

ExprPtr name(std::string n) { return make(Op::Name, std::move(n)); }
ExprPtr primed(std::string n) { return make(Op::Primed, std::move(n)); }
ExprPtr integer(std::int64_t v) {
  return std::make_shared<const Expr>(Expr{Op::Int, {}, v, {}, {}});
}
ExprPtr self() { return make(Op::Self); }
ExprPtr in() { return make(Op::In); }
ExprPtr out() { return make(Op::Out); }
ExprPtr truth() { return make(Op::True); }
ExprPtr falsity() { return make(Op::False); }
ExprPtr set_lit(std::vector<ExprPtr> elems) { return make(Op::SetLit, {}, std::move(elems)); }
ExprPtr seq_lit(std::vector<ExprPtr> items) { return make(Op::SeqLit, {}, std::move(items)); }

ExprPtr in_msg(ExprPtr sender, std::string method, std::vector<ExprPtr> args) {
  args.insert(args.begin(), std::move(sender));
  return make(Op::InMsg, std::move(method), std::move(args));
}

ExprPtr out_msg(ExprPtr receiver, std::string method, std::vector<ExprPtr> args) {
  args.insert(args.begin(), std::move(receiver));
  return make(Op::OutMsg, std::move(method), std::move(args));
}

ExprPtr binary(Op op, ExprPtr a, ExprPtr b) { return make(op, {}, {std::move(a), std::move(b)}); }
ExprPtr unary(Op op, ExprPtr a) { return make(op, {}, {std::move(a)}); }

ExprPtr arg(ExprPtr msg, std::int64_t index) {
  return std::make_shared<const Expr>(Expr{Op::Arg, {}, index, {}, {std::move(msg)}});
}

ExprPtr eq(ExprPtr a, ExprPtr b) { return binary(Op::Eq, std::move(a), std::move(b)); }
ExprPtr neg(ExprPtr a) { return unary(Op::Not, std::move(a)); }

ExprPtr conj(const std::vector<ExprPtr>& parts) {
  ExprPtr acc;
  for (const auto& p : parts) {
    if (p->op == Op::True) continue;
    acc = acc ? binary(Op::And, acc, p) : p;
  }
  return acc ? acc : truth();
}

ExprPtr disj(const std::vector<ExprPtr>& parts) {
  ExprPtr acc;
  for (const auto& p : parts) {
    if (p->op == Op::False) continue;
    acc = acc ? binary(Op::Or, acc, p) : p;
  }
  return acc ? acc : falsity();
}

ExprPtr implies(ExprPtr a, ExprPtr b) { return binary(Op::Implies, std::move(a), std::move(b)); }
ExprPtr iff(ExprPtr a, ExprPtr b) { return binary(Op::Iff, std::move(a), std::move(b)); }

ExprPtr exists(std::string var, SortExpr sort, ExprPtr body) {
  return std::make_shared<const Expr>(
      Expr{Op::Exists, std::move(var), 0, std::move(sort), {std::move(body)}});
}

ExprPtr forall(std::string var, SortExpr sort, ExprPtr body) {
  return std::make_shared<const Expr>(
      Expr{Op::Forall, std::move(var), 0, std::move(sort), {std::move(body)}});
}

ExprPtr exists_all(const std::vector<TypedVar>& vars, ExprPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(it->name, it->sort, body);
  return body;
}

ExprPtr forall_all(const std::vector<TypedVar>& vars, ExprPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(it->name, it->sort, body);
  return body;
}

}  // namespace ex

bool is_formula_op(Op op) { return op >= Op::True; }

bool equal(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.name != b.name || a.number != b.number || !(a.sort == b.sort) ||
      a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

// Binding strength; higher binds tighter.
int precedence(Op op) {
  switch (op) {
    case Op::Exists:
    case Op::Forall: return 0;
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Elem:
    case Op::Subset: return 6;
    case Op::Add:
    case Op::Sub: return 7;
    default: return 8;
  }
}

const char* infix(Op op) {
  switch (op) {
    case Op::Iff: return "<=>";
    case Op::Implies: return "=>";
    case Op::Or: return "or";
    case Op::And: return "and";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Elem: return "elem";
    case Op::Subset: return "subset";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    default: return "?";
  }
}

void render_to(std::ostringstream& out, const Expr& e, int ctx);

void render_list(std::ostringstream& out, const std::vector<ExprPtr>& xs, std::size_t from) {
  for (std::size_t i = from; i < xs.size(); ++i) {
    if (i > from) out << ", ";
    render_to(out, *xs[i], 0);
  }
}

void render_to(std::ostringstream& out, const Expr& e, int ctx) {
  const int p = precedence(e.op);
  // A quantifier body extends as far right as possible, so any enclosing
  // operator context needs parentheses.
  const bool paren = p < ctx || (p == 0 && ctx > 0);
  if (paren) out << "(";
  switch (e.op) {
    case Op::Name: out << e.name; break;
    case Op::Primed: out << e.name << "'"; break;
    case Op::Int: out << e.number; break;
    case Op::Self: out << "self"; break;
    case Op::In: out << "in"; break;
    case Op::Out: out << "out"; break;
    case Op::True: out << "true"; break;
    case Op::False: out << "false"; break;
    case Op::SetLit:
      out << "{";
      render_list(out, e.args, 0);
      out << "}";
      break;
    case Op::SeqLit:
      out << "<";
      render_list(out, e.args, 0);
      out << ">";
      break;
    case Op::InMsg:
    case Op::OutMsg:
      render_to(out, *e.args[0], 8);
      out << (e.op == Op::InMsg ? "?" : "!") << e.name << "(";
      render_list(out, e.args, 1);
      out << ")";
      break;
    case Op::Card:
      out << "card(";
      render_to(out, *e.args[0], 0);
      out << ")";
      break;
    case Op::Arg:
      out << "arg(";
      render_to(out, *e.args[0], 0);
      out << ", " << e.number << ")";
      break;
    case Op::Not:
      out << "not ";
      render_to(out, *e.args[0], 5);
      break;
    case Op::Exists:
    case Op::Forall:
      out << (e.op == Op::Exists ? "exists " : "forall ") << e.name << " : " << to_string(e.sort)
          << " . ";
      render_to(out, *e.args[0], 0);
      break;
    case Op::Implies:
      render_to(out, *e.args[0], p + 1);
      out << " => ";
      render_to(out, *e.args[1], p);
      break;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Elem:
    case Op::Subset:
      render_to(out, *e.args[0], p + 1);
      out << " " << infix(e.op) << " ";
      render_to(out, *e.args[1], p + 1);
      break;
    default:  // left-associative binary operators
      render_to(out, *e.args[0], p);
      out << " " << infix(e.op) << " ";
      render_to(out, *e.args[1], p + 1);
      break;
  }
  if (paren) out << ")";
}

void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  auto add = [&](const std::string& n) {
    if (!bound.count(n)) out.insert(n);
  };
  switch (e.op) {
    case Op::Name: add(e.name); return;
    case Op::Primed: add(e.name + "'"); return;
    case Op::Self: add("self"); return;
    case Op::In: add("in"); return;
    case Op::Out: add("out"); return;
    case Op::Exists:
    case Op::Forall: {
      const bool fresh = bound.insert(e.name).second;
      collect_free(*e.args[0], bound, out);
      if (fresh) bound.erase(e.name);
      return;
    }
    default:
      for (const auto& a : e.args) collect_free(*a, bound, out);
  }
}

std::atomic<unsigned> fresh_counter{0};

std::string fresh_name(const std::string& base) {
  auto stem = base.substr(0, base.find('~'));
  return stem + "~" + std::to_string(++fresh_counter);
}

bool occurs_as(const Expr& e, const std::string& var) {
  switch (e.op) {
    case Op::Name: return e.name == var;
    case Op::Primed: return e.name + "'" == var;
    case Op::Self: return var == "self";
    case Op::In: return var == "in";
    case Op::Out: return var == "out";
    default: return false;
  }
}

}  // namespace

std::string render(const Expr& e) {
  std::ostringstream out;
  render_to(out, e, 0);
  return out.str();
}

std::set<std::string> free_names(const Expr& e) {
  std::set<std::string> bound, out;
  collect_free(e, bound, out);
  return out;
}

ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement) {
  if (occurs_as(*e, var)) return replacement;
  if (e->args.empty()) return e;
  if (e->op == Op::Exists || e->op == Op::Forall) {
    if (e->name == var) return e;
    auto body = e->args[0];
    auto bound_name = e->name;
    if (free_names(*replacement).count(bound_name)) {
      auto renamed = fresh_name(bound_name);
      body = substitute(body, bound_name, ex::name(renamed));
      bound_name = renamed;
    }
    auto new_body = substitute(body, var, replacement);
    return std::make_shared<const Expr>(Expr{e->op, bound_name, 0, e->sort, {new_body}});
  }
  std::vector<ExprPtr> args;
  args.reserve(e->args.size());
  bool changed = false;
  for (const auto& a : e->args) {
    args.push_back(substitute(a, var, replacement));
    changed = changed || args.back() != a;
  }
  if (!changed) return e;
  return std::make_shared<const Expr>(Expr{e->op, e->name, e->number, e->sort, std::move(args)});
}

std::set<std::string> primed_names(const Expr& e) {
  std::set<std::string> result;
  for (const auto& n : free_names(e))
    if (!n.empty() && n.back() == '\'') result.insert(n.substr(0, n.size() - 1));
  return result;
}

ExprPtr prime(const ExprPtr& f, const std::set<std::string>& attributes) {
  if (auto already = primed_names(*f); !already.empty())
    throw Error(ErrorCode::AlreadyPrimed, "formula already mentions primed attribute '" +
                                              *already.begin() + "'");
  ExprPtr result = f;
  for (const auto& n : free_names(*f))
    if (attributes.count(n)) result = substitute(result, n, ex::primed(n));
  return result;
}

std::size_t count_occurrences(const Expr& e, const std::string& name, bool primed) {
  std::size_t n = 0;
  if ((primed && e.op == Op::Primed && e.name == name) ||
      (!primed && e.op == Op::Name && e.name == name))
    ++n;
  for (const auto& a : e.args) n += count_occurrences(*a, name, primed);
  return n;
}

}  // namespace viewforge
