#include "viewforge/logic.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>

#include "viewforge/error.hpp"

namespace viewforge {

namespace {

struct Conjunct {
  ExprPtr expr;
  std::vector<int> deps;
  std::vector<int> lhs_deps;  // Eq only
  std::vector<int> rhs_deps;
};

/// Flattened existential block: the variables to search and the conjuncts
/// that must all hold.
struct Block {
  std::vector<TypedVar> vars;
  std::size_t listed = 0;    // caller's variables, a prefix of vars
  std::size_t reported = 0;  // enumerated in lexicographic order (0 or listed)
  std::vector<std::size_t> size_hint;  // carrier sizes, filled on first search
  std::vector<Conjunct> conjuncts;
  std::vector<std::vector<int>> watchers;  // per variable: conjuncts mentioning it
  std::vector<int> closed;                 // conjuncts without block variables
  bool trivially_false = false;
  std::unordered_map<const Expr*, std::vector<int>> dep_cache;  // block variables below a pattern node
};

class BlockBuilder {
 public:
  BlockBuilder(Block& b, std::set<std::string> taken) : b_(b), taken_(std::move(taken)) {
    for (const auto& v : b_.vars) taken_.insert(v.name);
  }

  void flatten(const ExprPtr& e) {
    const Expr& x = *e;
    switch (x.op) {
      case Op::True:
        return;
      case Op::False:
        b_.trivially_false = true;
        return;
      case Op::And:
        flatten(x.args[0]);
        flatten(x.args[1]);
        return;
      case Op::Exists:
        hoist(x.name, x.sort, x.args[0], false);
        return;
      case Op::Not: {
        const Expr& y = *x.args[0];
        switch (y.op) {
          case Op::Not:
            flatten(y.args[0]);
            return;
          case Op::Or:
            flatten(ex::neg(y.args[0]));
            flatten(ex::neg(y.args[1]));
            return;
          case Op::Implies:
            flatten(y.args[0]);
            flatten(ex::neg(y.args[1]));
            return;
          case Op::Forall:
            hoist(y.name, y.sort, y.args[0], true);
            return;
          case Op::True:
            b_.trivially_false = true;
            return;
          case Op::False:
            return;
          default:
            break;
        }
        break;
      }
      default:
        break;
    }
    b_.conjuncts.push_back(Conjunct{e, {}, {}, {}});
  }

  void finish() {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < b_.vars.size(); ++i) index[b_.vars[i].name] = static_cast<int>(i);
    auto deps_of = [&](const Expr& e) {
      std::vector<int> d;
      for (const auto& n : free_names(e)) {
        auto it = index.find(n);
        if (it != index.end()) d.push_back(it->second);
      }
      return d;
    };
    b_.watchers.assign(b_.vars.size(), {});
    for (std::size_t i = 0; i < b_.conjuncts.size(); ++i) {
      Conjunct& c = b_.conjuncts[i];
      c.deps = deps_of(*c.expr);
      if (c.expr->op == Op::Eq) {
        c.lhs_deps = deps_of(*c.expr->args[0]);
        c.rhs_deps = deps_of(*c.expr->args[1]);
      }
      if (c.deps.empty()) b_.closed.push_back(static_cast<int>(i));
      for (int d : c.deps) b_.watchers[d].push_back(static_cast<int>(i));
    }
  }

 private:
  void hoist(const std::string& name, const SortExpr& sort, const ExprPtr& body, bool negate) {
    std::string fresh = name;
    ExprPtr b = body;
    if (taken_.count(name)) {
      int n = 0;
      do fresh = name + "~h" + std::to_string(++n);
      while (taken_.count(fresh));
      b = substitute(body, name, ex::name(fresh));
    }
    taken_.insert(fresh);
    for (const auto& f : free_names(*b)) taken_.insert(f);
    b_.vars.push_back(TypedVar{fresh, sort});
    flatten(negate ? ex::neg(b) : b);
  }

  Block& b_;
  std::set<std::string> taken_;
};

bool same_vars(const std::vector<TypedVar>& listed, const std::vector<TypedVar>& vars) {
  if (listed.size() != vars.size()) return false;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (listed[i].name != vars[i].name || !(listed[i].sort == vars[i].sort)) return false;
  return true;
}

enum class Match { Ok, Mismatch, Unknown };

}  // namespace

struct Solver::Impl {
  explicit Impl(const Universe& u) : u(u) {}

  const Universe& u;
  std::vector<std::pair<std::string, Value>> scope;
  std::uint64_t nodes = 0;
  std::uint64_t cap = 0;
  std::unordered_map<const Expr*, std::unique_ptr<Block>> quantifier_plans;
  struct TopPlan {
    std::vector<TypedVar> vars;
    bool lex;
    std::unique_ptr<Block> block;
  };
  std::unordered_map<const Expr*, std::vector<TopPlan>> top_plans;
  std::map<const Expr*, ExprPtr> keepalive;

  // ------------------------------------------------------------ scope

  const Value* lookup(const std::string& n) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == n) return &it->second;
    return nullptr;
  }

  const Value& must_lookup(const std::string& n) const {
    if (const Value* v = lookup(n)) return *v;
    throw Error(ErrorCode::UnboundVariable, "unbound variable " + n);
  }

  void begin(const Binding& base) {
    scope.clear();
    nodes = 0;
    cap = u.enumeration_cap();
    for (const auto& [n, v] : base.values) scope.emplace_back(n, v);
  }

  void keep(const ExprPtr& e) { keepalive.emplace(e.get(), e); }

  void tick() {
    if (++nodes > cap)
      throw BudgetExceeded("enumeration exceeded the cap of " + std::to_string(cap) + " search nodes");
  }

  // ------------------------------------------------------------- terms

  static std::int64_t checked(std::int64_t a, std::int64_t b, bool add) {
    std::int64_t r;
    bool overflow = add ? __builtin_add_overflow(a, b, &r) : __builtin_sub_overflow(a, b, &r);
    if (overflow) throw Error(ErrorCode::Overflow, "integer overflow");
    return r;
  }

  [[noreturn]] static void mismatch(const Expr& e, const std::string& what) {
    throw Error(ErrorCode::SortMismatch, what + " in " + render(e));
  }

  const std::string& self_id(const Expr& e) {
    const Value& s = must_lookup("self");
    if (!s.is_atom()) mismatch(e, "self is not an identifier");
    return s.as_atom();
  }

  Value term(const Expr& e) {
    switch (e.op) {
      case Op::Name: {
        if (const Value* v = lookup(e.name)) return *v;
        if (const Value* l = u.literal(e.name)) return *l;
        throw Error(ErrorCode::UnboundVariable, "unbound variable " + e.name);
      }
      case Op::Primed:
        return must_lookup(e.name + "'");
      case Op::Int:
        return Value::integer(e.number);
      case Op::Self:
        return must_lookup("self");
      case Op::In:
        return must_lookup("in");
      case Op::Out:
        return must_lookup("out");
      case Op::SetLit: {
        std::vector<Value> elems;
        for (const auto& a : e.args) elems.push_back(term(*a));
        return Value::set(std::move(elems));
      }
      case Op::SeqLit: {
        std::vector<Value> items;
        for (const auto& a : e.args) items.push_back(term(*a));
        return Value::seq(std::move(items));
      }
      case Op::InMsg:
      case Op::OutMsg: {
        Value party = term(*e.args[0]);
        if (!party.is_atom()) mismatch(e, "message party is not an identifier");
        Message m;
        m.name = e.name;
        if (e.op == Op::InMsg) {
          m.sender = party.as_atom();
          m.receiver = self_id(e);
        } else {
          m.receiver = party.as_atom();
          m.sender = self_id(e);
        }
        for (std::size_t i = 1; i < e.args.size(); ++i) m.args.push_back(term(*e.args[i]));
        return Value::message(std::move(m));
      }
      case Op::Add:
      case Op::Sub: {
        Value a = term(*e.args[0]);
        Value b = term(*e.args[1]);
        const bool add = e.op == Op::Add;
        if (a.is_int() && b.is_int()) return Value::integer(checked(a.as_int(), b.as_int(), add));
        if (a.is_set() && b.is_set()) {
          std::vector<Value> r;
          if (add) {
            std::set_union(a.as_set().begin(), a.as_set().end(), b.as_set().begin(), b.as_set().end(),
                           std::back_inserter(r));
          } else {
            std::set_difference(a.as_set().begin(), a.as_set().end(), b.as_set().begin(),
                                b.as_set().end(), std::back_inserter(r));
          }
          return Value::set(std::move(r));
        }
        mismatch(e, std::string("operands ") + a.kind_name() + " and " + b.kind_name());
      }
      case Op::Card: {
        Value a = term(*e.args[0]);
        if (a.is_set()) return Value::integer(static_cast<std::int64_t>(a.as_set().size()));
        if (a.is_seq()) return Value::integer(static_cast<std::int64_t>(a.as_seq().size()));
        mismatch(e, std::string("card of ") + a.kind_name());
      }
      case Op::Arg: {
        Value a = term(*e.args[0]);
        if (!a.is_message()) mismatch(e, std::string("arg of ") + a.kind_name());
        const auto& args = a.as_message().args;
        if (e.number < 1 || static_cast<std::size_t>(e.number) > args.size())
          mismatch(e, "argument index out of range");
        return args[static_cast<std::size_t>(e.number - 1)];
      }
      default:
        mismatch(e, "formula used as a term");
    }
  }

  // ---------------------------------------------------------- formulas

  bool holds(const Expr& e) {
    switch (e.op) {
      case Op::True:
        return true;
      case Op::False:
        return false;
      case Op::Eq:
        return term(*e.args[0]) == term(*e.args[1]);
      case Op::Ne:
        return term(*e.args[0]) != term(*e.args[1]);
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: {
        Value a = term(*e.args[0]);
        Value b = term(*e.args[1]);
        if (!a.is_int() || !b.is_int()) mismatch(e, "comparison of non-integers");
        switch (e.op) {
          case Op::Lt: return a.as_int() < b.as_int();
          case Op::Le: return a.as_int() <= b.as_int();
          case Op::Gt: return a.as_int() > b.as_int();
          default: return a.as_int() >= b.as_int();
        }
      }
      case Op::Elem: {
        Value a = term(*e.args[0]);
        Value b = term(*e.args[1]);
        if (b.is_set()) return set_contains(b, a);
        if (b.is_seq()) return std::find(b.as_seq().begin(), b.as_seq().end(), a) != b.as_seq().end();
        mismatch(e, std::string("elem of ") + b.kind_name());
      }
      case Op::Subset: {
        Value a = term(*e.args[0]);
        Value b = term(*e.args[1]);
        if (!a.is_set() || !b.is_set()) mismatch(e, "subset of non-sets");
        return std::includes(b.as_set().begin(), b.as_set().end(), a.as_set().begin(), a.as_set().end());
      }
      case Op::Not:
        return !holds(*e.args[0]);
      case Op::And:
        return holds(*e.args[0]) && holds(*e.args[1]);
      case Op::Or:
        return holds(*e.args[0]) || holds(*e.args[1]);
      case Op::Implies:
        return !holds(*e.args[0]) || holds(*e.args[1]);
      case Op::Iff:
        return holds(*e.args[0]) == holds(*e.args[1]);
      case Op::Exists:
        return satisfiable(quantifier_plan(e));
      case Op::Forall:
        return !satisfiable(quantifier_plan(e));
      default:
        mismatch(e, "term used as a formula");
    }
  }

  // -------------------------------------------------------------- plans

  Block& quantifier_plan(const Expr& e) {
    auto it = quantifier_plans.find(&e);
    if (it != quantifier_plans.end()) return *it->second;
    auto b = std::make_unique<Block>();
    b->vars.push_back(TypedVar{e.name, e.sort});
    std::set<std::string> taken = free_names(e);
    BlockBuilder builder(*b, taken);
    builder.flatten(e.op == Op::Exists ? e.args[0] : ex::neg(e.args[0]));
    builder.finish();
    return *quantifier_plans.emplace(&e, std::move(b)).first->second;
  }

  Block& top_plan(const ExprPtr& f, const std::vector<TypedVar>& vars, bool lex) {
    keep(f);
    auto& cached = top_plans[f.get()];
    for (auto& p : cached)
      if (p.lex == lex && same_vars(p.vars, vars)) return *p.block;
    auto b = std::make_unique<Block>();
    std::set<std::string> names;
    for (const auto& v : vars) {
      if (!names.insert(v.name).second)
        throw Error(ErrorCode::DuplicateName, "variable " + v.name + " listed twice");
      b->vars.push_back(v);
    }
    b->listed = vars.size();
    b->reported = lex ? vars.size() : 0;
    BlockBuilder builder(*b, free_names(*f));
    builder.flatten(f);
    builder.finish();
    cached.push_back(TopPlan{vars, lex, std::move(b)});
    return *cached.back().block;
  }

  // ------------------------------------------------------------- search

  struct State {
    Block& b;
    std::vector<char> assigned;
    std::vector<char> checked;
    explicit State(Block& blk) : b(blk), assigned(blk.vars.size(), 0), checked(blk.conjuncts.size(), 0) {}
  };

  bool all_assigned(const State& st, const std::vector<int>& deps) const {
    for (int d : deps)
      if (!st.assigned[d]) return false;
    return true;
  }

  /// Binds variable `v`; returns false (and leaves nothing bound) when a
  /// conjunct that became closed is false. `newly` receives the conjuncts
  /// marked checked so the caller can unmark them.
  bool bind(State& st, int v, const Value& val, std::vector<int>& newly) {
    scope.emplace_back(st.b.vars[v].name, val);
    st.assigned[v] = 1;
    for (int c : st.b.watchers[v]) {
      if (st.checked[c] || !all_assigned(st, st.b.conjuncts[c].deps)) continue;
      st.checked[c] = 1;
      newly.push_back(c);
      if (!holds(*st.b.conjuncts[c].expr)) {
        unbind(st, v, newly);
        return false;
      }
    }
    return true;
  }

  void unbind(State& st, int v, std::vector<int>& newly) {
    for (int c : newly) st.checked[c] = 0;
    newly.clear();
    st.assigned[v] = 0;
    scope.pop_back();
  }

  int var_index(const State& st, const std::string& n) const {
    for (std::size_t i = 0; i < st.b.vars.size(); ++i)
      if (st.b.vars[i].name == n) return static_cast<int>(i);
    return -1;
  }

  /// Matches `pattern` against a known value, collecting pins for unbound
  /// block variables at structural positions.
  const std::vector<int>& deps_of(State& st, const Expr& p) {
    auto it = st.b.dep_cache.find(&p);
    if (it != st.b.dep_cache.end()) return it->second;
    std::vector<int> d;
    for (const auto& n : free_names(p)) {
      int idx = var_index(st, n);
      if (idx >= 0) d.push_back(idx);
    }
    return st.b.dep_cache.emplace(&p, std::move(d)).first->second;
  }

  Match destructure(State& st, const Expr& p, const Value& v, std::vector<std::pair<int, Value>>& pins) {
    const std::vector<int>& deps = deps_of(st, p);
    const bool leaf = p.op == Op::Name || p.op == Op::Primed || p.op == Op::In || p.op == Op::Out || p.op == Op::Self;
    if (leaf && deps.size() == 1 && !st.assigned[deps[0]]) {
      const int idx = deps[0];
      for (const auto& [i, w] : pins)
        if (i == idx) return w == v ? Match::Ok : Match::Mismatch;
      pins.emplace_back(idx, v);
      return Match::Ok;
    }
    if (all_assigned(st, deps)) return term(p) == v ? Match::Ok : Match::Mismatch;
    switch (p.op) {
      case Op::SeqLit: {
        if (!v.is_seq()) return Match::Mismatch;
        if (v.as_seq().size() != p.args.size()) return Match::Mismatch;
        return destructure_all(st, p.args, 0, v.as_seq(), pins);
      }
      case Op::InMsg:
      case Op::OutMsg: {
        if (!v.is_message()) return Match::Mismatch;
        const Message& m = v.as_message();
        if (m.name != p.name || m.args.size() + 1 != p.args.size()) return Match::Mismatch;
        const Value* self = lookup("self");
        const std::string& own = p.op == Op::InMsg ? m.receiver : m.sender;
        if (self && (!self->is_atom() || self->as_atom() != own)) return Match::Mismatch;
        const std::string& party = p.op == Op::InMsg ? m.sender : m.receiver;
        std::vector<Value> parts{Value::atom(party)};
        parts.insert(parts.end(), m.args.begin(), m.args.end());
        return destructure_all(st, p.args, 0, parts, pins);
      }
      default:
        return Match::Unknown;
    }
  }

  Match destructure_all(State& st, const std::vector<ExprPtr>& ps, std::size_t from, const std::vector<Value>& vs,
                        std::vector<std::pair<int, Value>>& pins) {
    Match result = Match::Ok;
    for (std::size_t i = from; i < ps.size(); ++i) {
      Match r = destructure(st, *ps[i], vs[i - from], pins);
      if (r == Match::Mismatch) return r;
      if (r == Match::Unknown) result = Match::Unknown;
    }
    return result;
  }

  /// Finds a forced value for some unbound variable. Returns Mismatch when
  /// an equation proves the branch dead.
  Match find_pin(State& st, std::pair<int, Value>& pin) {
    for (std::size_t c = 0; c < st.b.conjuncts.size(); ++c) {
      const Conjunct& cj = st.b.conjuncts[c];
      if (st.checked[c] || cj.expr->op != Op::Eq) continue;
      const bool lhs_known = all_assigned(st, cj.lhs_deps);
      const bool rhs_known = all_assigned(st, cj.rhs_deps);
      if (lhs_known == rhs_known) continue;
      const Expr& known = lhs_known ? *cj.expr->args[0] : *cj.expr->args[1];
      const Expr& pattern = lhs_known ? *cj.expr->args[1] : *cj.expr->args[0];
      std::vector<std::pair<int, Value>> pins;
      Match m = destructure(st, pattern, term(known), pins);
      if (m == Match::Mismatch) return m;
      if (!pins.empty()) {
        pin = pins.front();
        return Match::Ok;
      }
    }
    return Match::Unknown;
  }

  /// Depth-first search. In the reporting phase variables below
  /// `b.reported` are enumerated in order; hidden variables only need one
  /// completion. `leaf` returns true to stop the search; the function
  /// returns true when stopped.
  bool dfs(State& st, bool hidden_phase, const std::function<bool()>& leaf) {
    std::pair<int, Value> pin{-1, Value{}};
    Match pm = find_pin(st, pin);
    if (pm == Match::Mismatch) return false;
    if (pm == Match::Ok) {
      tick();
      const TypedVar& tv = st.b.vars[pin.first];
      if (tv.sort.kind != SortExpr::Kind::Out && !u.contains(tv.sort, pin.second)) return false;
      std::vector<int> newly;
      if (!bind(st, pin.first, pin.second, newly)) return false;
      bool stop = dfs(st, hidden_phase, leaf);
      unbind(st, pin.first, newly);
      return stop;
    }
    int next = -1;
    const std::size_t lo = hidden_phase ? st.b.reported : 0;
    const std::size_t hi = hidden_phase ? st.b.vars.size() : st.b.reported;
    for (std::size_t i = lo; i < hi; ++i) {
      if (st.assigned[i]) continue;
      if (!hidden_phase) {
        next = static_cast<int>(i);
        break;
      }
      if (next < 0 || st.b.size_hint[i] < st.b.size_hint[next]) next = static_cast<int>(i);
    }
    if (next < 0) {
      if (hidden_phase) return leaf();
      bool pending = false;
      for (std::size_t i = st.b.reported; i < st.b.vars.size(); ++i) pending = pending || !st.assigned[i];
      if (!pending) return leaf();
      bool found = dfs(st, true, [] { return true; });
      return found ? leaf() : false;
    }
    const TypedVar& tv = st.b.vars[next];
    if (tv.sort.kind == SortExpr::Kind::Out)
      throw BudgetExceeded("variable " + tv.name + " of sort Out is not pinned by an equation");
    const std::vector<Value>& carrier = u.carrier(tv.sort);
    std::vector<int> newly;
    for (const Value& val : carrier) {
      tick();
      if (!bind(st, next, val, newly)) continue;
      bool stop = dfs(st, hidden_phase, leaf);
      unbind(st, next, newly);
      if (stop) return true;
    }
    return false;
  }

  void fill_hints(Block& b) {
    if (b.size_hint.size() == b.vars.size()) return;
    b.size_hint.clear();
    for (const auto& v : b.vars) {
      std::size_t n = SIZE_MAX;
      if (v.sort.kind != SortExpr::Kind::Out) {
        try {
          n = u.carrier(v.sort).size();
        } catch (const BudgetExceeded&) {
        }
      }
      b.size_hint.push_back(n);
    }
  }

  bool closed_hold(Block& b) {
    if (b.trivially_false) return false;
    for (int c : b.closed)
      if (!holds(*b.conjuncts[c].expr)) return false;
    return true;
  }

  bool satisfiable(Block& b) {
    if (!closed_hold(b)) return false;
    fill_hints(b);
    State st(b);
    return dfs(st, true, [] { return true; });
  }

  void models(Block& b, const std::function<bool(const Binding&)>& visit) {
    if (!closed_hold(b)) return;
    fill_hints(b);
    State st(b);
    dfs(st, b.reported == 0, [&] {
      Binding out;
      for (std::size_t i = 0; i < b.listed; ++i) {
        const Value* v = lookup(b.vars[i].name);
        out.set(b.vars[i].name, *v, to_string(b.vars[i].sort));
      }
      return !visit(out);
    });
  }
};

Solver::Solver(const Universe& u) : impl_(std::make_unique<Impl>(u)) {}
Solver::~Solver() = default;

const Universe& Solver::universe() const { return impl_->u; }
std::uint64_t Solver::last_nodes() const { return impl_->nodes; }

bool Solver::eval(const Formula& f, const Binding& b) {
  impl_->keep(f);
  impl_->begin(b);
  return impl_->holds(*f);
}

Value Solver::eval_term(const Term& t, const Binding& b) {
  impl_->keep(t);
  impl_->begin(b);
  return impl_->term(*t);
}

void Solver::for_each_model(const Formula& f, const std::vector<TypedVar>& vars, const Binding& base,
                            const std::function<bool(const Binding&)>& visit) {
  Block& plan = impl_->top_plan(f, vars, true);
  impl_->begin(base);
  impl_->models(plan, visit);
}

std::optional<Binding> Solver::find_any(const Formula& f, const std::vector<TypedVar>& vars, const Binding& base) {
  Block& plan = impl_->top_plan(f, vars, false);
  impl_->begin(base);
  std::optional<Binding> found;
  impl_->models(plan, [&](const Binding& b) {
    found = b;
    return false;
  });
  return found;
}

bool Solver::exists(const Formula& f, const std::vector<TypedVar>& vars, const Binding& base) {
  Block& plan = impl_->top_plan(f, vars, false);
  impl_->begin(base);
  if (!impl_->closed_hold(plan)) return false;
  impl_->fill_hints(plan);
  Impl::State st(plan);
  return impl_->dfs(st, true, [] { return true; });
}

std::vector<Binding> Solver::enumerate(const Formula& f, const std::vector<TypedVar>& vars, std::size_t limit,
                                       const Binding& base) {
  std::vector<Binding> out;
  for_each_model(f, vars, base, [&](const Binding& b) {
    out.push_back(b);
    return limit == 0 || out.size() < limit;
  });
  return out;
}

std::optional<Binding> Solver::find_model(const Formula& f, const std::vector<TypedVar>& vars,
                                          const Binding& base) {
  auto r = enumerate(f, vars, 1, base);
  if (r.empty()) return std::nullopt;
  return r.front();
}

bool eval(const Formula& f, const Binding& b, const Universe& u) { return Solver(u).eval(f, b); }

Value eval_term(const Term& t, const Binding& b, const Universe& u) { return Solver(u).eval_term(t, b); }

std::vector<Binding> enumerate_models(const Formula& f, const std::vector<TypedVar>& vars, const Universe& u,
                                      std::size_t limit) {
  return Solver(u).enumerate(f, vars, limit);
}

// ------------------------------------------------------------ transitions

std::vector<TypedVar> attribute_vars(const ClassSignature& sig, bool primed) {
  std::vector<TypedVar> out;
  for (const auto& a : sig.attributes) out.push_back(TypedVar{primed ? a.name + "'" : a.name, a.sort});
  return out;
}

OpenTransition open_transition(const TransitionDef& t, const ClassSignature& sig) {
  OpenTransition o;
  std::set<std::string> used{"self", "in", "out"};
  for (const auto& a : sig.attributes) used.insert(a.name);
  auto claim = [&](const std::string& n) {
    if (!used.insert(n).second)
      throw Error(ErrorCode::PatternVariableClash,
                  "variable " + n + " of transition " + t.name + " clashes with another name");
  };

  if (t.input) {
    const MethodSig* m = sig.find_method(t.input->method, t.input->vars.size());
    if (!m)
      throw Error(ErrorCode::Structure, "transition " + t.name + " accepts " + t.input->method + "/" +
                                            std::to_string(t.input->vars.size()) + " which class " +
                                            sig.class_name + " does not declare");
    claim(t.input->sender);
    o.inputs.push_back(TypedVar{t.input->sender, SortExpr::id()});
    std::vector<ExprPtr> args;
    for (std::size_t i = 0; i < t.input->vars.size(); ++i) {
      claim(t.input->vars[i]);
      o.inputs.push_back(TypedVar{t.input->vars[i], m->params[i].sort});
      args.push_back(ex::name(t.input->vars[i]));
    }
    o.match = ex::eq(ex::in(), ex::in_msg(ex::name(t.input->sender), t.input->method, std::move(args)));
  } else {
    o.match = ex::truth();
  }

  for (const auto& v : t.vars) {
    claim(v.name);
    o.locals.push_back(TypedVar{v.name, v.sort});
  }
  std::vector<ExprPtr> outs;
  for (const auto& op : t.outputs) {
    if (op.new_var) {
      claim(*op.new_var);
      o.locals.push_back(TypedVar{*op.new_var, SortExpr::named(op.new_class)});
      outs.push_back(ex::out_msg(ex::name(*op.new_var), op.method, op.args));
    } else {
      outs.push_back(ex::out_msg(op.receiver, op.method, op.args));
    }
  }
  o.out_eq = ex::eq(ex::out(), ex::seq_lit(std::move(outs)));
  o.pre = t.pre ? t.pre : ex::truth();
  o.post = t.post ? t.post : ex::truth();

  std::set<std::string> mentioned = primed_names(*o.post);
  std::set<std::string> havoc(t.havoc.begin(), t.havoc.end());
  std::vector<ExprPtr> frame;
  for (const auto& a : sig.attributes) {
    if (mentioned.count(a.name) || havoc.count(a.name)) {
      if (mentioned.count(a.name)) o.primed_attributes.push_back(a.name);
      continue;
    }
    frame.push_back(ex::eq(ex::primed(a.name), ex::name(a.name)));
    o.primed_attributes.push_back(a.name);
  }
  o.frame = ex::conj(frame);
  return o;
}

DesugaredTransition desugar_transition(const TransitionDef& t, const ClassSignature& sig, bool frame) {
  OpenTransition o = open_transition(t, sig);
  std::set<std::string> pre_free = free_names(*o.pre);
  std::vector<TypedVar> pre_locals;
  for (const auto& v : o.locals)
    if (pre_free.count(v.name)) pre_locals.push_back(v);
  DesugaredTransition d;
  d.pre = ex::exists_all(o.inputs, ex::conj({o.match, ex::exists_all(pre_locals, o.pre)}));
  std::vector<ExprPtr> body{o.pre, o.out_eq, o.post};
  if (frame) body.push_back(o.frame);
  d.post = ex::exists_all(o.inputs, ex::conj({o.match, ex::exists_all(o.locals, ex::conj(body))}));
  return d;
}

}  // namespace viewforge
