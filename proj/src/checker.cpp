#include "viewforge/checker.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "viewforge/error.hpp"
#include "viewforge/lang.hpp"
#include "viewforge/logic.hpp"

namespace viewforge {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Budget: return "BUDGET";
  }
  return "?";
}

Verdict ConditionReport::overall() const {
  if (count(Verdict::Fail)) return Verdict::Fail;
  if (count(Verdict::Budget)) return Verdict::Budget;
  return Verdict::Pass;
}

std::size_t ConditionReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [&](const CheckResult& r) { return r.verdict == v; }));
}

void ConditionReport::append(const ConditionReport& other) {
  results.insert(results.end(), other.results.begin(), other.results.end());
}

std::string ConditionReport::to_text() const {
  std::ostringstream out;
  for (const auto& r : results) {
    out << to_string(r.verdict) << " " << r.check;
    if (r.reconstructed) out << " [reconstructed]";
    out << " " << r.locus;
    if (r.binding) out << " " << to_string(*r.binding);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  return out.str();
}

std::string ConditionReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json rec;
    rec["check"] = r.check;
    rec["locus"] = r.locus;
    rec["verdict"] = to_string(r.verdict);
    if (r.binding) {
      nlohmann::ordered_json b = nlohmann::ordered_json::object();
      for (const auto& [k, v] : r.binding->values) b[k] = to_string(v);
      rec["binding"] = b;
    } else {
      rec["binding"] = nullptr;
    }
    rec["detail"] = r.detail;
    rec["reconstructed"] = r.reconstructed;
    arr.push_back(rec);
  }
  return arr.dump(2) + "\n";
}

namespace {

Binding items(std::initializer_list<std::pair<std::string, std::string>> kv) {
  Binding b;
  for (const auto& [k, v] : kv) b.set(k, Value::atom(v));
  return b;
}

CheckResult fail(std::string check, std::string locus, Binding b, std::string detail) {
  return CheckResult{std::move(check), std::move(locus), Verdict::Fail, std::move(b), std::move(detail), false};
}

// ------------------------------------------------------------ sort checker

struct Ty {
  enum class K { Any, Int, Enum, Obj, Id, Set, Msg, Seq } k = K::Any;
  std::string name;
  std::shared_ptr<const Ty> elem;
};

Ty make_ty(Ty::K k, std::string name = {}) { return Ty{k, std::move(name), nullptr}; }

Ty set_ty(Ty elem) { return Ty{Ty::K::Set, {}, std::make_shared<const Ty>(std::move(elem))}; }

std::string ty_name(const Ty& t) {
  switch (t.k) {
    case Ty::K::Any: return "any";
    case Ty::K::Int: return "integer";
    case Ty::K::Enum:
    case Ty::K::Obj: return t.name;
    case Ty::K::Id: return "Id";
    case Ty::K::Set: return "Set " + ty_name(*t.elem);
    case Ty::K::Msg: return "message";
    case Ty::K::Seq: return "sequence";
  }
  return "?";
}

bool compatible(const Ty& a, const Ty& b) {
  if (a.k == Ty::K::Any || b.k == Ty::K::Any) return true;
  auto objish = [](const Ty& t) { return t.k == Ty::K::Obj || t.k == Ty::K::Id; };
  if (objish(a) && objish(b)) return a.k == Ty::K::Id || b.k == Ty::K::Id || a.name == b.name;
  if (a.k != b.k) return false;
  switch (a.k) {
    case Ty::K::Enum: return a.name == b.name;
    case Ty::K::Set: return compatible(*a.elem, *b.elem);
    default: return true;
  }
}

Ty ty_of(const SortExpr& s, const Universe& u) {
  switch (s.kind) {
    case SortExpr::Kind::Id: return make_ty(Ty::K::Id);
    case SortExpr::Kind::In: return make_ty(Ty::K::Msg);
    case SortExpr::Kind::Out: return make_ty(Ty::K::Seq);
    case SortExpr::Kind::Set: return set_ty(ty_of(SortExpr::named(s.name), u));
    case SortExpr::Kind::Named: break;
  }
  if (u.is_class(s.name)) return make_ty(Ty::K::Obj, s.name);
  const SortDef* d = u.sort_def(s.name);
  if (!d) throw Error(ErrorCode::UnknownSort, "unknown sort " + s.name);
  switch (d->kind) {
    case SortDef::Kind::Enumeration: return make_ty(Ty::K::Enum, s.name);
    case SortDef::Kind::Range: return make_ty(Ty::K::Int);
    case SortDef::Kind::SetOf: return set_ty(ty_of(SortExpr::named(d->element), u));
  }
  return make_ty(Ty::K::Any);
}

class SortChecker {
 public:
  SortChecker(const Universe& u, const SignatureEnv& env, std::string cls, std::string locus,
              std::vector<CheckResult>& out)
      : u_(u), env_(env), cls_(std::move(cls)), locus_(std::move(locus)), out_(out) {}

  void declare(const std::string& n, const Ty& t) { scope_.emplace_back(n, t); }
  void declare(const std::string& n, const SortExpr& s) {
    try {
      declare(n, ty_of(s, u_));
    } catch (const Error&) {
      issue("unknown-sort", items({{"variable", n}, {"sort", to_string(s)}}),
            "variable " + n + " has undeclared sort " + to_string(s));
      declare(n, make_ty(Ty::K::Any));
    }
  }

  void formula(const Expr& e) {
    switch (e.op) {
      case Op::True:
      case Op::False:
        return;
      case Op::Eq:
      case Op::Ne: {
        Ty a = term(*e.args[0]);
        Ty b = term(*e.args[1]);
        if (!compatible(a, b)) mismatch(e, ty_name(a) + " compared with " + ty_name(b));
        return;
      }
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: {
        Ty a = term(*e.args[0]);
        Ty b = term(*e.args[1]);
        if (!compatible(a, make_ty(Ty::K::Int)) || !compatible(b, make_ty(Ty::K::Int)))
          mismatch(e, "ordering needs integers");
        return;
      }
      case Op::Elem: {
        Ty a = term(*e.args[0]);
        Ty b = term(*e.args[1]);
        if (b.k == Ty::K::Set) {
          if (!compatible(a, *b.elem)) mismatch(e, ty_name(a) + " is not an element sort of " + ty_name(b));
        } else if (b.k != Ty::K::Seq && b.k != Ty::K::Any) {
          mismatch(e, "elem needs a set, got " + ty_name(b));
        }
        return;
      }
      case Op::Subset: {
        Ty a = term(*e.args[0]);
        Ty b = term(*e.args[1]);
        if (!compatible(a, set_ty(make_ty(Ty::K::Any))) || !compatible(b, set_ty(make_ty(Ty::K::Any))) ||
            !compatible(a, b))
          mismatch(e, "subset of " + ty_name(a) + " and " + ty_name(b));
        return;
      }
      case Op::Not:
        formula(*e.args[0]);
        return;
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        formula(*e.args[0]);
        formula(*e.args[1]);
        return;
      case Op::Exists:
      case Op::Forall: {
        std::size_t mark = scope_.size();
        declare(e.name, e.sort);
        formula(*e.args[0]);
        scope_.resize(mark);
        return;
      }
      default:
        mismatch(e, "term used as a formula");
    }
  }

  Ty term(const Expr& e) {
    switch (e.op) {
      case Op::Name:
        return name(e.name, false);
      case Op::Primed:
        return name(e.name, true);
      case Op::Int:
        return make_ty(Ty::K::Int);
      case Op::Self:
        return make_ty(Ty::K::Obj, cls_);
      case Op::In:
        return lookup("in").value_or(make_ty(Ty::K::Msg));
      case Op::Out:
        return lookup("out").value_or(make_ty(Ty::K::Seq));
      case Op::SetLit: {
        Ty elem = make_ty(Ty::K::Any);
        for (const auto& a : e.args) {
          Ty t = term(*a);
          if (!compatible(elem, t)) mismatch(e, "set literal mixes " + ty_name(elem) + " and " + ty_name(t));
          else if (elem.k == Ty::K::Any) elem = t;
        }
        return set_ty(elem);
      }
      case Op::SeqLit:
        for (const auto& a : e.args) term(*a);
        return make_ty(Ty::K::Seq);
      case Op::InMsg:
      case Op::OutMsg:
        message(e);
        return make_ty(Ty::K::Msg);
      case Op::Add:
      case Op::Sub: {
        Ty a = term(*e.args[0]);
        Ty b = term(*e.args[1]);
        if (!compatible(a, b)) {
          mismatch(e, ty_name(a) + " combined with " + ty_name(b));
          return make_ty(Ty::K::Any);
        }
        if (a.k == Ty::K::Int || a.k == Ty::K::Set) return a;
        if (b.k == Ty::K::Int || b.k == Ty::K::Set) return b;
        if (a.k != Ty::K::Any) mismatch(e, "arithmetic on " + ty_name(a));
        return make_ty(Ty::K::Any);
      }
      case Op::Card:
        term(*e.args[0]);
        return make_ty(Ty::K::Int);
      case Op::Arg:
        term(*e.args[0]);
        return make_ty(Ty::K::Any);
      default:
        mismatch(e, "formula used as a term");
        return make_ty(Ty::K::Any);
    }
  }

  void set_transition(std::string t) { transition_ = std::move(t); }

 private:
  std::optional<Ty> lookup(const std::string& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == n) return it->second;
    return std::nullopt;
  }

  Ty name(const std::string& n, bool primed) {
    std::string key = primed ? n + "'" : n;
    if (auto t = lookup(key)) return *t;
    if (!primed) {
      if (n == kExternal) return make_ty(Ty::K::Id);
      if (u_.literal(n)) {
        std::string s = u_.sort_of(*u_.literal(n));
        if (u_.is_class(s)) return make_ty(Ty::K::Obj, s);
        return make_ty(Ty::K::Enum, s);
      }
    }
    issue("unknown-name", items({{"name", key}}), "name " + key + " is neither an attribute, a variable nor a literal");
    return make_ty(Ty::K::Any);
  }

  void message(const Expr& e) {
    Ty party = term(*e.args[0]);
    std::vector<Ty> args;
    for (std::size_t i = 1; i < e.args.size(); ++i) args.push_back(term(*e.args[i]));
    if (!compatible(party, make_ty(Ty::K::Id))) {
      mismatch(e, "message party of sort " + ty_name(party));
      return;
    }
    std::string target = e.op == Op::InMsg ? cls_ : (party.k == Ty::K::Obj ? party.name : std::string());
    if (target.empty()) return;
    const ClassSignature* sig = env_.find(target);
    if (!sig) {
      issue("unknown-class", items({{"class", target}}), "class " + target + " has no signature");
      return;
    }
    std::string m = e.name + "/" + std::to_string(args.size());
    const MethodSig* ms = sig->find_method(e.name, args.size());
    if (!ms) {
      if (sig->has_method_named(e.name))
        issue("arity-mismatch", items({{"message", m}, {"class", target}}),
              "class " + target + " declares " + e.name + " with a different arity");
      else
        issue("unknown-message", items({{"message", m}, {"class", target}}),
              "class " + target + " declares no method " + e.name);
      return;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      Ty want = ty_of(ms->params[i].sort, u_);
      if (!compatible(args[i], want))
        mismatch(e, "argument " + std::to_string(i + 1) + " of " + e.name + " is " + ty_name(args[i]) + ", expected " +
                        ty_name(want));
    }
  }

  void mismatch(const Expr& e, const std::string& why) {
    issue("sort-mismatch", items({{"term", render(e)}}), why);
  }

  void issue(const std::string& check, Binding b, const std::string& detail) {
    if (!transition_.empty()) b.set("transition", Value::atom(transition_));
    out_.push_back(fail(check, locus_, std::move(b), detail));
  }

  const Universe& u_;
  const SignatureEnv& env_;
  std::string cls_;
  std::string locus_;
  std::string transition_;
  std::vector<CheckResult>& out_;
  std::vector<std::pair<std::string, Ty>> scope_;
};

}  // namespace

Universe with_signatures(const Universe& u, const SignatureEnv& env) {
  Universe copy = u;
  copy.attach_signatures(env);
  return copy;
}

Binding self_binding(const Universe& u, const std::string& cls) {
  Binding b;
  if (u.is_class(cls)) b.set("self", u.pool(cls).front());
  return b;
}

EnablednessQuery enabledness_query(const LifecycleDoc& lc, const TransitionDef& t, const ClassSignature& sig) {
  OpenTransition o = open_transition(t, sig);
  const StateDef* src = lc.find_state(t.source);
  const StateDef* tgt = lc.find_state(t.target);
  if (!src || !tgt) throw Error(ErrorCode::Structure, "transition " + t.name + " has an undeclared endpoint");
  std::vector<TypedVar> beta = o.locals;
  for (const auto& a : attribute_vars(sig, true)) beta.push_back(a);
  beta.push_back(TypedVar{"out", SortExpr::out()});
  Formula successor = ex::exists_all(
      beta, ex::conj({o.pre, o.out_eq, o.post, o.frame, prime(tgt->predicate, sig.attribute_names())}));
  std::set<std::string> pre_free = free_names(*o.pre);
  std::vector<TypedVar> pre_locals;
  for (const auto& v : o.locals)
    if (pre_free.count(v.name)) pre_locals.push_back(v);
  EnablednessQuery q;
  q.vars = attribute_vars(sig, false);
  q.vars.insert(q.vars.end(), o.inputs.begin(), o.inputs.end());
  if (t.input) q.vars.push_back(TypedVar{"in", SortExpr::input_of(lc.class_name)});
  q.violation = ex::conj({src->predicate, o.match, ex::exists_all(pre_locals, o.pre), ex::neg(successor)});
  return q;
}

// ------------------------------------------------------------ structure

ConditionReport check_lifecycle_structure(const LifecycleDoc& lc, const SignatureEnv& env, const Universe& u) {
  ConditionReport r;
  const ClassSignature* sig = env.find(lc.class_name);
  if (!sig) {
    r.results.push_back(fail("unknown-class", lc.name, items({{"class", lc.class_name}}),
                             "lifecycle for undeclared class " + lc.class_name));
    return r;
  }
  auto attrs = [&](SortChecker& sc, bool primed) {
    for (const auto& a : sig->attributes) {
      sc.declare(a.name, a.sort);
      if (primed) sc.declare(a.name + "'", a.sort);
    }
  };
  for (const auto& s : lc.states) {
    SortChecker sc(u, env, lc.class_name, lc.name + "/" + s.name, r.results);
    attrs(sc, false);
    sc.formula(*s.predicate);
  }
  for (const auto& t : lc.transitions) {
    const std::string locus = lc.name + "/" + t.name;
    if (t.input && !sig->find_method(t.input->method, t.input->vars.size())) {
      const std::string m = t.input->method + "/" + std::to_string(t.input->vars.size());
      if (sig->has_method_named(t.input->method))
        r.results.push_back(fail("arity-mismatch", locus, items({{"transition", t.name}, {"message", m}}),
                                 "class " + lc.class_name + " declares " + t.input->method + " with a different arity"));
      else
        r.results.push_back(fail("unknown-message", locus, items({{"transition", t.name}, {"message", m}}),
                                 "class " + lc.class_name + " declares no method " + t.input->method));
      continue;
    }
    OpenTransition o;
    try {
      o = open_transition(t, *sig);
    } catch (const Error& e) {
      r.results.push_back(fail(e.code() == ErrorCode::PatternVariableClash ? "pattern-variable-clash" : "structure",
                               locus, items({{"transition", t.name}}), e.what()));
      continue;
    }
    for (const auto& h : t.havoc)
      if (!sig->find_attribute(h))
        r.results.push_back(fail("unknown-name", locus, items({{"transition", t.name}, {"name", h}}),
                                 "havoc names " + h + " which is not an attribute"));
    for (const auto& op : t.outputs)
      if (op.new_var && !env.find(op.new_class))
        r.results.push_back(fail("unknown-class", locus, items({{"transition", t.name}, {"class", op.new_class}}),
                                 "creation of undeclared class " + op.new_class));
    SortChecker sc(u, env, lc.class_name, locus, r.results);
    sc.set_transition(t.name);
    attrs(sc, false);
    sc.declare("in", SortExpr::input_of(lc.class_name));
    for (const auto& v : o.inputs) sc.declare(v.name, v.sort);
    for (const auto& v : o.locals) sc.declare(v.name, v.sort);
    sc.formula(*o.pre);
    attrs(sc, true);
    sc.formula(*o.out_eq);
    sc.formula(*o.post);
  }
  return r;
}

// -------------------------------------------------------------- automata

ConditionReport check_automaton(const LifecycleDoc& lc, const SignatureEnv& env, const Universe& base_u) {
  ConditionReport r;
  const ClassSignature* sig = env.find(lc.class_name);
  if (!sig) {
    r.results.push_back(fail("unknown-class", lc.name, items({{"class", lc.class_name}}),
                             "lifecycle for undeclared class " + lc.class_name));
    return r;
  }
  Universe u = with_signatures(base_u, env);
  Solver solver(u);
  const auto attrs = attribute_vars(*sig, false);
  const Binding base = self_binding(u, lc.class_name);

  auto guarded = [&](const std::string& check, const std::string& locus, const std::function<void()>& body) {
    try {
      body();
    } catch (const BudgetExceeded& e) {
      r.results.push_back(CheckResult{check, locus, Verdict::Budget, std::nullopt, e.what(), false});
    } catch (const Error& e) {
      r.results.push_back(fail(check, locus, items({{"error", to_string(e.code())}}), e.what()));
    }
  };

  for (const auto& s : lc.states) {
    const std::string locus = lc.name + "/" + s.name;
    guarded("condition-1", locus, [&] {
      if (auto m = solver.find_model(s.predicate, attrs, base)) {
        r.results.push_back(CheckResult{"condition-1", locus, Verdict::Pass, *m, {}, false});
      } else {
        auto any = solver.find_model(ex::truth(), attrs, base);
        r.results.push_back(fail("condition-1", locus, any.value_or(Binding{}),
                                 "state predicate is unsatisfiable"));
      }
    });
  }

  for (std::size_t i = 0; i < lc.states.size(); ++i)
    for (std::size_t j = i + 1; j < lc.states.size(); ++j) {
      const auto& a = lc.states[i];
      const auto& b = lc.states[j];
      const std::string locus = lc.name + "/" + a.name + "," + b.name;
      guarded("condition-2", locus, [&] {
        if (auto m = solver.find_model(ex::conj({a.predicate, b.predicate}), attrs, base))
          r.results.push_back(fail("condition-2", locus, *m, "both state predicates hold"));
        else
          r.results.push_back(CheckResult{"condition-2", locus, Verdict::Pass, std::nullopt, {}, false});
      });
    }

  for (const auto& t : lc.transitions) {
    const std::string locus = lc.name + "/" + t.name;
    guarded("condition-3", locus, [&] {
      EnablednessQuery q = enabledness_query(lc, t, *sig);
      if (auto cex = solver.find_model(q.violation, q.vars, base))
        r.results.push_back(fail("condition-3", locus, *cex, "enabled input without a successor in " + t.target));
      else
        r.results.push_back(CheckResult{"condition-3", locus, Verdict::Pass, std::nullopt, {}, false});
    });
  }
  return r;
}

// ------------------------------------------------------------- witness

std::string render_config(const SystemConfig& c) {
  std::ostringstream out;
  for (const auto& [id, st] : c.objects) out << "object " << id << " " << to_string(st) << "\n";
  return out.str();
}

WitnessResult witness_system(const DocumentSet& ds, const Universe& base_u) {
  SignatureEnv env = induce_signatures(ds);
  Universe u = with_signatures(base_u, env);
  SystemConfig config;
  try {
    for (const auto& cls : u.classes()) {
      const LifecycleDoc* lc = ds.lifecycle_for(cls);
      const ClassSignature* sig = env.find(cls);
      for (const auto& id : u.pool(cls)) {
        ObjectState st;
        if (lc && sig) {
          Stepper stepper(*lc, *sig, u);
          std::optional<ObjectState> found;
          for (const auto& s : lc->initial_states)
            if ((found = stepper.first_state(s))) break;
          if (!found) return NoWitness{};
          st = *found;
        }
        config.objects[id.as_atom()] = st;
      }
    }
  } catch (const BudgetExceeded& e) {
    return BudgetHit{e.what()};
  }
  return config;
}

// --------------------------------------------------------- consistency

ConditionReport check_consistency(const DocumentSet& ds, const Universe& u) {
  ConditionReport r;
  if (ds.empty()) return r;

  std::set<std::string> classes;
  if (!ds.object_models().empty()) {
    for (const auto* om : ds.object_models()) classes.insert(om->classes.begin(), om->classes.end());
  } else {
    classes = ds.declared_classes();
  }
  for (const auto* cd : ds.class_documents())
    if (!classes.count(cd->class_name))
      r.results.push_back(fail("unknown-class", cd->name, items({{"class", cd->class_name}}),
                               "class " + cd->class_name + " is not in the object model"));
  for (const auto* lc : ds.lifecycles())
    if (!classes.count(lc->class_name))
      r.results.push_back(fail("unknown-class", lc->name, items({{"class", lc->class_name}}),
                               "lifecycle for undeclared class " + lc->class_name));

  auto sort_known = [&](const SortExpr& s) {
    try {
      u.require_sort(s);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  for (const auto* cd : ds.class_documents()) {
    for (const auto& a : cd->attributes)
      if (!sort_known(a.sort))
        r.results.push_back(fail("unknown-sort", cd->name + "/" + a.name,
                                 items({{"attribute", a.name}, {"sort", to_string(a.sort)}}),
                                 "attribute of undeclared sort"));
    for (const auto& m : cd->methods)
      for (const auto& p : m.params)
        if (!sort_known(p.sort))
          r.results.push_back(fail("unknown-sort", cd->name + "/" + m.name,
                                   items({{"parameter", p.name}, {"sort", to_string(p.sort)}}),
                                   "parameter of undeclared sort"));
  }

  // induced attributes against declared ones
  for (const auto* om : ds.object_models())
    for (const auto& rel : om->relationships)
      for (const auto& [role, other] : {std::make_pair(rel.first, rel.second), std::make_pair(rel.second, rel.first)}) {
        if (!role.rolename) continue;
        SortExpr induced = role.card == Cardinality::One ? SortExpr::named(role.class_name)
                                                         : SortExpr::set_of(role.class_name);
        for (const auto* cd : ds.class_documents()) {
          if (cd->class_name != other.class_name) continue;
          for (const auto& a : cd->attributes)
            if (a.name == *role.rolename && !(a.sort == induced))
              r.results.push_back(fail("attribute-collision", cd->name + "/" + a.name,
                                       items({{"class", other.class_name}, {"attribute", a.name}}),
                                       "declared as " + to_string(a.sort) + ", induced by " + om->name + " as " +
                                           to_string(induced)));
        }
      }
  if (!r.passed()) return r;

  SignatureEnv env;
  try {
    env = induce_signatures(ds);
  } catch (const Error& e) {
    r.results.push_back(fail(e.code() == ErrorCode::AttributeCollision ? "attribute-collision" : "structure",
                             "signatures", items({{"error", to_string(e.code())}}), e.what()));
    return r;
  }
  Universe uu = with_signatures(u, env);
  for (const auto* lc : ds.lifecycles()) r.append(check_lifecycle_structure(*lc, env, uu));
  if (!r.passed()) return r;

  for (const auto* lc : ds.lifecycles()) r.append(check_automaton(*lc, env, uu));

  WitnessResult w = witness_system(ds, uu);
  if (auto* cfg = std::get_if<SystemConfig>(&w)) {
    Binding b;
    for (const auto& [id, st] : cfg->objects)
      b.set(id, Value::atom(st.liveness == Liveness::Active ? st.control : "dormant"));
    r.results.push_back(CheckResult{"witness", "system", Verdict::Pass, b, {}, false});
  } else if (auto* hit = std::get_if<BudgetHit>(&w)) {
    r.results.push_back(CheckResult{"witness", "system", Verdict::Budget, std::nullopt, hit->reason, false});
  } else {
    std::string cls;
    for (const auto* lc : ds.lifecycles()) {
      Stepper s(*lc, env.at(lc->class_name), uu);
      bool any = false;
      for (const auto& st : lc->initial_states) any = any || s.first_state(st).has_value();
      if (!any) {
        cls = lc->class_name;
        break;
      }
    }
    r.results.push_back(fail("witness", "system", items({{"class", cls}}), "no initial state has a model"));
  }
  return r;
}

}  // namespace viewforge
