#include <algorithm>
#include <deque>
#include <set>

#include "viewforge/error.hpp"
#include "viewforge/refine.hpp"

namespace viewforge {

namespace {

const LifecycleDoc* lifecycle_named(const DocumentSet& ds, const std::string& target) {
  if (const Document* d = ds.find(target)) return std::get_if<LifecycleDoc>(d);
  for (const auto* lc : ds.lifecycles())
    if (lc->class_name == target) return lc;
  return nullptr;
}

Binding note(std::initializer_list<std::pair<std::string, std::string>> kv) {
  Binding b;
  for (const auto& [k, v] : kv) b.set(k, Value::atom(v));
  return b;
}

class Generator {
 public:
  Generator(const LifecycleDoc& lc, const ClassSignature& sig, bool frame)
      : lc_(lc), sig_(sig), frame_(frame), attrs_(attribute_vars(sig, false)) {}

  std::vector<Obligation> out;

  void valid(const std::string& name, const std::string& item, std::vector<TypedVar> vars, Formula body) {
    push(name, item, Obligation::Kind::Valid, std::move(vars), std::move(body));
  }

  void satisfiable(const std::string& name, const std::string& item, Formula body) {
    push(name, item, Obligation::Kind::Satisfiable, attrs_, std::move(body));
  }

  void constant(const std::string& name, const std::string& item, bool holds, Binding evidence) {
    push(name, item, Obligation::Kind::Valid, {}, holds ? ex::truth() : ex::falsity());
    out.back().evidence = std::move(evidence);
  }

  void enabled(const TransitionDef& t) {
    EnablednessQuery q = enabledness_query(lc_, t, sig_);
    valid("enabledness", t.name, q.vars, ex::neg(q.violation));
  }

  /// ∀ attributes (and `in` when the transitions read input) of the domain.
  std::vector<TypedVar> domain_vars(bool input) const {
    std::vector<TypedVar> v = attrs_;
    if (input) v.push_back(TypedVar{"in", SortExpr::input_of(lc_.class_name)});
    return v;
  }

  Formula pre(const TransitionDef& t) const { return desugar_transition(t, sig_, frame_).pre; }
  Formula post(const TransitionDef& t) const { return desugar_transition(t, sig_, frame_).post; }

  std::vector<TypedVar> step_vars(bool input) const {
    std::vector<TypedVar> v = domain_vars(input);
    for (const auto& a : attribute_vars(sig_, true)) v.push_back(a);
    v.push_back(TypedVar{"out", SortExpr::out()});
    return v;
  }

  const StateDef& state(const std::string& s) const { return *lc_.find_state(s); }
  const std::vector<TypedVar>& attrs() const { return attrs_; }

 private:
  void push(const std::string& name, const std::string& item, Obligation::Kind kind, std::vector<TypedVar> vars,
            Formula body) {
    Obligation o;
    o.name = name;
    o.locus = lc_.name + "/" + item;
    o.kind = kind;
    o.vars = std::move(vars);
    o.body = std::move(body);
    o.self_class = lc_.class_name;
    out.push_back(std::move(o));
  }

  const LifecycleDoc& lc_;
  const ClassSignature& sig_;
  bool frame_;
  std::vector<TypedVar> attrs_;
};

std::set<std::string> reachable_states(const LifecycleDoc& lc) {
  std::set<std::string> seen(lc.initial_states.begin(), lc.initial_states.end());
  std::deque<std::string> todo(lc.initial_states.begin(), lc.initial_states.end());
  while (!todo.empty()) {
    std::string s = todo.front();
    todo.pop_front();
    for (const auto& t : lc.transitions)
      if (t.source == s && seen.insert(t.target).second) todo.push_back(t.target);
  }
  return seen;
}

}  // namespace

std::vector<Obligation> generate_obligations(const Step& step, const DocumentSet& before, const DocumentSet& after,
                                             bool frame) {
  if (!is_automaton_step(step.kind)) return {};
  const LifecycleDoc* old_lc = lifecycle_named(before, step.target);
  const LifecycleDoc* lc = lifecycle_named(after, step.target);
  if (!old_lc || !lc) throw Error(ErrorCode::TargetMissing, "no lifecycle " + step.target);
  SignatureEnv env = induce_signatures(after);
  const ClassSignature* sig = env.find(lc->class_name);
  if (!sig) throw Error(ErrorCode::IllegalPayload, "lifecycle " + lc->name + " belongs to an undeclared class");
  Generator g(*lc, *sig, frame);

  switch (step.kind) {
    case StepKind::AddState: {
      const StateDef& s = g.state(step.states.at(0).name);
      g.satisfiable("state-satisfiable", s.name, s.predicate);
      for (const auto& o : lc->states)
        if (o.name != s.name)
          g.valid("state-disjoint", s.name + "," + o.name, g.attrs(), ex::neg(ex::conj({s.predicate, o.predicate})));
      break;
    }
    case StepKind::RemState: {
      const bool initial = old_lc->is_initial(step.name);
      g.constant("state-not-initial", step.name, !initial, note({{"state", step.name}, {"initial", initial ? "yes" : "no"}}));
      const bool reachable = reachable_states(*old_lc).count(step.name) != 0;
      g.constant("state-unreachable", step.name, !reachable,
                 note({{"state", step.name}, {"reachable", reachable ? "yes" : "no"}}));
      break;
    }
    case StepKind::Split: {
      const Formula whole = old_lc->find_state(step.name)->predicate;
      const StateDef& p1 = g.state(step.states.at(0).name);
      const StateDef& p2 = g.state(step.states.at(1).name);
      const std::string item = step.name;
      g.valid("split-coverage", item, g.attrs(), ex::iff(ex::disj({p1.predicate, p2.predicate}), whole));
      g.valid("split-disjoint", item, g.attrs(), ex::neg(ex::conj({p1.predicate, p2.predicate})));
      g.satisfiable("state-satisfiable", p1.name, p1.predicate);
      g.satisfiable("state-satisfiable", p2.name, p2.predicate);
      std::set<std::string> old_names;
      for (const auto& t : old_lc->transitions) old_names.insert(t.name);
      for (const auto& t : lc->transitions)
        if (!old_names.count(t.name)) g.enabled(t);
      break;
    }
    case StepKind::AddTrans: {
      const TransitionDef& t = *lc->find_transition(step.transition->name);
      g.enabled(t);
      const Formula src = g.state(t.source).predicate;
      for (const auto& u : old_lc->transitions) {
        if (u.source != t.source || u.input.has_value() != t.input.has_value()) continue;
        g.valid("domain-disjoint", t.name + "," + u.name, g.domain_vars(t.input.has_value()),
                ex::neg(ex::conj({src, g.pre(t), g.pre(u)})));
      }
      break;
    }
    case StepKind::RemTrans: {
      const TransitionDef& t = *old_lc->find_transition(step.name);
      std::vector<Formula> rest;
      for (const auto& u : lc->transitions)
        if (u.source == t.source && u.input.has_value() == t.input.has_value()) rest.push_back(g.pre(u));
      g.valid("still-enabled", t.name, g.domain_vars(t.input.has_value()),
              ex::implies(ex::conj({g.state(t.source).predicate, g.pre(t)}), ex::disj(rest)));
      break;
    }
    case StepKind::RefTrans: {
      const TransitionDef& old_t = *old_lc->find_transition(step.name);
      const TransitionDef& t = *lc->find_transition(step.transition->name);
      const bool input = t.input.has_value() || old_t.input.has_value();
      const Formula src = g.state(t.source).predicate;
      g.valid("pre-equivalent", t.name, g.domain_vars(input), ex::implies(src, ex::iff(g.pre(t), g.pre(old_t))));
      g.valid("post-implied", t.name, g.step_vars(input),
              ex::implies(ex::conj({src, g.pre(t), g.post(t)}), g.post(old_t)));
      g.enabled(t);
      break;
    }
    case StepKind::RemInit: {
      const std::size_t left = lc->initial_states.size();
      g.constant("initial-remains", step.name, left >= 1,
                 note({{"state", step.name}, {"remaining", std::to_string(left)}}));
      break;
    }
    default:
      break;
  }
  return std::move(g.out);
}

ConditionReport discharge(const std::vector<Obligation>& obs, const Universe& base_u, const SignatureEnv& env) {
  ConditionReport r;
  if (obs.empty()) return r;
  Universe u = with_signatures(base_u, env);
  Solver solver(u);
  for (const auto& ob : obs) {
    CheckResult res{ob.name, ob.locus, Verdict::Pass, std::nullopt, {}, ob.reconstructed};
    try {
      const Binding base = ob.self_class.empty() ? Binding{} : self_binding(u, ob.self_class);
      if (ob.vars.empty()) {
        bool holds = solver.eval(ob.body, base);
        if (!holds) res.verdict = Verdict::Fail;
        if (!ob.evidence.values.empty()) res.binding = ob.evidence;
      } else if (ob.kind == Obligation::Kind::Valid) {
        if (auto cex = solver.find_any(ex::neg(ob.body), ob.vars, base)) {
          res.verdict = Verdict::Fail;
          res.binding = *cex;
          res.detail = "counterexample";
        }
      } else {
        if (auto w = solver.find_any(ob.body, ob.vars, base)) {
          res.binding = *w;
        } else {
          res.verdict = Verdict::Fail;
          res.detail = "no model";
        }
      }
    } catch (const BudgetExceeded& e) {
      res.verdict = Verdict::Budget;
      res.detail = e.what();
    } catch (const Error& e) {
      res.verdict = Verdict::Fail;
      res.detail = std::string(to_string(e.code())) + ": " + e.what();
    }
    r.results.push_back(std::move(res));
  }
  return r;
}

}  // namespace viewforge
