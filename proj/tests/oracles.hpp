#pragma once

#include <fstream>
#include <set>
#include <string>

#include "support.hpp"
#include "viewforge/refine.hpp"
#include "viewforge/system_model.hpp"

namespace vftest {

/// Independent re-checks. Each returns an empty string when the evidence
/// holds, else what is wrong with it.

struct ExpectedFault {
  std::string check, locus;
};

inline ExpectedFault read_expected(const fs::path& dir) {
  std::ifstream in(dir / "expected");
  ExpectedFault e;
  in >> e.check >> e.locus;
  return e;
}

inline std::vector<fs::path> fault_dirs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(corpus("faults"))) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline std::string strip_prime(std::string s) {
  if (!s.empty() && s.back() == '\'') s.pop_back();
  return s;
}

inline viewforge::Binding with_self(viewforge::Binding b, const viewforge::Universe& u, const std::string& cls) {
  for (const auto& [k, v] : viewforge::self_binding(u, cls).values) b.set(k, v);
  return b;
}

inline std::string text_of(const viewforge::Binding& b, const std::string& key) {
  const viewforge::Value* v = b.find(key);
  return v ? (v->is_atom() ? v->as_atom() : viewforge::to_string(*v)) : std::string();
}

}  // namespace detail

/// The reported fault at `want` is a FAIL whose binding really shows the
/// problem: names are absent from the signature, both state predicates
/// hold, no valuation satisfies the predicate, or the enabled input has no
/// successor.
inline std::string recheck_fault(const viewforge::Project& p, const viewforge::ConditionReport& report,
                                 const ExpectedFault& want) {
  using namespace viewforge;
  using namespace detail;
  const CheckResult* hit = nullptr;
  for (const auto& c : report.results)
    if (c.verdict == Verdict::Fail && c.check == want.check && c.locus == want.locus) hit = &c;
  if (!hit) return "no FAIL " + want.check + " at " + want.locus;
  if (!hit->binding) return "no binding";
  const Binding& b = *hit->binding;
  const auto slash = want.locus.find('/');
  const std::string doc = want.locus.substr(0, slash);
  const std::string item = slash == std::string::npos ? "" : want.locus.substr(slash + 1);

  if (want.check == "unknown-class")
    return p.docs.declared_classes().count(text_of(b, "class")) ? "class is declared" : "";
  if (want.check == "attribute-collision") {
    const std::string cls = text_of(b, "class"), attr = text_of(b, "attribute");
    bool declared = false, induced = false;
    for (const auto* cd : p.docs.class_documents())
      if (cd->class_name == cls)
        for (const auto& a : cd->attributes) declared |= a.name == attr;
    for (const auto* om : p.docs.object_models())
      for (const auto& r : om->relationships)
        induced |= (r.first.class_name == cls && r.second.rolename == attr) ||
                   (r.second.class_name == cls && r.first.rolename == attr);
    return declared && induced ? "" : "attribute is not both declared and induced";
  }

  SignatureEnv env = induce_signatures(p.docs);
  Universe u = with_signatures(project_universe(p), env);
  const Document* d = p.docs.find(doc);
  if (!d || !std::holds_alternative<LifecycleDoc>(*d)) return "no lifecycle " + doc;
  const LifecycleDoc& lc = std::get<LifecycleDoc>(*d);
  const ClassSignature& sig = env.at(lc.class_name);

  if (want.check == "unknown-message" || want.check == "arity-mismatch") {
    const std::string msg = text_of(b, "message");
    const std::string name = msg.substr(0, msg.find('/'));
    const std::size_t arity = std::stoul(msg.substr(msg.find('/') + 1));
    const std::string cls = b.find("class") ? text_of(b, "class") : lc.class_name;
    if (env.at(cls).find_method(name, arity)) return "method exists";
    if (env.at(cls).has_method_named(name) != (want.check == "arity-mismatch")) return "wrong kind of message fault";
    return "";
  }
  if (want.check == "unknown-name") {
    const std::string name = strip_prime(text_of(b, "name"));
    return sig.find_attribute(name) || u.literal(name) ? "name is known" : "";
  }
  if (want.check == "sort-mismatch") {
    Formula f = parse_formula(text_of(b, "term"));
    if (f->args.size() != 2) return "not a binary term";
    const AttributeDecl* l = sig.find_attribute(strip_prime(f->args[0]->name));
    const AttributeDecl* r = sig.find_attribute(strip_prime(f->args[1]->name));
    if (!l || !r) return "operands are not attributes";
    return l->sort == r->sort ? "sorts agree" : "";
  }
  if (want.check == "condition-1") {
    const StateDef* s = lc.find_state(item);
    if (!s) return "no state " + item;
    std::vector<ex::TypedVar> vars;
    for (const auto& a : sig.attributes) vars.push_back({a.name, a.sort});
    return brute_models(s->predicate, u, vars, self_binding(u, lc.class_name)).empty() ? "" : "predicate has a model";
  }
  if (want.check == "condition-2") {
    const std::string a = item.substr(0, item.find(',')), c = item.substr(item.find(',') + 1);
    Binding full = with_self(b, u, lc.class_name);
    return eval(lc.find_state(a)->predicate, full, u) && eval(lc.find_state(c)->predicate, full, u)
               ? ""
               : "predicates are not both true";
  }
  if (want.check == "condition-3") {
    const TransitionDef* t = lc.find_transition(item);
    if (!t) return "no transition " + item;
    if (!eval(lc.find_state(t->source)->predicate, with_self(b, u, lc.class_name), u)) return "source does not hold";
    ObjectState st;
    st.control = t->source;
    st.liveness = Liveness::Active;
    for (const auto& a : sig.attributes) st.valuation[a.name] = *b.find(a.name);
    const std::string self = text_of(self_binding(u, lc.class_name), "self");
    for (const auto& r : object_step(lc, st, self, b.find("in")->as_message(), u, env))
      if (r.transition == t->name) return "transition has a successor";
    return "";
  }
  return "unhandled check " + want.check;
}

/// The oracle's trace is a run of `updated` that `original` follows up to
/// the last step and cannot take, without ever leaving an input unhandled.
inline std::string recheck_distinguishing(const viewforge::OracleResult& r, const viewforge::LifecycleDoc& original,
                                          const viewforge::LifecycleDoc& updated, const viewforge::SignatureEnv& env,
                                          const viewforge::Universe& u) {
  using namespace viewforge;
  if (r.refines) return "oracle reports refinement";
  Stepper fresh(updated, env.at(updated.class_name), u);
  Stepper old(original, env.at(original.class_name), u);
  if (!updated.is_initial(r.initial.control)) return "trace does not start in an initial state";

  std::set<std::string> controls;
  for (const auto& s : original.initial_states) {
    Binding b = self_binding(u, original.class_name);
    b.set("self", Value::atom(r.self));
    for (const auto& [k, v] : r.initial.valuation) b.set(k, v);
    if (eval(original.find_state(s)->predicate, b, u)) controls.insert(s);
  }
  ObjectState cur = r.initial;
  for (const auto& step : r.trace) {
    if (fresh.accepts(cur, r.self, step.input, step.outputs, step.next).empty()) return "step is not a run of the new automaton";
    if (controls.empty()) return "old automaton stopped before the end of the trace";
    std::set<std::string> next;
    for (const auto& c : controls) {
      ObjectState st = cur;
      st.control = c;
      if (!old.enabled(st, r.self, step.input)) return "chaotic completion would accept";
      for (const auto& t : old.accepts(st, r.self, step.input, step.outputs, step.next))
        next.insert(original.find_transition(t)->target);
    }
    controls = next;
    cur = step.next;
  }
  return controls.empty() ? "" : "old automaton follows the whole trace";
}

}  // namespace vftest
