#include "viewforge/refine.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "viewforge/error.hpp"
#include "viewforge/lang.hpp"

namespace viewforge {

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::AddClass: return "addclass";
    case StepKind::AddRel: return "addrel";
    case StepKind::RefRel: return "refrel";
    case StepKind::AddMeth: return "addmeth";
    case StepKind::AddAttr: return "addattr";
    case StepKind::AddState: return "addstate";
    case StepKind::RemState: return "remstate";
    case StepKind::Split: return "split";
    case StepKind::AddTrans: return "addtrans";
    case StepKind::RemTrans: return "remtrans";
    case StepKind::RefTrans: return "reftrans";
    case StepKind::RemInit: return "reminit";
  }
  return "?";
}

std::string describe(const Step& s) {
  std::string d = std::string(to_string(s.kind)) + " " + s.target;
  switch (s.kind) {
    case StepKind::AddRel:
      return d + " " + render_relationship(*s.rel);
    case StepKind::RefRel:
      return d + " " + render_relationship(*s.rel) + " => " + render_relationship(*s.rel_new);
    case StepKind::AddMeth:
      return d + " " + render_method(*s.method);
    case StepKind::AddAttr:
      return d + " " + s.attribute->name;
    case StepKind::AddState:
      return d + " " + s.states.at(0).name;
    case StepKind::Split:
      return d + " " + s.name + " into " + s.states.at(0).name + ", " + s.states.at(1).name;
    case StepKind::AddTrans:
      return d + " " + s.transition->name;
    case StepKind::RefTrans:
      return d + " " + s.name + " => " + s.transition->name;
    default:
      return d + " " + s.name;
  }
}

bool is_automaton_step(StepKind k) {
  switch (k) {
    case StepKind::AddState:
    case StepKind::RemState:
    case StepKind::Split:
    case StepKind::AddTrans:
    case StepKind::RemTrans:
    case StepKind::RefTrans:
    case StepKind::RemInit:
      return true;
    default:
      return false;
  }
}

Formula Obligation::closed() const {
  return kind == Kind::Valid ? ex::forall_all(vars, body) : ex::exists_all(vars, body);
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

// ----------------------------------------------------------- resolution

template <typename T>
std::string resolve(const DocumentSet& ds, const std::string& target, const char* what) {
  if (const Document* d = ds.find(target)) {
    if (std::holds_alternative<T>(*d)) return target;
    fail(ErrorCode::TargetMissing, "document " + target + " is not " + what);
  }
  if constexpr (std::is_same_v<T, ClassDescriptionDoc> || std::is_same_v<T, LifecycleDoc>) {
    std::vector<std::string> hits;
    for (const auto& d : ds.documents())
      if (const T* x = std::get_if<T>(&d); x && x->class_name == target) hits.push_back(x->name);
    if (hits.size() == 1) return hits.front();
    if (hits.size() > 1) fail(ErrorCode::TargetMissing, "class " + target + " has several " + what + "s");
  }
  fail(ErrorCode::TargetMissing, "no " + std::string(what) + " " + target);
}

std::set<std::string> known_sort_names(const DocumentSet& ds) {
  std::set<std::string> names = ds.declared_classes();
  for (const auto* td : ds.types())
    for (const auto& s : td->sorts) names.insert(s.name);
  return names;
}

void require_known_sort(const DocumentSet& ds, const SortExpr& s, const std::string& where) {
  if (s.kind == SortExpr::Kind::Id) return;
  if (s.kind != SortExpr::Kind::Named && s.kind != SortExpr::Kind::Set)
    fail(ErrorCode::IllegalPayload, where + ": sort " + to_string(s) + " cannot be declared");
  if (!known_sort_names(ds).count(s.name))
    fail(ErrorCode::IllegalPayload, where + ": unknown sort " + s.name);
}

bool same_relationship(const Relationship& a, const Relationship& b) {
  return a == b || (a.first == b.second && a.second == b.first);
}

void refine_role(const Role& old, const Role& neu) {
  if (old.rolename && neu.rolename != old.rolename)
    fail(ErrorCode::IllegalPayload, "role " + *old.rolename + " cannot be renamed or dropped");
  if (old.card == Cardinality::One && neu.card == Cardinality::Many)
    fail(ErrorCode::IllegalPayload, "cardinality of " + old.class_name + " cannot be widened from 1 to *");
}

SignatureEnv signatures_or_throw(const DocumentSet& ds) {
  try {
    return induce_signatures(ds);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AttributeCollision) fail(ErrorCode::NameClash, e.what());
    fail(ErrorCode::IllegalPayload, e.what());
  }
}

StateDef* find_state(LifecycleDoc& lc, const std::string& s) {
  for (auto& st : lc.states)
    if (st.name == s) return &st;
  return nullptr;
}

void require_new_transition_name(const LifecycleDoc& lc, const std::string& name) {
  if (lc.find_transition(name)) fail(ErrorCode::NameClash, "transition " + name + " already exists in " + lc.name);
}

void require_endpoints(const LifecycleDoc& lc, const TransitionDef& t) {
  for (const auto& s : {t.source, t.target})
    if (!lc.find_state(s))
      fail(ErrorCode::IllegalPayload, "transition " + t.name + " refers to unknown state " + s + " of " + lc.name);
}

void validate_transitions(const LifecycleDoc& lc, const ClassSignature& sig) {
  for (const auto& t : lc.transitions) {
    require_endpoints(lc, t);
    try {
      open_transition(t, sig);
    } catch (const Error& e) {
      fail(ErrorCode::IllegalPayload, "transition " + t.name + ": " + e.what());
    }
  }
}

std::vector<TransitionDef> split_copies(const TransitionDef& t, const std::string& s, const std::string& p1,
                                        const std::string& p2) {
  std::vector<TransitionDef> out;
  const bool from = t.source == s;
  const bool to = t.target == s;
  const std::vector<std::string> parts{p1, p2};
  for (const auto& a : from ? parts : std::vector<std::string>{t.source})
    for (const auto& b : to ? parts : std::vector<std::string>{t.target}) {
      TransitionDef c = t;
      c.source = a;
      c.target = b;
      if (from && to) c.name = t.name + "_" + a + "_to_" + b;
      else if (from) c.name = t.name + "_" + a;
      else c.name = t.name + "_to_" + b;
      out.push_back(std::move(c));
    }
  return out;
}

void apply_automaton(LifecycleDoc& lc, const Step& st) {
  switch (st.kind) {
    case StepKind::AddState: {
      const StateDef& s = st.states.at(0);
      if (lc.find_state(s.name)) fail(ErrorCode::NameClash, "state " + s.name + " already exists in " + lc.name);
      lc.states.push_back(s);
      return;
    }
    case StepKind::RemState: {
      if (!lc.find_state(st.name)) fail(ErrorCode::TargetMissing, "no state " + st.name + " in " + lc.name);
      std::erase_if(lc.states, [&](const StateDef& s) { return s.name == st.name; });
      std::erase_if(lc.transitions,
                    [&](const TransitionDef& t) { return t.source == st.name || t.target == st.name; });
      std::erase(lc.initial_states, st.name);
      return;
    }
    case StepKind::Split: {
      StateDef* s = find_state(lc, st.name);
      if (!s) fail(ErrorCode::TargetMissing, "no state " + st.name + " in " + lc.name);
      const StateDef& p1 = st.states.at(0);
      const StateDef& p2 = st.states.at(1);
      if (p1.name == p2.name) fail(ErrorCode::NameClash, "both parts of the split are called " + p1.name);
      for (const auto* p : {&p1, &p2})
        if (p->name != st.name && lc.find_state(p->name))
          fail(ErrorCode::NameClash, "state " + p->name + " already exists in " + lc.name);
      *s = p1;
      lc.states.push_back(p2);
      if (lc.is_initial(st.name)) {
        std::erase(lc.initial_states, st.name);
        lc.initial_states.push_back(p1.name);
        lc.initial_states.push_back(p2.name);
      }
      std::vector<TransitionDef> kept;
      std::vector<TransitionDef> copies;
      for (const auto& t : lc.transitions) {
        if (t.source != st.name && t.target != st.name) {
          kept.push_back(t);
          continue;
        }
        for (auto& c : split_copies(t, st.name, p1.name, p2.name)) copies.push_back(std::move(c));
      }
      for (const auto& c : copies) {
        for (const auto& k : kept)
          if (k.name == c.name) fail(ErrorCode::NameClash, "transition " + c.name + " already exists in " + lc.name);
        kept.push_back(c);
      }
      lc.transitions = std::move(kept);
      return;
    }
    case StepKind::AddTrans: {
      const TransitionDef& t = *st.transition;
      require_new_transition_name(lc, t.name);
      require_endpoints(lc, t);
      lc.transitions.push_back(t);
      return;
    }
    case StepKind::RemTrans: {
      if (!lc.find_transition(st.name)) fail(ErrorCode::TargetMissing, "no transition " + st.name + " in " + lc.name);
      std::erase_if(lc.transitions, [&](const TransitionDef& t) { return t.name == st.name; });
      return;
    }
    case StepKind::RefTrans: {
      const TransitionDef* old = lc.find_transition(st.name);
      if (!old) fail(ErrorCode::TargetMissing, "no transition " + st.name + " in " + lc.name);
      const TransitionDef& t = *st.transition;
      if (t.source != old->source || t.target != old->target)
        fail(ErrorCode::IllegalPayload, "refined transition " + t.name + " must keep " + old->source + " -> " +
                                            old->target);
      if (t.name != st.name) require_new_transition_name(lc, t.name);
      for (auto& x : lc.transitions)
        if (x.name == st.name) x = t;
      return;
    }
    case StepKind::RemInit: {
      if (!lc.find_state(st.name)) fail(ErrorCode::TargetMissing, "no state " + st.name + " in " + lc.name);
      if (!lc.is_initial(st.name)) fail(ErrorCode::IllegalPayload, "state " + st.name + " is not initial");
      std::erase(lc.initial_states, st.name);
      return;
    }
    default:
      return;
  }
}

}  // namespace

StepOutcome apply_step(const DocumentSet& ds, const Step& step, bool frame) {
  DocumentSet out = ds;
  switch (step.kind) {
    case StepKind::AddClass:
    case StepKind::AddRel:
    case StepKind::RefRel: {
      const std::string name = resolve<ObjectModelDoc>(ds, step.target, "object model");
      Document doc = *ds.find(name);
      auto& om = std::get<ObjectModelDoc>(doc);
      if (step.kind == StepKind::AddClass) {
        if (ds.declared_classes().count(step.name) ||
            std::find(om.classes.begin(), om.classes.end(), step.name) != om.classes.end())
          fail(ErrorCode::NameClash, "class " + step.name + " already exists");
        om.classes.push_back(step.name);
      } else if (step.kind == StepKind::AddRel) {
        const Relationship& r = *step.rel;
        for (const auto& c : {r.first.class_name, r.second.class_name})
          if (std::find(om.classes.begin(), om.classes.end(), c) == om.classes.end())
            fail(ErrorCode::IllegalPayload, "class " + c + " is not in " + om.name);
        for (const auto& x : om.relationships)
          if (same_relationship(x, r))
            fail(ErrorCode::NameClash, "relationship " + render_relationship(r) + " already exists");
        om.relationships.push_back(r);
      } else {
        const Relationship& old = *step.rel;
        const Relationship& neu = *step.rel_new;
        auto it = std::find_if(om.relationships.begin(), om.relationships.end(),
                               [&](const Relationship& x) { return same_relationship(x, old); });
        if (it == om.relationships.end())
          fail(ErrorCode::TargetMissing, "no relationship " + render_relationship(old) + " in " + om.name);
        const Relationship& cur = *it;
        if (neu.first.class_name == cur.first.class_name && neu.second.class_name == cur.second.class_name) {
          refine_role(cur.first, neu.first);
          refine_role(cur.second, neu.second);
        } else if (neu.first.class_name == cur.second.class_name && neu.second.class_name == cur.first.class_name) {
          refine_role(cur.second, neu.first);
          refine_role(cur.first, neu.second);
        } else {
          fail(ErrorCode::IllegalPayload, "refined relationship must relate the same classes");
        }
        *it = neu;
      }
      canonicalize(doc);
      out.replace(name, std::move(doc));
      break;
    }
    case StepKind::AddMeth:
    case StepKind::AddAttr: {
      const std::string name = resolve<ClassDescriptionDoc>(ds, step.target, "class description");
      Document doc = *ds.find(name);
      auto& cd = std::get<ClassDescriptionDoc>(doc);
      if (step.kind == StepKind::AddMeth) {
        const MethodSig& m = *step.method;
        for (const auto& x : cd.methods)
          if (x.name == m.name && x.params.size() == m.params.size())
            fail(ErrorCode::NameClash, "method " + m.name + "/" + std::to_string(m.params.size()) +
                                           " already exists in " + cd.name);
        for (const auto& p : m.params) require_known_sort(ds, p.sort, "method " + m.name);
        cd.methods.push_back(m);
      } else {
        const AttributeDecl& a = *step.attribute;
        for (const auto& x : cd.attributes)
          if (x.name == a.name) fail(ErrorCode::NameClash, "attribute " + a.name + " already exists in " + cd.name);
        require_known_sort(ds, a.sort, "attribute " + a.name);
        cd.attributes.push_back(a);
      }
      canonicalize(doc);
      out.replace(name, std::move(doc));
      break;
    }
    default: {
      const std::string name = resolve<LifecycleDoc>(ds, step.target, "lifecycle");
      Document doc = *ds.find(name);
      apply_automaton(std::get<LifecycleDoc>(doc), step);
      canonicalize(doc);
      out.replace(name, std::move(doc));
      break;
    }
  }
  SignatureEnv env = signatures_or_throw(out);
  if (is_automaton_step(step.kind)) {
    const auto& lc = std::get<LifecycleDoc>(*out.find(resolve<LifecycleDoc>(out, step.target, "lifecycle")));
    const ClassSignature* sig = env.find(lc.class_name);
    if (!sig) fail(ErrorCode::IllegalPayload, "lifecycle " + lc.name + " belongs to undeclared class " + lc.class_name);
    validate_transitions(lc, *sig);
  }
  StepOutcome r;
  r.obligations = generate_obligations(step, ds, out, frame);
  r.docs = std::move(out);
  return r;
}

}  // namespace viewforge
