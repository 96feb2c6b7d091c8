#include "viewforge/system_model.hpp"

#include <algorithm>
#include <sstream>

#include "viewforge/error.hpp"

namespace viewforge {

// ------------------------------------------------------------ signatures

namespace {

void add_attribute(ClassSignature& sig, const AttributeDecl& a, bool induced) {
  for (const auto& existing : sig.attributes) {
    if (existing.name != a.name) continue;
    if (!(existing.sort == a.sort))
      throw Error(ErrorCode::AttributeCollision, "attribute " + a.name + " of class " + sig.class_name +
                                                     " is declared as " + to_string(existing.sort) + " and as " +
                                                     to_string(a.sort));
    if (induced) sig.induced.insert(a.name);
    return;
  }
  sig.attributes.push_back(a);
  if (induced) sig.induced.insert(a.name);
}

void add_method(ClassSignature& sig, const MethodSig& m) {
  for (const auto& existing : sig.methods) {
    if (existing.name != m.name || existing.params.size() != m.params.size()) continue;
    for (std::size_t i = 0; i < m.params.size(); ++i)
      if (!(existing.params[i].sort == m.params[i].sort))
        throw Error(ErrorCode::Structure, "method " + m.name + " of class " + sig.class_name +
                                              " is declared with different parameter sorts");
    return;
  }
  sig.methods.push_back(m);
}

void induce_from(ClassSignature& target, const Role& role) {
  if (!role.rolename) return;
  SortExpr sort = role.card == Cardinality::One ? SortExpr::named(role.class_name) : SortExpr::set_of(role.class_name);
  add_attribute(target, AttributeDecl{*role.rolename, sort}, true);
}

}  // namespace

SignatureEnv induce_signatures(const std::vector<const ObjectModelDoc*>& oms,
                               const std::vector<const ClassDescriptionDoc*>& cds) {
  SignatureEnv env;
  auto entry = [&](const std::string& c) -> ClassSignature& {
    auto& s = env.classes[c];
    s.class_name = c;
    return s;
  };
  for (const auto* om : oms)
    for (const auto& c : om->classes) entry(c);
  for (const auto* cd : cds) {
    ClassSignature& s = entry(cd->class_name);
    for (const auto& a : cd->attributes) add_attribute(s, a, false);
    for (const auto& m : cd->methods) add_method(s, m);
  }
  for (const auto* om : oms) {
    for (const auto& r : om->relationships) {
      induce_from(entry(r.second.class_name), r.first);
      induce_from(entry(r.first.class_name), r.second);
    }
  }
  for (auto& [c, s] : env.classes) {
    std::stable_sort(s.attributes.begin(), s.attributes.end(),
                     [](const AttributeDecl& a, const AttributeDecl& b) { return a.name < b.name; });
    std::stable_sort(s.methods.begin(), s.methods.end(), [](const MethodSig& a, const MethodSig& b) {
      return a.name != b.name ? a.name < b.name : a.params.size() < b.params.size();
    });
  }
  return env;
}

SignatureEnv induce_signatures(const DocumentSet& ds) {
  return induce_signatures(ds.object_models(), ds.class_documents());
}

std::string to_string(const ObjectState& s) {
  std::ostringstream out;
  out << (s.liveness == Liveness::Active ? s.control : std::string("dormant")) << " {";
  bool first = true;
  for (const auto& [k, v] : s.valuation) {
    out << (first ? "" : ", ") << k << " = " << to_string(v);
    first = false;
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------- medium

std::uint64_t MediumState::enqueue(Message m, std::int64_t tick) {
  Envelope e{std::move(m), next_uid++, tick, false};
  auto key = std::make_pair(e.msg.sender, e.msg.receiver);
  queues[key].push_back(std::move(e));
  return next_uid - 1;
}

void MediumState::requeue_front(Envelope e) {
  e.stalled = true;
  auto key = std::make_pair(e.msg.sender, e.msg.receiver);
  queues[key].push_front(std::move(e));
}

std::size_t MediumState::size() const {
  std::size_t n = 0;
  for (const auto& [k, q] : queues) n += q.size();
  return n;
}

std::vector<Envelope> MediumState::pending() const {
  std::vector<Envelope> out;
  for (const auto& [k, q] : queues) out.insert(out.end(), q.begin(), q.end());
  return out;
}

MediumStep medium_step(const MediumState& m, std::int64_t tick, const std::function<bool()>& coin) {
  MediumStep r;
  r.next = m;
  // receiver -> heads (sender order); queues are keyed by (sender, receiver)
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> by_receiver;
  for (const auto& [key, q] : r.next.queues) {
    if (q.empty() || q.front().enqueued >= tick) continue;
    by_receiver[key.second].push_back(key);
  }
  auto age = [&](const Envelope& e) { return tick - e.enqueued - 1; };
  auto is_forced = [&](const Envelope& e) { return !e.stalled && age(e) >= m.max_delay; };
  for (auto& [receiver, keys] : by_receiver) {
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::pair<std::string, std::string>, bool>> chosen;
    if (receiver == kExternal) {
      for (const auto& k : keys) {
        const Envelope& head = r.next.queues[k].front();
        if (is_forced(head)) chosen.emplace_back(k, true);
        else if (coin()) chosen.emplace_back(k, false);
      }
    } else {
      const std::pair<std::string, std::string>* oldest = nullptr;
      for (const auto& k : keys) {
        const Envelope& head = r.next.queues[k].front();
        if (!is_forced(head)) continue;
        if (!oldest || head.enqueued < r.next.queues[*oldest].front().enqueued) oldest = &k;
      }
      if (oldest) {
        chosen.emplace_back(*oldest, true);
      } else {
        for (const auto& k : keys)
          if (coin()) {
            chosen.emplace_back(k, false);
            break;
          }
      }
    }
    for (const auto& [k, forced] : chosen) {
      auto& q = r.next.queues[k];
      r.deliveries.push_back(Delivery{q.front(), forced});
      q.pop_front();
    }
  }
  for (auto it = r.next.queues.begin(); it != r.next.queues.end();) {
    if (it->second.empty()) it = r.next.queues.erase(it);
    else ++it;
  }
  std::stable_sort(r.deliveries.begin(), r.deliveries.end(), [](const Delivery& a, const Delivery& b) {
    if (a.env.msg.receiver != b.env.msg.receiver) return a.env.msg.receiver < b.env.msg.receiver;
    return a.env.msg.sender < b.env.msg.sender;
  });
  return r;
}

// --------------------------------------------------------------- stepper

namespace {

struct Plan {
  const TransitionDef* t = nullptr;
  OpenTransition open;
  std::vector<TypedVar> vars;
  std::vector<TypedVar> hidden;  // inputs and locals
  std::vector<std::pair<std::string, std::string>> creations;  // variable, class
  Formula free_form;   // creation variables range over pools
  Formula fixed_form;  // creation variables pinned to `fresh~<var>`
};

}  // namespace

struct Stepper::Impl {
  Impl(const LifecycleDoc& lc, const ClassSignature& sig, const Universe& u, bool frame)
      : lc(lc), sig(sig), solver(u), frame(frame) {}

  const LifecycleDoc& lc;
  const ClassSignature& sig;
  Solver solver;
  bool frame;
  std::map<std::string, std::unique_ptr<Plan>> plans;
  std::map<std::string, Formula> state_forms;

  Binding base(const ObjectState& st, const std::string& self, const std::optional<Message>& input) const {
    Binding b;
    for (const auto& a : sig.attributes) {
      auto it = st.valuation.find(a.name);
      if (it != st.valuation.end()) b.set(a.name, it->second);
    }
    b.set("self", Value::atom(self));
    if (input) b.set("in", Value::message(*input));
    return b;
  }

  static bool candidate(const TransitionDef& t, const ObjectState& st, const std::optional<Message>& input) {
    if (t.source != st.control) return false;
    if (t.input.has_value() != input.has_value()) return false;
    if (t.input && (t.input->method != input->name || t.input->vars.size() != input->args.size())) return false;
    return true;
  }

  Plan& plan(const TransitionDef& t) {
    auto it = plans.find(t.name);
    if (it != plans.end()) return *it->second;
    auto p = std::make_unique<Plan>();
    p->t = &t;
    p->open = open_transition(t, sig);
    const OpenTransition& o = p->open;
    p->vars = o.inputs;
    p->vars.insert(p->vars.end(), o.locals.begin(), o.locals.end());
    p->hidden = p->vars;
    for (const auto& a : attribute_vars(sig, true)) p->vars.push_back(a);
    p->vars.push_back(TypedVar{"out", SortExpr::out()});
    for (const auto& op : t.outputs)
      if (op.new_var) p->creations.emplace_back(*op.new_var, op.new_class);
    const StateDef* target = lc.find_state(t.target);
    if (!target) throw Error(ErrorCode::Structure, "transition " + t.name + " targets unknown state " + t.target);
    std::vector<ExprPtr> parts{o.match, o.pre, o.out_eq, o.post};
    if (frame) parts.push_back(o.frame);
    parts.push_back(prime(target->predicate, sig.attribute_names()));
    p->free_form = ex::conj(parts);
    for (const auto& [var, cls] : p->creations) parts.push_back(ex::eq(ex::name(var), ex::name("fresh~" + var)));
    p->fixed_form = ex::conj(parts);
    return *plans.emplace(t.name, std::move(p)).first->second;
  }
};

Stepper::Stepper(const LifecycleDoc& lc, const ClassSignature& sig, const Universe& u, bool frame)
    : impl_(std::make_unique<Impl>(lc, sig, u, frame)) {}
Stepper::~Stepper() = default;

const LifecycleDoc& Stepper::lifecycle() const { return impl_->lc; }
const ClassSignature& Stepper::signature() const { return impl_->sig; }
Solver& Stepper::solver() { return impl_->solver; }

std::vector<StepResult> Stepper::step(const ObjectState& st, const std::string& self,
                                      const std::optional<Message>& input,
                                      const std::map<std::string, std::string>& fresh) {
  std::vector<StepResult> results;
  const Binding base = impl_->base(st, self, input);
  for (const auto& t : impl_->lc.transitions) {
    if (!Impl::candidate(t, st, input)) continue;
    Plan& p = impl_->plan(t);
    bool fixed = !p.creations.empty();
    Binding b = base;
    for (const auto& [var, cls] : p.creations) {
      auto it = fresh.find(cls);
      if (it == fresh.end()) fixed = false;
      else b.set("fresh~" + var, Value::atom(it->second));
    }
    const Formula& f = fixed ? p.fixed_form : p.free_form;
    impl_->solver.for_each_model(f, p.vars, b, [&](const Binding& m) {
      StepResult r;
      r.transition = t.name;
      r.binding = m;
      for (const auto& item : m.find("out")->as_seq()) r.outputs.push_back(item.as_message());
      r.next.control = t.target;
      r.next.liveness = Liveness::Active;
      for (const auto& a : impl_->sig.attributes) r.next.valuation[a.name] = *m.find(a.name + "'");
      for (const auto& [var, cls] : p.creations) r.created[var] = m.find(var)->as_atom();
      for (const auto& prev : results)
        if (prev.outputs == r.outputs && prev.next == r.next) return true;
      results.push_back(std::move(r));
      return true;
    });
  }
  return results;
}

bool Stepper::enabled(const ObjectState& st, const std::string& self, const std::optional<Message>& input) {
  const Binding base = impl_->base(st, self, input);
  for (const auto& t : impl_->lc.transitions) {
    if (!Impl::candidate(t, st, input)) continue;
    Plan& p = impl_->plan(t);
    if (impl_->solver.exists(p.free_form, p.vars, base)) return true;
  }
  return false;
}

std::vector<std::string> Stepper::accepts(const ObjectState& st, const std::string& self,
                                            const std::optional<Message>& input, const std::vector<Message>& outputs,
                                            const ObjectState& next) {
  Binding base = impl_->base(st, self, input);
  for (const auto& a : impl_->sig.attributes) {
    auto it = next.valuation.find(a.name);
    if (it == next.valuation.end()) return {};
    base.set(a.name + "'", it->second);
  }
  std::vector<Value> outs;
  for (const auto& m : outputs) outs.push_back(Value::message(m));
  base.set("out", Value::seq(std::move(outs)));
  std::vector<std::string> names;
  for (const auto& t : impl_->lc.transitions) {
    if (!Impl::candidate(t, st, input)) continue;
    Plan& p = impl_->plan(t);
    if (impl_->solver.exists(p.free_form, p.hidden, base)) names.push_back(t.name);
  }
  return names;
}

std::optional<ObjectState> Stepper::first_state(const std::string& control) {
  const StateDef* s = impl_->lc.find_state(control);
  if (!s) return std::nullopt;
  auto m = impl_->solver.find_model(s->predicate, attribute_vars(impl_->sig, false));
  if (!m) return std::nullopt;
  ObjectState st;
  st.control = control;
  st.liveness = Liveness::Active;
  st.valuation = m->values;
  return st;
}

std::vector<StepResult> object_step(const LifecycleDoc& lc, const ObjectState& st, const std::string& self,
                                    const std::optional<Message>& input, const Universe& u,
                                    const SignatureEnv& env) {
  Stepper s(lc, env.at(lc.class_name), u);
  return s.step(st, self, input);
}

}  // namespace viewforge
