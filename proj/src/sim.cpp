#include <algorithm>
#include <map>
#include <set>

#include "viewforge/error.hpp"
#include "viewforge/sim.hpp"

namespace viewforge {

namespace {

/// Records every resolution made through it.
class Recorder : public Chooser {
 public:
  explicit Recorder(Chooser& inner) : inner_(inner) {}
  std::size_t choose(std::size_t n) override {
    std::size_t c = inner_.choose(n);
    made.emplace_back(c, n);
    return c;
  }
  std::vector<std::pair<std::size_t, std::size_t>> made;  // choice, arity

 private:
  Chooser& inner_;
};

/// Follows a prefix, then picks 0.
class PrefixChooser : public Chooser {
 public:
  explicit PrefixChooser(const std::vector<std::size_t>& prefix) : prefix_(prefix) {}
  std::size_t choose(std::size_t) override { return pos_ < prefix_.size() ? prefix_[pos_++] : 0; }

 private:
  const std::vector<std::size_t>& prefix_;
  std::size_t pos_ = 0;
};

Binding visible_part(const Binding& b) {
  Binding r;
  for (const auto& [k, v] : b.values)
    if (k != "out" && k.back() != '\'') r.values.emplace(k, v);
  return r;
}

CheckResult verdict_of(const char* name, const std::vector<std::string>& problems) {
  CheckResult c{name, "trace", Verdict::Pass, std::nullopt, {}, false};
  if (!problems.empty()) {
    c.verdict = Verdict::Fail;
    c.detail = problems.front();
    if (problems.size() > 1) c.detail += " (and " + std::to_string(problems.size() - 1) + " more)";
  }
  return c;
}

}  // namespace

struct Simulator::Impl {
  Impl(const DocumentSet& d, const Universe& base)
      : ds(d), env(induce_signatures(d)), u(with_signatures(base, env)), solver(u) {
    for (const auto* lc : ds.lifecycles()) {
      for (const auto& t : lc->transitions)
        if (!t.input)
          throw Error(ErrorCode::Scenario, "transition " + t.name + " of " + lc->name +
                                               " has no input; spontaneous transitions are not simulated");
      const ClassSignature* sig = env.find(lc->class_name);
      if (!sig) throw Error(ErrorCode::Scenario, "lifecycle " + lc->name + " belongs to an undeclared class");
      steppers.emplace(lc->class_name, std::make_unique<Stepper>(*lc, *sig, u));
    }
  }

  DocumentSet ds;
  SignatureEnv env;
  Universe u;
  Solver solver;
  std::map<std::string, std::unique_ptr<Stepper>> steppers;
  std::map<std::string, ObjectState> initial_cache;

  Stepper& stepper_for(const std::string& id, int line = 0) {
    auto it = steppers.find(u.class_of(id));
    if (it == steppers.end())
      throw Error(ErrorCode::Scenario, (line ? "line " + std::to_string(line) + ": " : std::string()) + "object " + id +
                                           " has no lifecycle");
    return *it->second;
  }

  ObjectState created_state(const std::string& cls) {
    auto it = initial_cache.find(cls);
    if (it != initial_cache.end()) return it->second;
    auto s = steppers.find(cls);
    if (s == steppers.end()) throw Error(ErrorCode::Scenario, "created object of class " + cls + " has no lifecycle");
    for (const auto& q : s->second->lifecycle().initial_states)
      if (auto st = s->second->first_state(q)) return initial_cache.emplace(cls, *st).first->second;
    throw Error(ErrorCode::Scenario, "no initial state of class " + cls + " has a model");
  }

  SystemConfig setup(const Scenario& sc) {
    SystemConfig c;
    c.medium.max_delay = sc.max_delay;
    for (const auto& cls : u.classes())
      for (const auto& id : u.pool(cls)) c.objects[id.as_atom()] = ObjectState{};
    for (const auto& o : sc.objects) {
      auto where = [&] { return "line " + std::to_string(o.line) + ": "; };
      auto obj = c.objects.find(o.id);
      if (obj == c.objects.end()) throw Error(ErrorCode::Scenario, where() + o.id + " is not a pool identifier");
      if (obj->second.liveness == Liveness::Active) throw Error(ErrorCode::Scenario, where() + o.id + " listed twice");
      Stepper& s = stepper_for(o.id, o.line);
      const LifecycleDoc& lc = s.lifecycle();
      const StateDef* def = lc.find_state(o.control);
      if (!def) throw Error(ErrorCode::Scenario, where() + "no state " + o.control + " in " + lc.name);
      if (!lc.is_initial(o.control))
        throw Error(ErrorCode::Scenario, where() + o.control + " is not an initial state of " + lc.name);
      Binding base;
      base.set("self", Value::atom(o.id));
      std::set<std::string> given;
      for (const auto& [name, term] : o.attributes) {
        const AttributeDecl* a = s.signature().find_attribute(name);
        if (!a) throw Error(ErrorCode::Scenario, where() + "class " + lc.class_name + " has no attribute " + name);
        if (!given.insert(name).second) throw Error(ErrorCode::Scenario, where() + name + " given twice");
        Value v = solver.eval_term(term, Binding{});
        if (!u.contains(a->sort, v))
          throw Error(ErrorCode::Scenario, where() + to_string(v) + " is not a value of " + to_string(a->sort));
        base.set(name, v);
      }
      std::vector<TypedVar> rest;
      for (const auto& a : attribute_vars(s.signature(), false))
        if (!given.count(a.name)) rest.push_back(a);
      auto m = solver.find_model(def->predicate, rest, base);
      if (!m) throw Error(ErrorCode::Scenario, where() + "no valuation of " + o.id + " satisfies state " + o.control);
      ObjectState st;
      st.control = o.control;
      st.liveness = Liveness::Active;
      for (const auto& a : s.signature().attributes) {
        const Value* v = m->find(a.name);
        st.valuation[a.name] = v ? *v : *base.find(a.name);
      }
      obj->second = std::move(st);
    }
    return c;
  }

  Message stimulus_message(const Stimulus& s) {
    auto where = "line " + std::to_string(s.line) + ": ";
    const std::string cls = u.class_of(s.receiver);
    if (cls.empty()) throw Error(ErrorCode::Scenario, where + s.receiver + " is not a pool identifier");
    const ClassSignature* sig = env.find(cls);
    const MethodSig* m = sig ? sig->find_method(s.method, s.args.size()) : nullptr;
    if (!m)
      throw Error(ErrorCode::Scenario, where + "class " + cls + " has no method " + s.method + " with " +
                                           std::to_string(s.args.size()) + " arguments");
    Message msg{s.receiver, kExternal, s.method, {}};
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      Value v = solver.eval_term(s.args[i], Binding{});
      if (!u.contains(m->params[i].sort, v))
        throw Error(ErrorCode::Scenario, where + to_string(v) + " is not a value of " + to_string(m->params[i].sort));
      msg.args.push_back(std::move(v));
    }
    return msg;
  }

  std::map<std::string, std::string> fresh_ids(const SystemConfig& c) {
    std::map<std::string, std::string> fresh;
    for (const auto& cls : u.classes())
      for (const auto& id : u.pool(cls))
        if (c.objects.at(id.as_atom()).liveness == Liveness::Dormant) {
          fresh.emplace(cls, id.as_atom());
          break;
        }
    return fresh;
  }

  Trace run(const Scenario& sc, Chooser& chooser) {
    Trace tr;
    tr.horizon = sc.horizon;
    tr.max_delay = sc.max_delay;
    tr.drop_on_stall = sc.drop_on_stall;
    SystemConfig c = setup(sc);
    std::vector<Message> stimuli;
    for (const auto& s : sc.stimuli) stimuli.push_back(stimulus_message(s));
    auto pick = [&](std::size_t n) -> std::size_t {
      if (n < 2) return 0;
      std::size_t k = chooser.choose(n);
      tr.choices.push_back(k);
      return k;
    };
    auto emit = [&](const Message& m, std::int64_t tick, const std::string& by) {
      TraceEvent e;
      e.tick = tick;
      e.kind = EventKind::Emit;
      e.object = by;
      e.uid = c.medium.enqueue(m, tick);
      e.msg = m;
      tr.events.push_back(std::move(e));
    };

    for (std::int64_t tick = 0; tick < sc.horizon; ++tick) {
      c.clock = tick;
      MediumStep ms = medium_step(c.medium, tick, [&] { return pick(2) == 1; });
      c.medium = std::move(ms.next);
      for (const auto& d : ms.deliveries) {
        const std::string& receiver = d.env.msg.receiver;
        TraceEvent de;
        de.tick = tick;
        de.kind = EventKind::Deliver;
        de.object = receiver;
        de.uid = d.env.uid;
        de.msg = d.env.msg;
        de.emitted = d.env.enqueued;
        de.forced = d.forced;
        tr.events.push_back(de);
        if (receiver == kExternal) continue;
        ObjectState& st = c.objects.at(receiver);
        std::vector<StepResult> results;
        if (st.liveness == Liveness::Active)
          results = stepper_for(receiver).step(st, receiver, d.env.msg, fresh_ids(c));
        if (results.empty()) {
          TraceEvent se = de;
          se.kind = EventKind::Stall;
          se.forced = false;
          se.dropped = sc.drop_on_stall;
          tr.events.push_back(std::move(se));
          if (!sc.drop_on_stall) c.medium.requeue_front(d.env);
          continue;
        }
        const StepResult& r = results[pick(results.size())];
        TraceEvent fe;
        fe.tick = tick;
        fe.kind = EventKind::Fire;
        fe.object = receiver;
        fe.transition = r.transition;
        fe.binding = visible_part(r.binding);
        fe.state = r.next;
        tr.events.push_back(std::move(fe));
        st = r.next;
        for (const auto& [var, id] : r.created) {
          ObjectState& born = c.objects.at(id);
          if (born.liveness != Liveness::Dormant)
            throw Error(ErrorCode::IdPoolExhausted, "no dormant identifier left in the pool of " + u.class_of(id));
          born = created_state(u.class_of(id));
          TraceEvent ce;
          ce.tick = tick;
          ce.kind = EventKind::Create;
          ce.object = id;
          ce.state = born;
          tr.events.push_back(std::move(ce));
        }
        for (const auto& m : r.outputs) emit(m, tick, receiver);
      }
      for (std::size_t i = 0; i < sc.stimuli.size(); ++i)
        if (sc.stimuli[i].tick == tick) emit(stimuli[i], tick, kExternal);
    }
    c.clock = sc.horizon;
    tr.final = std::move(c);
    return tr;
  }

  // ------------------------------------------------------------- checks

  std::vector<std::string> conservation(const Trace& tr) {
    enum class S { Queued, Taken, Lost };
    std::map<std::uint64_t, S> status;
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const TraceEvent& e = tr.events[i];
      const std::string at = "event " + std::to_string(i) + ": ";
      auto it = status.find(e.uid);
      switch (e.kind) {
        case EventKind::Emit:
          if (it != status.end()) bad.push_back(at + "#" + std::to_string(e.uid) + " emitted twice");
          status[e.uid] = S::Queued;
          break;
        case EventKind::Deliver:
          if (it == status.end()) bad.push_back(at + "#" + std::to_string(e.uid) + " delivered but never emitted");
          else if (it->second != S::Queued) bad.push_back(at + "#" + std::to_string(e.uid) + " delivered twice");
          else it->second = S::Taken;
          break;
        case EventKind::Stall:
          if (it == status.end() || it->second != S::Taken) {
            bad.push_back(at + "#" + std::to_string(e.uid) + " stalled without a delivery");
          } else if (e.dropped) {
            it->second = S::Lost;
            bad.push_back(at + "#" + std::to_string(e.uid) + " dropped");
          } else {
            it->second = S::Queued;
          }
          break;
        default: break;
      }
    }
    std::set<std::uint64_t> pending;
    for (const auto& env : tr.final.medium.pending()) pending.insert(env.uid);
    for (const auto& [uid, s] : status) {
      if (s == S::Queued && !pending.count(uid))
        bad.push_back("#" + std::to_string(uid) + " neither delivered nor queued at the horizon");
      if (s == S::Taken && pending.count(uid)) bad.push_back("#" + std::to_string(uid) + " delivered and still queued");
    }
    for (auto uid : pending)
      if (!status.count(uid)) bad.push_back("#" + std::to_string(uid) + " queued but never emitted");
    return bad;
  }

  std::vector<std::string> fifo(const Trace& tr) {
    using Pair = std::pair<std::string, std::string>;
    std::map<Pair, std::vector<std::uint64_t>> emitted;
    std::map<Pair, std::vector<std::uint64_t>> delivered;
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const TraceEvent& e = tr.events[i];
      Pair p{e.msg.sender, e.msg.receiver};
      if (e.kind == EventKind::Emit) emitted[p].push_back(e.uid);
      if (e.kind != EventKind::Deliver) continue;
      auto& d = delivered[p];
      if (!d.empty() && d.back() == e.uid) continue;  // redelivery after a stall
      d.push_back(e.uid);
      const auto& em = emitted[p];
      if (d.size() > em.size() || em[d.size() - 1] != e.uid)
        bad.push_back("event " + std::to_string(i) + ": #" + std::to_string(e.uid) + " overtakes an earlier message from " +
                      p.first + " to " + p.second);
    }
    return bad;
  }

  std::vector<std::string> bounded_delay(const Trace& tr) {
    std::map<std::uint64_t, std::int64_t> emit_tick;
    std::set<std::uint64_t> attempted;
    std::vector<std::string> bad;
    const std::int64_t limit = tr.max_delay + 1;
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const TraceEvent& e = tr.events[i];
      if (e.kind == EventKind::Emit) emit_tick[e.uid] = e.tick;
      if (e.kind != EventKind::Deliver || !attempted.insert(e.uid).second) continue;
      auto it = emit_tick.find(e.uid);
      if (it != emit_tick.end() && e.tick - it->second > limit)
        bad.push_back("event " + std::to_string(i) + ": #" + std::to_string(e.uid) + " delivered after " +
                      std::to_string(e.tick - it->second) + " ticks");
    }
    for (const auto& [uid, t] : emit_tick)
      if (!attempted.count(uid) && t + limit <= tr.horizon - 1)
        bad.push_back("#" + std::to_string(uid) + " emitted at tick " + std::to_string(t) + " was never delivered");
    return bad;
  }

  std::vector<std::string> post_states(const Trace& tr) {
    std::vector<std::string> bad;
    auto legal = [&](const std::string& id, const ObjectState& st) {
      if (st.liveness != Liveness::Active) return true;
      auto it = steppers.find(u.class_of(id));
      if (it == steppers.end()) return false;
      const StateDef* def = it->second->lifecycle().find_state(st.control);
      if (!def) return false;
      Binding b;
      b.set("self", Value::atom(id));
      for (const auto& [k, v] : st.valuation) b.set(k, v);
      for (const auto& a : it->second->signature().attributes)
        if (!st.valuation.count(a.name)) return false;
      return solver.eval(def->predicate, b);
    };
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const TraceEvent& e = tr.events[i];
      if ((e.kind == EventKind::Fire || e.kind == EventKind::Create) && !legal(e.object, e.state))
        bad.push_back("event " + std::to_string(i) + ": " + e.object + " in " + to_string(e.state) +
                      " violates its state predicate");
    }
    for (const auto& [id, st] : tr.final.objects)
      if (!legal(id, st)) bad.push_back("final state of " + id + " violates its state predicate");
    return bad;
  }

  std::vector<std::string> causality(const Scenario& sc, const Trace& tr) {
    std::vector<std::string> bad;
    std::int64_t last = -1;
    for (const auto& s : sc.stimuli) last = std::max(last, s.tick);
    auto compare = [&](const Trace& cut, std::int64_t k) {
      std::vector<std::string> a, b;
      for (const auto& e : tr.events)
        if (e.tick <= k) a.push_back(render_event(e));
      for (const auto& e : cut.events)
        if (e.tick <= k) b.push_back(render_event(e));
      if (a == b) return;
      std::size_t i = 0;
      while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
      bad.push_back("stimuli cut after tick " + std::to_string(k) + ": runs differ at event " + std::to_string(i));
    };
    for (std::int64_t k = 0; k < last && k < sc.horizon; ++k) {
      Scenario cut = sc;
      cut.stimuli.clear();
      for (const auto& s : sc.stimuli)
        if (s.tick <= k) cut.stimuli.push_back(s);
      ReplayChooser replay(tr.choices);
      compare(run(cut, replay), k);
    }
    ReplayChooser replay(tr.choices);
    compare(run(sc, replay), sc.horizon);
    return bad;
  }
};

Simulator::Simulator(const DocumentSet& ds, const Universe& u) : impl_(std::make_unique<Impl>(ds, u)) {}
Simulator::~Simulator() = default;

const Universe& Simulator::universe() const { return impl_->u; }

Trace Simulator::run(const Scenario& sc, Chooser& chooser) { return impl_->run(sc, chooser); }

Trace Simulator::random(const Scenario& sc, std::uint64_t seed) {
  RandomChooser rng(seed);
  return impl_->run(sc, rng);
}

std::vector<Trace> Simulator::exhaustive(const Scenario& sc, std::size_t cap) {
  std::vector<Trace> out;
  std::set<std::string> seen;
  std::vector<std::size_t> prefix;
  for (std::size_t runs = 0;; ) {
    if (++runs > cap) throw Error(ErrorCode::CapExceeded, "more than " + std::to_string(cap) + " runs");
    PrefixChooser follow(prefix);
    Recorder rec(follow);
    Trace t = impl_->run(sc, rec);
    if (seen.insert(render_trace(t)).second) out.push_back(std::move(t));
    std::size_t i = rec.made.size();
    while (i > 0 && rec.made[i - 1].first + 1 >= rec.made[i - 1].second) --i;
    if (i == 0) break;
    prefix.clear();
    for (std::size_t k = 0; k + 1 < i; ++k) prefix.push_back(rec.made[k].first);
    prefix.push_back(rec.made[i - 1].first + 1);
  }
  return out;
}

ConditionReport Simulator::check_trace(const Scenario& sc, const Trace& tr) {
  ConditionReport r;
  r.results.push_back(verdict_of("conservation", impl_->conservation(tr)));
  r.results.push_back(verdict_of("fifo", impl_->fifo(tr)));
  r.results.push_back(verdict_of("bounded-delay", impl_->bounded_delay(tr)));
  r.results.push_back(verdict_of("post-state", impl_->post_states(tr)));
  r.results.push_back(verdict_of("causality", impl_->causality(sc, tr)));
  return r;
}

}  // namespace viewforge
