#include <deque>
#include <set>
#include <sstream>

#include "viewforge/error.hpp"
#include "viewforge/refine.hpp"

namespace viewforge {

std::string OracleResult::to_text() const {
  std::ostringstream out;
  out << (refines ? "REFINES" : "NOT-REFINES") << " configurations=" << configurations << "\n";
  if (refines) return out.str();
  out << "reason: " << reason << "\n";
  out << "self: " << self << "\n";
  out << "initial: " << to_string(initial) << "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const OracleStep& s = trace[i];
    out << "step " << i + 1 << ": " << (s.input ? to_string(Value::message(*s.input)) : std::string("(no input)"))
        << " / <";
    for (std::size_t k = 0; k < s.outputs.size(); ++k)
      out << (k ? ", " : "") << to_string(Value::message(s.outputs[k]));
    out << "> -> " << to_string(s.next) << "\n";
  }
  return out.str();
}

namespace {

struct Node {
  ObjectState state;
  std::set<std::string> old_controls;
  std::size_t depth = 0;
  long parent = -1;
  OracleStep step;
};

ObjectState restrict(const ObjectState& s, const ClassSignature& sig, const std::string& control) {
  ObjectState r;
  r.control = control;
  r.liveness = Liveness::Active;
  for (const auto& a : sig.attributes) {
    auto it = s.valuation.find(a.name);
    if (it == s.valuation.end())
      throw Error(ErrorCode::Structure, "attribute " + a.name + " of the original class is missing after refinement");
    r.valuation.emplace(a.name, it->second);
  }
  return r;
}

std::string key_of(const Node& n) {
  std::string k = to_string(n.state) + "|";
  for (const auto& c : n.old_controls) k += c + ",";
  return k;
}

class Search {
 public:
  Search(const LifecycleDoc& original, const LifecycleDoc& updated, const ClassSignature& osig,
         const ClassSignature& nsig, const Universe& u, const OracleOptions& opts)
      : original_(original),
        updated_(updated),
        osig_(osig),
        nsig_(nsig),
        u_(u),
        opts_(opts),
        old_(original, osig, u, opts.frame),
        neu_(updated, nsig, u, opts.frame),
        solver_(u) {}

  OracleResult run(const std::string& self) {
    OracleResult res;
    nodes_.clear();
    seen_.clear();
    std::vector<std::optional<Message>> inputs;
    for (const auto& v : u_.carrier(SortExpr::input_of(updated_.class_name)))
      if (v.as_message().receiver == self) inputs.emplace_back(v.as_message());
    bool spontaneous = false;
    for (const auto& t : updated_.transitions) spontaneous = spontaneous || !t.input;
    if (spontaneous) inputs.emplace_back(std::nullopt);

    std::deque<std::size_t> todo;
    Binding base;
    base.set("self", Value::atom(self));
    const auto attrs = attribute_vars(nsig_, false);
    for (const auto& s : updated_.initial_states) {
      const StateDef* def = updated_.find_state(s);
      for (const auto& m : solver_.enumerate(def->predicate, attrs, 0, base)) {
        Node n;
        n.state.control = s;
        n.state.liveness = Liveness::Active;
        for (const auto& [k, v] : m.values) n.state.valuation.emplace(k, v);
        Binding ob = base;
        for (const auto& a : osig_.attributes) ob.set(a.name, n.state.valuation.at(a.name));
        for (const auto& q : original_.initial_states)
          if (solver_.eval(original_.find_state(q)->predicate, ob)) n.old_controls.insert(q);
        if (n.old_controls.empty()) {
          res.refines = false;
          res.self = self;
          res.initial = n.state;
          res.reason = "initial valuation satisfies no initial state of " + original_.name;
          return res;
        }
        if (push(std::move(n))) todo.push_back(nodes_.size() - 1);
      }
    }

    while (!todo.empty()) {
      const std::size_t idx = todo.front();
      todo.pop_front();
      if (nodes_[idx].depth >= opts_.horizon) continue;
      const Node cur = nodes_[idx];
      std::map<std::string, ObjectState> old_states;
      for (const auto& q : cur.old_controls) old_states.emplace(q, restrict(cur.state, osig_, q));
      for (const auto& in : inputs) {
        bool chaos = false;
        for (const auto& [q, os] : old_states)
          if (!old_.enabled(os, self, in)) {
            chaos = true;
            break;
          }
        if (chaos) continue;
        for (auto& r : neu_.step(cur.state, self, in)) {
          Node next;
          next.state = r.next;
          next.depth = cur.depth + 1;
          next.parent = static_cast<long>(idx);
          next.step = OracleStep{in, r.outputs, r.next};
          for (const auto& [q, os] : old_states)
            for (const auto& tname : old_.accepts(os, self, in, r.outputs, r.next))
              next.old_controls.insert(original_.find_transition(tname)->target);
          if (next.old_controls.empty()) {
            res.refines = false;
            res.self = self;
            res.reason = "step by " + r.transition + " of " + updated_.name + " is not allowed by " + original_.name;
            nodes_.push_back(std::move(next));
            fill_trace(res, nodes_.size() - 1);
            return res;
          }
          if (push(std::move(next))) todo.push_back(nodes_.size() - 1);
        }
      }
    }
    res.configurations = nodes_.size();
    return res;
  }

 private:
  bool push(Node n) {
    if (!seen_.insert(key_of(n)).second) return false;
    if (nodes_.size() >= opts_.max_configs)
      throw BudgetExceeded("oracle exceeded " + std::to_string(opts_.max_configs) + " configurations");
    nodes_.push_back(std::move(n));
    return true;
  }

  void fill_trace(OracleResult& res, std::size_t idx) {
    std::vector<OracleStep> steps;
    long i = static_cast<long>(idx);
    while (nodes_[i].parent >= 0) {
      steps.push_back(nodes_[i].step);
      i = nodes_[i].parent;
    }
    res.initial = nodes_[i].state;
    res.trace.assign(steps.rbegin(), steps.rend());
    res.configurations = nodes_.size();
  }

  const LifecycleDoc& original_;
  const LifecycleDoc& updated_;
  const ClassSignature& osig_;
  const ClassSignature& nsig_;
  const Universe& u_;
  OracleOptions opts_;
  Stepper old_;
  Stepper neu_;
  Solver solver_;
  std::vector<Node> nodes_;
  std::set<std::string> seen_;
};

}  // namespace

OracleResult oracle_refines(const LifecycleDoc& original, const LifecycleDoc& updated,
                            const ClassSignature& original_sig, const ClassSignature& updated_sig,
                            const Universe& u, const OracleOptions& opts) {
  if (original.class_name != updated.class_name)
    throw Error(ErrorCode::Structure, "lifecycles " + original.name + " and " + updated.name + " describe different classes");
  if (opts.horizon < 1) throw Error(ErrorCode::Structure, "horizon must be at least 1");
  Search search(original, updated, original_sig, updated_sig, u, opts);
  OracleResult total;
  const auto& pool = u.pool(updated.class_name);
  const std::size_t n = opts.all_selves ? pool.size() : 1;
  for (std::size_t i = 0; i < n; ++i) {
    OracleResult r = search.run(pool[i].as_atom());
    total.configurations += r.configurations;
    if (!r.refines) {
      r.configurations = total.configurations;
      return r;
    }
  }
  return total;
}

OracleResult oracle_refines(const LifecycleDoc& original, const LifecycleDoc& updated, const SignatureEnv& env,
                            const Universe& u, const OracleOptions& opts) {
  return oracle_refines(original, updated, env.at(original.class_name), env.at(updated.class_name), u, opts);
}

}  // namespace viewforge
