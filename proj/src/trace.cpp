#include <sstream>

#include "json.hpp"
#include "viewforge/sim.hpp"

namespace viewforge {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Emit: return "EMIT";
    case EventKind::Deliver: return "DELIVER";
    case EventKind::Fire: return "FIRE";
    case EventKind::Create: return "CREATE";
    case EventKind::Stall: return "STALL";
  }
  return "?";
}

std::size_t ReplayChooser::choose(std::size_t n) {
  if (next_ >= choices_.size()) return 0;
  std::size_t c = choices_[next_++];
  return c < n ? c : 0;
}

std::string render_event(const TraceEvent& e) {
  std::ostringstream out;
  out << e.tick << " " << to_string(e.kind) << " ";
  switch (e.kind) {
    case EventKind::Emit: out << "#" << e.uid << " " << to_string(e.msg); break;
    case EventKind::Deliver:
      out << "#" << e.uid << " " << to_string(e.msg) << " emitted=" << e.emitted;
      if (e.forced) out << " forced";
      break;
    case EventKind::Stall:
      out << "#" << e.uid << " " << to_string(e.msg) << (e.dropped ? " dropped" : " requeued");
      break;
    case EventKind::Fire:
      out << e.object << " " << e.transition << " " << to_string(e.binding) << " -> " << to_string(e.state);
      break;
    case EventKind::Create: out << e.object << " -> " << to_string(e.state); break;
  }
  return out.str();
}

std::string render_trace(const Trace& t) {
  std::ostringstream out;
  out << "trace horizon=" << t.horizon << " max_delay=" << t.max_delay
      << (t.drop_on_stall ? " drop_on_stall" : "") << "\n";
  for (const auto& e : t.events) out << render_event(e) << "\n";
  out << "final\n" << render_config(t.final);
  for (const auto& env : t.final.medium.pending())
    out << "queued #" << env.uid << " " << to_string(env.msg) << " emitted=" << env.enqueued
        << (env.stalled ? " stalled" : "") << "\n";
  out << "choices";
  for (auto c : t.choices) out << " " << c;
  out << "\n";
  return out.str();
}

namespace {

using nlohmann::ordered_json;

ordered_json message_json(const Message& m) {
  ordered_json j;
  j["sender"] = m.sender;
  j["receiver"] = m.receiver;
  j["method"] = m.name;
  ordered_json args = ordered_json::array();
  for (const auto& a : m.args) args.push_back(to_string(a));
  j["args"] = args;
  return j;
}

ordered_json state_json(const ObjectState& s) {
  ordered_json j;
  j["control"] = s.liveness == Liveness::Active ? s.control : std::string("dormant");
  ordered_json v = ordered_json::object();
  for (const auto& [k, x] : s.valuation) v[k] = to_string(x);
  j["valuation"] = v;
  return j;
}

}  // namespace

std::string trace_json(const Trace& t) {
  ordered_json j;
  j["horizon"] = t.horizon;
  j["max_delay"] = t.max_delay;
  j["drop_on_stall"] = t.drop_on_stall;
  ordered_json events = ordered_json::array();
  for (const auto& e : t.events) {
    ordered_json x;
    x["tick"] = e.tick;
    x["kind"] = to_string(e.kind);
    switch (e.kind) {
      case EventKind::Emit:
      case EventKind::Deliver:
      case EventKind::Stall:
        x["uid"] = e.uid;
        x["message"] = message_json(e.msg);
        if (e.kind == EventKind::Deliver) {
          x["emitted"] = e.emitted;
          x["forced"] = e.forced;
        }
        if (e.kind == EventKind::Stall) x["dropped"] = e.dropped;
        break;
      case EventKind::Fire: {
        x["object"] = e.object;
        x["transition"] = e.transition;
        ordered_json b = ordered_json::object();
        for (const auto& [k, v] : e.binding.values) b[k] = to_string(v);
        x["binding"] = b;
        x["state"] = state_json(e.state);
        break;
      }
      case EventKind::Create:
        x["object"] = e.object;
        x["state"] = state_json(e.state);
        break;
    }
    events.push_back(x);
  }
  j["events"] = events;
  ordered_json fin = ordered_json::object();
  for (const auto& [id, st] : t.final.objects) fin[id] = state_json(st);
  j["final"] = fin;
  ordered_json queued = ordered_json::array();
  for (const auto& env : t.final.medium.pending()) {
    ordered_json q;
    q["uid"] = env.uid;
    q["message"] = message_json(env.msg);
    q["emitted"] = env.enqueued;
    q["stalled"] = env.stalled;
    queued.push_back(q);
  }
  j["queued"] = queued;
  j["choices"] = t.choices;
  return j.dump(2) + "\n";
}

}  // namespace viewforge
