#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "viewforge/checker.hpp"
#include "viewforge/project.hpp"
#include "viewforge/system_model.hpp"
#include "viewforge/universe.hpp"

namespace viewforge {

// ---------------------------------------------------------------- scenario

struct InitialObject {
  std::string id;
  std::string control;
  std::vector<std::pair<std::string, Term>> attributes;  // as written
  int line = 0;
};

struct Stimulus {
  std::int64_t tick = 0;
  std::string receiver;
  std::string method;
  std::vector<Term> args;
  int line = 0;
};

/// Closed-system run description. Objects not listed start dormant.
struct Scenario {
  std::int64_t horizon = 8;
  std::uint64_t seed = 0;
  int max_delay = 1;
  bool drop_on_stall = false;
  std::vector<InitialObject> objects;
  std::vector<Stimulus> stimuli;
};

/// Line-oriented scenario text:
///
///   horizon = 4
///   max_delay = 0
///   seed = 7
///   object Branch#0 Idle { available_cars = {c1}, branches = {Branch#0} }
///   stimulus 0 Branch#0 pick-up(3, hamburg)
///
/// `//` starts a comment; indented lines continue the previous entry.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// ------------------------------------------------------------------- trace

enum class EventKind { Emit, Deliver, Fire, Create, Stall };

const char* to_string(EventKind k);

struct TraceEvent {
  std::int64_t tick = 0;
  EventKind kind = EventKind::Emit;
  std::string object;  // emitter, receiver, firing or created object
  // Emit, Deliver, Stall
  std::uint64_t uid = 0;
  Message msg;
  std::int64_t emitted = 0;  // Deliver: tick of the matching Emit
  bool forced = false;       // Deliver
  bool dropped = false;      // Stall under drop_on_stall
  // Fire, Create
  std::string transition;
  Binding binding;  // input variables and locals of the fired transition
  ObjectState state;  // state after the event
};

struct Trace {
  std::vector<TraceEvent> events;
  SystemConfig final;
  std::int64_t horizon = 0;
  int max_delay = 0;
  bool drop_on_stall = false;
  std::vector<std::size_t> choices;  // every nondeterministic resolution, in order
};

std::string render_event(const TraceEvent& e);

/// One event per line, then the final configuration and the messages still
/// queued at the horizon.
std::string render_trace(const Trace& t);
/// Same content as JSON.
std::string trace_json(const Trace& t);

// --------------------------------------------------------------- choosers

/// Resolves nondeterminism. Only called with n >= 2.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t choose(std::size_t n) = 0;
};

class RandomChooser : public Chooser {
 public:
  explicit RandomChooser(std::uint64_t seed) : rng_(seed) {}
  std::size_t choose(std::size_t n) override { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

/// Replays a recorded sequence, then picks 0.
class ReplayChooser : public Chooser {
 public:
  explicit ReplayChooser(std::vector<std::size_t> choices) : choices_(std::move(choices)) {}
  std::size_t choose(std::size_t n) override;

 private:
  std::vector<std::size_t> choices_;
  std::size_t next_ = 0;
};

// -------------------------------------------------------------- simulator

inline constexpr std::size_t kDefaultExhaustiveCap = 10'000;

/// Tick loop over a consistent document set. Per tick: the medium delivers
/// (sorted by receiver, then sender), each receiving object fires one
/// successor drawn from object_step (STALL when there is none), emissions are
/// enqueued in firing order, then the tick's stimuli are enqueued. Messages
/// are deliverable from the tick after their emission. A `new` output
/// activates the next dormant identifier of its class, which starts in the
/// first initial state with a model.
class Simulator {
 public:
  /// Errors: Scenario for spontaneous transitions.
  Simulator(const DocumentSet& ds, const Universe& u);
  ~Simulator();

  /// Errors: Scenario for an ill-formed scenario, IdPoolExhausted.
  Trace run(const Scenario& sc, Chooser& chooser);
  Trace random(const Scenario& sc, std::uint64_t seed);
  Trace random(const Scenario& sc) { return random(sc, sc.seed); }
  /// Every distinct trace over all resolutions; CapExceeded past `cap` runs.
  std::vector<Trace> exhaustive(const Scenario& sc, std::size_t cap = kDefaultExhaustiveCap);

  /// Conservation, per-pair FIFO, bounded delay (<= D + 1 on the first
  /// delivery attempt), post-state legality and prefix causality (the
  /// scenario's stimuli truncated at each earlier tick replay the same
  /// events up to that tick).
  ConditionReport check_trace(const Scenario& sc, const Trace& tr);

  const Universe& universe() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace viewforge
