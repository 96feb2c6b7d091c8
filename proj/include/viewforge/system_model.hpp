#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "viewforge/documents.hpp"
#include "viewforge/logic.hpp"
#include "viewforge/project.hpp"
#include "viewforge/signature.hpp"
#include "viewforge/universe.hpp"
#include "viewforge/value.hpp"

namespace viewforge {

/// Θ_c and Σ_c for every class. A rolename induces an attribute on the
/// opposite class: the role's class for cardinality 1, a set of it for *.
/// An induced attribute that repeats a declared one with the same sort is
/// merged; a different sort is an AttributeCollision.
SignatureEnv induce_signatures(const std::vector<const ObjectModelDoc*>& oms,
                               const std::vector<const ClassDescriptionDoc*>& cds);
SignatureEnv induce_signatures(const DocumentSet& ds);

enum class Liveness { Dormant, Active };

struct ObjectState {
  std::map<std::string, Value> valuation;
  std::string control;
  Liveness liveness = Liveness::Dormant;

  bool operator==(const ObjectState&) const = default;
};

std::string to_string(const ObjectState& s);

/// One queued message with its bookkeeping.
struct Envelope {
  Message msg;
  std::uint64_t uid = 0;
  std::int64_t enqueued = 0;  // tick of emission; deliverable from the next tick
  bool stalled = false;       // re-queued after an unprocessable delivery

  bool operator==(const Envelope&) const = default;
};

struct MediumState {
  /// Keyed by (sender, receiver).
  std::map<std::pair<std::string, std::string>, std::deque<Envelope>> queues;
  int max_delay = 1;
  std::uint64_t next_uid = 0;

  std::uint64_t enqueue(Message m, std::int64_t tick);
  /// Puts a stalled envelope back at the head of its queue.
  void requeue_front(Envelope e);
  std::size_t size() const;
  std::vector<Envelope> pending() const;  // queue order, pairs in key order
};

struct Delivery {
  Envelope env;
  bool forced = false;
};

struct MediumStep {
  std::vector<Delivery> deliveries;  // sorted by (receiver, sender)
  MediumState next;
};

/// One tick of the medium. Only queue heads are candidates, so per-pair
/// FIFO holds. A head whose age (tick - enqueued - 1) reached max_delay is
/// forced; among several forced heads for one receiver the oldest goes
/// first. Without a forced head, each head is offered in sender order and
/// delivered when `coin()` says so. Every object receives at most one
/// message per tick; EXTERNAL receives any number. Stalled envelopes are
/// never forced.
MediumStep medium_step(const MediumState& m, std::int64_t tick, const std::function<bool()>& coin);

struct SystemConfig {
  std::map<std::string, ObjectState> objects;
  MediumState medium;
  std::int64_t clock = 0;
};

/// One successor of object_step.
struct StepResult {
  std::string transition;
  Binding binding;                // pattern variables, locals, primed attributes, out
  std::vector<Message> outputs;
  ObjectState next;
  std::map<std::string, std::string> created;  // creation variable -> identifier
};

/// Reusable stepper for one lifecycle; caches the solving formulas.
class Stepper {
 public:
  Stepper(const LifecycleDoc& lc, const ClassSignature& sig, const Universe& u, bool frame = true);
  ~Stepper();

  /// All successors of `st` for `input` (or for no input), deduplicated by
  /// (outputs, successor). `fresh` fixes the identifier used by each
  /// creation pattern, per created class; without an entry the creation
  /// variable ranges over the class pool.
  std::vector<StepResult> step(const ObjectState& st, const std::string& self, const std::optional<Message>& input,
                               const std::map<std::string, std::string>& fresh = {});

  /// True when step() would return at least one successor.
  bool enabled(const ObjectState& st, const std::string& self, const std::optional<Message>& input);

  /// Transitions that can take `st` to the valuation of `next` emitting
  /// exactly `outputs`; `next.control` is ignored, the target predicate of
  /// each transition is not.
  std::vector<std::string> accepts(const ObjectState& st, const std::string& self,
                                     const std::optional<Message>& input, const std::vector<Message>& outputs,
                                     const ObjectState& next);

  /// First valuation (lexicographic over attributes in name order)
  /// satisfying the state's predicate.
  std::optional<ObjectState> first_state(const std::string& control);

  const LifecycleDoc& lifecycle() const;
  const ClassSignature& signature() const;
  Solver& solver();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<StepResult> object_step(const LifecycleDoc& lc, const ObjectState& st, const std::string& self,
                                    const std::optional<Message>& input, const Universe& u,
                                    const SignatureEnv& env);

}  // namespace viewforge
