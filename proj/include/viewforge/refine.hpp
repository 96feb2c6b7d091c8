#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "viewforge/checker.hpp"
#include "viewforge/documents.hpp"
#include "viewforge/logic.hpp"
#include "viewforge/project.hpp"
#include "viewforge/signature.hpp"
#include "viewforge/system_model.hpp"
#include "viewforge/universe.hpp"

namespace viewforge {

// ------------------------------------------------------------------ steps

enum class StepKind {
  AddClass,
  AddRel,
  RefRel,
  AddMeth,
  AddAttr,
  AddState,
  RemState,
  Split,
  AddTrans,
  RemTrans,
  RefTrans,
  RemInit,
};

const char* to_string(StepKind k);

/// One development step. `target` names the document to change, either by
/// document name or, for class descriptions and lifecycles, by class name.
/// Only the payload fields of the step's kind are meaningful.
struct Step {
  StepKind kind = StepKind::AddClass;
  std::string target;
  std::string name;                   // addclass class; remstate/split/reminit state; remtrans/reftrans transition
  std::optional<Relationship> rel;    // addrel, refrel (old)
  std::optional<Relationship> rel_new;
  std::optional<MethodSig> method;
  std::optional<AttributeDecl> attribute;
  std::vector<StateDef> states;       // addstate: one; split: the two parts
  std::optional<TransitionDef> transition;  // addtrans, reftrans
};

/// True for the steps that change a lifecycle automaton.
bool is_automaton_step(StepKind k);

/// Short human-readable form, e.g. `addattr Branch branches`.
std::string describe(const Step& s);

// ------------------------------------------------------------ obligations

struct Obligation {
  enum class Kind { Valid, Satisfiable };
  std::string name;   // e.g. "state-disjoint"
  std::string locus;  // document/item
  Kind kind = Kind::Valid;
  std::vector<TypedVar> vars;
  Formula body;
  std::string self_class;  // binds `self` to the first identifier of this pool
  bool reconstructed = true;
  Binding evidence;  // reported for constant obligations

  /// The closed formula: ∀vars. body or ∃vars. body.
  Formula closed() const;
};

struct StepOutcome {
  DocumentSet docs;
  std::vector<Obligation> obligations;
};

/// Applies one step. The input set is never modified; errors are
/// TargetMissing (no such document, state, transition or relationship),
/// NameClash (the new name is taken, including attributes that collide with
/// induced ones) and IllegalPayload (cardinality widening, unknown states or
/// methods, pattern problems).
StepOutcome apply_step(const DocumentSet& ds, const Step& step, bool frame = true);

/// The proof obligations of a step already applied to `before`, giving `after`.
std::vector<Obligation> generate_obligations(const Step& step, const DocumentSet& before, const DocumentSet& after,
                                             bool frame = true);

/// Decides each obligation by search over `u` (signatures are attached
/// from `env`). Valid obligations report a counterexample, satisfiable ones
/// a witness.
ConditionReport discharge(const std::vector<Obligation>& obs, const Universe& u, const SignatureEnv& env);

// ----------------------------------------------------------------- scripts

struct ScriptEntry {
  enum class Kind { Step, Rename, Expect };
  Kind kind = Kind::Step;
  Step step;
  std::string document;  // rename/expect
  std::string argument;  // new name or golden path
  int line = 0;
};

struct RefinementScript {
  std::vector<ScriptEntry> entries;
  std::filesystem::path dir;  // golden paths are relative to it
};

/// Line-oriented script; indented lines continue the previous entry and
/// `//` starts a comment. Errors are ParseError prefixed with the line.
RefinementScript parse_script(std::string_view text, const std::filesystem::path& dir = {});
RefinementScript load_script(const std::filesystem::path& path);

struct ReplayOptions {
  std::map<std::string, int> bounds;
  std::optional<std::uint64_t> budget;
  bool frame = true;
};

/// A lifecycle before and after one automaton step.
struct LifecycleChange {
  std::string step;
  std::string class_name;
  LifecycleDoc before;
  LifecycleDoc after;
  DocumentSet docs_before;
  DocumentSet docs_after;
};

struct ReplayResult {
  DocumentSet docs;
  ConditionReport report;
  bool completed = true;
  std::string error;
  std::vector<LifecycleChange> changes;
};

/// Applies the entries in order, discharging each step's obligations in a
/// universe built from the current documents. A step that raises, or whose
/// obligations do not all pass, stops the replay.
ReplayResult replay_script(const DocumentSet& ds, const RefinementScript& script, const ReplayOptions& opts = {});

// ------------------------------------------------------------------ oracle

struct OracleOptions {
  std::size_t horizon = 6;
  bool frame = true;
  bool all_selves = true;           // otherwise only the first identifier of the pool
  std::uint64_t max_configs = 5'000'000;
};

struct OracleStep {
  std::optional<Message> input;
  std::vector<Message> outputs;
  ObjectState next;
};

struct OracleResult {
  bool refines = true;
  std::string self;
  ObjectState initial;
  std::vector<OracleStep> trace;  // distinguishing trace when !refines
  std::string reason;
  std::uint64_t configurations = 0;

  std::string to_text() const;
};

/// Bounded trace inclusion of `updated` in the chaotic completion of
/// `original`: every trace of at most `horizon` steps of the new automaton,
/// from a new initial valuation, must be a trace of the old one, where an
/// old (state, input) pair without an enabled transition admits anything.
/// The old automaton sees the new valuations restricted to its attributes.
/// Raises BudgetExceeded past `max_configs` explored configurations.
OracleResult oracle_refines(const LifecycleDoc& original, const LifecycleDoc& updated,
                            const ClassSignature& original_sig, const ClassSignature& updated_sig,
                            const Universe& u, const OracleOptions& opts = {});

/// Same, with both signatures taken from `env`.
OracleResult oracle_refines(const LifecycleDoc& original, const LifecycleDoc& updated, const SignatureEnv& env,
                            const Universe& u, const OracleOptions& opts = {});

}  // namespace viewforge
