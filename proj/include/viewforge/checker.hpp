#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viewforge/documents.hpp"
#include "viewforge/project.hpp"
#include "viewforge/signature.hpp"
#include "viewforge/system_model.hpp"
#include "viewforge/universe.hpp"
#include "viewforge/value.hpp"

namespace viewforge {

enum class Verdict { Pass, Fail, Budget };

const char* to_string(Verdict v);

/// One check: what was checked, where, and the evidence.
struct CheckResult {
  std::string check;   // e.g. "condition-1", "unknown-message", "obligation"
  std::string locus;   // document[/state or transition]
  Verdict verdict = Verdict::Pass;
  std::optional<Binding> binding;  // witness (PASS) or counterexample (FAIL)
  std::string detail;
  bool reconstructed = false;
};

struct ConditionReport {
  std::vector<CheckResult> results;

  /// FAIL if any check failed, else BUDGET if any ran out, else PASS.
  Verdict overall() const;
  bool passed() const { return overall() == Verdict::Pass; }
  std::size_t count(Verdict v) const;
  void append(const ConditionReport& other);

  /// One line per check: `PASS condition-1 FinalRentalLifecycle/Init {status = reserved, ...}`.
  std::string to_text() const;
  /// JSON array of records {check, locus, verdict, binding, detail, reconstructed}.
  std::string to_json() const;
};

/// Static sort and name problems of a lifecycle against its signature:
/// unknown attributes or names, unknown messages, wrong arities,
/// ill-sorted terms. Each problem is a FAIL whose binding names the
/// offending item.
ConditionReport check_lifecycle_structure(const LifecycleDoc& lc, const SignatureEnv& env, const Universe& u);

/// The three context conditions by bounded enumeration:
///   condition-1  every state predicate is satisfiable;
///   condition-2  predicates of distinct states are disjoint;
///   condition-3  for every valuation and input satisfying Λ(source) and
///                pre′, some successor valuation and output sequence
///                satisfy post′ ∧ Λ(target)′ (implicit frame applied).
ConditionReport check_automaton(const LifecycleDoc& lc, const SignatureEnv& env, const Universe& u);

/// Structural layer (classes, sorts, signatures, messages, names) then,
/// when that passes, the automata conditions and a witness system.
ConditionReport check_consistency(const DocumentSet& ds, const Universe& u);

struct NoWitness {};
struct BudgetHit {
  std::string reason;
};
using WitnessResult = std::variant<SystemConfig, NoWitness, BudgetHit>;

/// Bounded inhabitant: every identifier of a class with a lifecycle is
/// activated in the first initial state (canonical order) that has a model,
/// with the first such model; identifiers of other classes stay dormant.
WitnessResult witness_system(const DocumentSet& ds, const Universe& u);

/// Copy of `u` with the method signatures of `env` attached.
Universe with_signatures(const Universe& u, const SignatureEnv& env);

/// `self` bound to the first identifier of the class pool (empty otherwise).
Binding self_binding(const Universe& u, const std::string& cls);

/// Condition 3 for one transition as a search problem: a model of
/// `violation` over `vars` (attributes, input variables, `in`) is an enabled
/// valuation and input without a successor.
struct EnablednessQuery {
  std::vector<TypedVar> vars;
  Formula violation;
};
EnablednessQuery enabledness_query(const LifecycleDoc& lc, const TransitionDef& t, const ClassSignature& sig);

/// `object <id> <control|dormant> { attr = value, ... }` per object.
std::string render_config(const SystemConfig& c);

}  // namespace viewforge
