#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "viewforge/documents.hpp"
#include "viewforge/expr.hpp"
#include "viewforge/signature.hpp"
#include "viewforge/universe.hpp"
#include "viewforge/value.hpp"

namespace viewforge {

using ex::TypedVar;

/// Finite-model evaluator and model enumerator.
///
/// Existential blocks are solved by depth-first search: conjuncts are
/// checked as soon as their variables are bound, and equations whose one
/// side is known pin variables on the other side (including variables inside
/// message and sequence patterns). Results are identical to brute-force
/// expansion over the carriers.
///
/// A Solver caches per-formula search plans and keeps the formulas it has
/// seen alive. Search nodes are counted per top-level call; exceeding
/// `Universe::enumeration_cap()` raises BudgetExceeded.
class Solver {
 public:
  explicit Solver(const Universe& u);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  bool eval(const Formula& f, const Binding& b);
  Value eval_term(const Term& t, const Binding& b);

  /// Calls `visit` for each model of `f` over `vars`, in lexicographic
  /// order over the carrier orders (first variable most significant).
  /// Variables of `base` are visible to `f` unless shadowed by `vars`.
  /// `visit` returns false to stop. Reported bindings hold `vars` only.
  void for_each_model(const Formula& f, const std::vector<TypedVar>& vars, const Binding& base,
                      const std::function<bool(const Binding&)>& visit);

  /// All models, or the first `limit` when limit > 0.
  std::vector<Binding> enumerate(const Formula& f, const std::vector<TypedVar>& vars,
                                 std::size_t limit = 0, const Binding& base = {});

  std::optional<Binding> find_model(const Formula& f, const std::vector<TypedVar>& vars,
                                    const Binding& base = {});

  /// Some model (not necessarily the first in lexicographic order); the
  /// search is free to pick variables in any order, which lets equations
  /// pin large variables. Reported bindings hold `vars` only.
  std::optional<Binding> find_any(const Formula& f, const std::vector<TypedVar>& vars, const Binding& base = {});

  /// Whether `f` has a model over `vars`; the cheapest query.
  bool exists(const Formula& f, const std::vector<TypedVar>& vars, const Binding& base = {});

  /// Search nodes used by the most recent top-level call.
  std::uint64_t last_nodes() const;

  const Universe& universe() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot conveniences over a temporary Solver.
bool eval(const Formula& f, const Binding& b, const Universe& u);
Value eval_term(const Term& t, const Binding& b, const Universe& u);
std::vector<Binding> enumerate_models(const Formula& f, const std::vector<TypedVar>& vars,
                                      const Universe& u, std::size_t limit = 0);

/// A transition with its message patterns made explicit but its variables
/// still open, the form used by the stepper and the checker.
struct OpenTransition {
  std::vector<TypedVar> inputs;  // sender and parameter variables, pattern order
  std::vector<TypedVar> locals;  // declared variables, then creation variables
  Formula match;                 // in = sender?m(v..), or true without input
  Formula pre;                   // the written precondition
  Formula out_eq;                // out = <o1, .., on>
  Formula frame;                 // a' = a for unmentioned, non-havoc attributes
  Formula post;                  // the written postcondition
  std::vector<std::string> primed_attributes;  // attributes whose successor is constrained
};

/// Throws PatternVariableClash when a pattern or declared variable reuses
/// an attribute name, another variable, or one of self/in/out; Structure when
/// the input method is not in the signature.
OpenTransition open_transition(const TransitionDef& t, const ClassSignature& sig);

struct DesugaredTransition {
  Formula pre;   // ∃ inputs. match ∧ ∃ pre-locals. pre
  Formula post;  // ∃ inputs. match ∧ ∃ locals. (pre ∧ out_eq ∧ post [∧ frame])
};

/// Folds the input pattern into the precondition and the output patterns
/// into the postcondition. With `frame`, unmentioned primed attributes are
/// tied to their current values; without it they stay unconstrained.
DesugaredTransition desugar_transition(const TransitionDef& t, const ClassSignature& sig, bool frame = true);

/// Typed variables for the attributes of a class, unprimed or primed.
std::vector<TypedVar> attribute_vars(const ClassSignature& sig, bool primed);

}  // namespace viewforge
