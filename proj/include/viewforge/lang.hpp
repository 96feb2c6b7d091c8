#pragma once

#include <string>
#include <string_view>

#include "viewforge/documents.hpp"

namespace viewforge {

/// Parses one view document (.vtype, .vobj, .vclass or .vlife text).
///
/// The parser is context free apart from per-document checks: duplicate
/// names, declared transition endpoints, nonempty ranges and initial sets,
/// and which variables a state formula or precondition may mention. Sort and
/// attribute references are resolved later by the checker. Errors are
/// ParseError with a 1-based position and the expected-token set.
///
/// The result is in canonical member order.
Document parse_document(std::string_view text);

/// Canonical text: fixed layout, members in canonical order. Total on
/// documents satisfying the structural invariants.
std::string render_document(const Document& doc);

// Fragment entry points, used by refinement scripts and scenario files.
Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);
SortExpr parse_sort(std::string_view text);
Role parse_role(std::string_view text);
Relationship parse_relationship(std::string_view text);
MethodSig parse_method(std::string_view text);
AttributeDecl parse_attribute(std::string_view text);
StateDef parse_state(std::string_view text);
/// `transition name : src -> dst ... ;` (the trailing ';' is optional).
TransitionDef parse_transition(std::string_view text);

std::string render_role(const Role& r);
std::string render_relationship(const Relationship& r);
std::string render_method(const MethodSig& m);
std::string render_transition(const TransitionDef& t, const std::string& indent = "  ");
std::string render_output(const OutputPattern& o);

}  // namespace viewforge
