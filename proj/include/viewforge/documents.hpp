#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viewforge/expr.hpp"

namespace viewforge {

// ---------------------------------------------------------------- types

struct SortDef {
  enum class Kind { Enumeration, Range, SetOf };
  std::string name;
  Kind kind = Kind::Enumeration;
  std::vector<std::string> literals;  // Enumeration, declaration order
  std::int64_t low = 0, high = 0;      // Range, inclusive
  std::string element;                 // SetOf
};

struct TypeDocument {
  std::string name;
  std::vector<SortDef> sorts;
};

// --------------------------------------------------------- object model

enum class Cardinality { One, Many };

struct Role {
  std::string class_name;
  std::optional<std::string> rolename;
  Cardinality card = Cardinality::One;

  bool operator==(const Role&) const = default;
};

struct Relationship {
  Role first;
  Role second;

  bool operator==(const Relationship&) const = default;
};

struct ObjectModelDoc {
  std::string name;
  std::vector<std::string> classes;
  std::vector<Relationship> relationships;
};

// --------------------------------------------------- class description

struct Param {
  std::string name;
  SortExpr sort;
};

struct MethodSig {
  std::string name;
  std::vector<Param> params;
};

struct AttributeDecl {
  std::string name;
  SortExpr sort;
};

struct ClassDescriptionDoc {
  std::string name;
  std::string class_name;
  std::vector<MethodSig> methods;
  std::vector<AttributeDecl> attributes;
};

// ------------------------------------------------------------ lifecycle

struct StateDef {
  std::string name;
  Formula predicate;
};

/// `sender?method(v1, ..., vn)`; every vi is a fresh variable.
struct InputPattern {
  std::string sender;
  std::string method;
  std::vector<std::string> vars;
};

/// `recv!method(args)` or, for object creation,
/// `new v : Class ! create(args)` where v names the fresh identifier.
struct OutputPattern {
  std::optional<std::string> new_var;
  std::string new_class;
  Term receiver;  // null for creation patterns
  std::string method;
  std::vector<Term> args;
};

struct VarDecl {
  std::string name;
  SortExpr sort;
};

struct TransitionDef {
  std::string name;
  std::string source;
  std::string target;
  std::optional<InputPattern> input;
  std::vector<OutputPattern> outputs;
  std::vector<VarDecl> vars;
  std::vector<std::string> havoc;
  Formula pre;
  Formula post;
};

struct LifecycleDoc {
  std::string name;
  std::string class_name;
  std::vector<StateDef> states;
  std::vector<TransitionDef> transitions;
  std::vector<std::string> initial_states;

  const StateDef* find_state(const std::string& s) const;
  const TransitionDef* find_transition(const std::string& t) const;
  bool is_initial(const std::string& s) const;
};

// -------------------------------------------------------------- document

using Document = std::variant<TypeDocument, ObjectModelDoc, ClassDescriptionDoc, LifecycleDoc>;

enum class DocKind { Type, ObjectModel, ClassDescription, Lifecycle };

DocKind kind_of(const Document& d);
const std::string& name_of(const Document& d);
void set_name(Document& d, std::string name);
/// File extension conventionally used for the kind (".vtype", ...).
const char* extension_for(DocKind k);

/// Puts members into canonical order: sorts, classes, relationships (and the
/// two roles inside each), methods, attributes, states, transitions, initial
/// states, declared variables and havoc lists are sorted by name. Sequences
/// with meaning (enumeration literals, parameters, output patterns) keep
/// their order.
void canonicalize(Document& d);

/// Structural equality; documents are compared in canonical form.
bool operator==(const Document& a, const Document& b);

}  // namespace viewforge
