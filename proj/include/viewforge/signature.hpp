#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "viewforge/documents.hpp"

namespace viewforge {

/// Input alphabet and attribute environment of one class.
struct ClassSignature {
  std::string class_name;
  std::vector<MethodSig> methods;          // declared methods, canonical order
  std::vector<AttributeDecl> attributes;   // declared and induced, by name
  std::set<std::string> induced;           // names contributed by relationships

  const MethodSig* find_method(const std::string& name, std::size_t arity) const;
  bool has_method_named(const std::string& name) const;
  const AttributeDecl* find_attribute(const std::string& name) const;
  std::set<std::string> attribute_names() const;
};

struct SignatureEnv {
  std::map<std::string, ClassSignature> classes;

  const ClassSignature* find(const std::string& cls) const;
  const ClassSignature& at(const std::string& cls) const;
};

}  // namespace viewforge
