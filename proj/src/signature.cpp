#include "viewforge/signature.hpp"

#include "viewforge/error.hpp"

namespace viewforge {

const MethodSig* ClassSignature::find_method(const std::string& name, std::size_t arity) const {
  for (const auto& m : methods)
    if (m.name == name && m.params.size() == arity) return &m;
  return nullptr;
}

bool ClassSignature::has_method_named(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return true;
  return false;
}

const AttributeDecl* ClassSignature::find_attribute(const std::string& name) const {
  for (const auto& a : attributes)
    if (a.name == name) return &a;
  return nullptr;
}

std::set<std::string> ClassSignature::attribute_names() const {
  std::set<std::string> out;
  for (const auto& a : attributes) out.insert(a.name);
  return out;
}

const ClassSignature* SignatureEnv::find(const std::string& cls) const {
  auto it = classes.find(cls);
  return it == classes.end() ? nullptr : &it->second;
}

const ClassSignature& SignatureEnv::at(const std::string& cls) const {
  const ClassSignature* s = find(cls);
  if (!s) throw Error(ErrorCode::Structure, "no signature for class " + cls);
  return *s;
}

}  // namespace viewforge
