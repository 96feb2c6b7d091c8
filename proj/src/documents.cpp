#include "viewforge/documents.hpp"

#include <algorithm>

#include "viewforge/lang.hpp"

namespace viewforge {

const StateDef* LifecycleDoc::find_state(const std::string& s) const {
  for (const auto& st : states)
    if (st.name == s) return &st;
  return nullptr;
}

const TransitionDef* LifecycleDoc::find_transition(const std::string& t) const {
  for (const auto& tr : transitions)
    if (tr.name == t) return &tr;
  return nullptr;
}

bool LifecycleDoc::is_initial(const std::string& s) const {
  return std::find(initial_states.begin(), initial_states.end(), s) != initial_states.end();
}

DocKind kind_of(const Document& d) { return static_cast<DocKind>(d.index()); }

const std::string& name_of(const Document& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

void set_name(Document& d, std::string name) {
  std::visit([&](auto& x) { x.name = std::move(name); }, d);
}

const char* extension_for(DocKind k) {
  switch (k) {
    case DocKind::Type: return ".vtype";
    case DocKind::ObjectModel: return ".vobj";
    case DocKind::ClassDescription: return ".vclass";
    case DocKind::Lifecycle: return ".vlife";
  }
  return "";
}

namespace {

template <typename T>
void sort_by_name(std::vector<T>& xs) {
  std::stable_sort(xs.begin(), xs.end(), [](const T& a, const T& b) { return a.name < b.name; });
}

bool role_less(const Role& a, const Role& b) {
  if (a.class_name != b.class_name) return a.class_name < b.class_name;
  if (a.rolename != b.rolename) return a.rolename < b.rolename;
  return a.card < b.card;
}

bool rel_less(const Relationship& a, const Relationship& b) {
  if (!(a.first == b.first)) return role_less(a.first, b.first);
  return role_less(a.second, b.second);
}

}  // namespace

void canonicalize(Document& d) {
  std::visit(
      [](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TypeDocument>) {
          sort_by_name(x.sorts);
        } else if constexpr (std::is_same_v<T, ObjectModelDoc>) {
          std::sort(x.classes.begin(), x.classes.end());
          for (auto& r : x.relationships)
            if (role_less(r.second, r.first)) std::swap(r.first, r.second);
          std::sort(x.relationships.begin(), x.relationships.end(), rel_less);
        } else if constexpr (std::is_same_v<T, ClassDescriptionDoc>) {
          std::stable_sort(x.methods.begin(), x.methods.end(), [](const auto& a, const auto& b) {
            return a.name != b.name ? a.name < b.name : a.params.size() < b.params.size();
          });
          sort_by_name(x.attributes);
        } else {
          sort_by_name(x.states);
          sort_by_name(x.transitions);
          std::sort(x.initial_states.begin(), x.initial_states.end());
          for (auto& t : x.transitions) {
            sort_by_name(t.vars);
            std::sort(t.havoc.begin(), t.havoc.end());
          }
        }
      },
      d);
}

bool operator==(const Document& a, const Document& b) {
  if (a.index() != b.index()) return false;
  Document ca = a, cb = b;
  canonicalize(ca);
  canonicalize(cb);
  return render_document(ca) == render_document(cb);
}

}  // namespace viewforge
