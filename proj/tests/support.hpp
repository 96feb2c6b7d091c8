#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "viewforge/checker.hpp"
#include "viewforge/lang.hpp"
#include "viewforge/logic.hpp"
#include "viewforge/project.hpp"
#include "viewforge/universe.hpp"

namespace vftest {

namespace fs = std::filesystem;

inline fs::path corpus() { return fs::path(VIEWFORGE_CORPUS); }
inline fs::path corpus(const std::string& rel) { return corpus() / rel; }

inline viewforge::Project project(const std::string& name) {
  return viewforge::load_project(corpus(name + "/views.manifest"));
}

/// Walks the full cartesian product of the carriers, first variable most
/// significant. Shares nothing with the solver's search.
inline void brute_force(const viewforge::Universe& u, const std::vector<viewforge::ex::TypedVar>& vars,
                        viewforge::Binding b, const std::function<void(const viewforge::Binding&)>& visit,
                        std::size_t i = 0) {
  if (i == vars.size()) {
    visit(b);
    return;
  }
  for (const auto& v : u.carrier(vars[i].sort)) {
    b.set(vars[i].name, v);
    brute_force(u, vars, b, visit, i + 1);
  }
}

inline std::vector<viewforge::Binding> brute_models(const viewforge::Formula& f, const viewforge::Universe& u,
                                                    const std::vector<viewforge::ex::TypedVar>& vars,
                                                    const viewforge::Binding& base = {}) {
  std::vector<viewforge::Binding> out;
  brute_force(u, vars, base, [&](const viewforge::Binding& b) {
    if (viewforge::eval(f, b, u)) {
      viewforge::Binding only;
      for (const auto& v : vars) only.set(v.name, *b.find(v.name));
      out.push_back(only);
    }
  });
  return out;
}

inline std::string slurp(const fs::path& p) { return viewforge::read_file(p); }

}  // namespace vftest
