#include "viewforge/project.hpp"

#include <fstream>
#include <sstream>

#include "viewforge/error.hpp"
#include "viewforge/lang.hpp"

namespace viewforge {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Project, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Manifest parse_manifest(const std::string& text, const std::filesystem::path& dir) {
  Manifest m;
  m.dir = dir;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos && (hash == 0 || line[hash - 1] == ' ' || line[hash - 1] == '\t'))
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Project, "manifest line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto number = [&](const std::string& v) {
      try {
        std::size_t used = 0;
        long long n = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return n;
      } catch (const std::exception&) {
        throw Error(ErrorCode::Project, "manifest line " + std::to_string(lineno) + ": " + key + " needs a number");
      }
    };
    if (key == "name") {
      m.name = value;
    } else if (key == "documents") {
      for (auto& d : split_list(value)) m.documents.push_back(d);
    } else if (key.rfind("bound.", 0) == 0) {
      m.bounds[key.substr(6)] = static_cast<int>(number(value));
    } else if (key == "budget") {
      long long n = number(value);
      if (n < 1) throw Error(ErrorCode::Project, "budget must be positive");
      m.budget = static_cast<std::uint64_t>(n);
    } else if (key.rfind("scenario.", 0) == 0) {
      m.scenarios[key.substr(9)] = value;
    } else {
      throw Error(ErrorCode::Project, "manifest line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  return m;
}

const Document* DocumentSet::find(const std::string& name) const {
  for (const auto& d : docs_)
    if (name_of(d) == name) return &d;
  return nullptr;
}

Document* DocumentSet::find(const std::string& name) {
  for (auto& d : docs_)
    if (name_of(d) == name) return &d;
  return nullptr;
}

void DocumentSet::add(Document d) {
  if (find(name_of(d))) throw Error(ErrorCode::Project, "duplicate document name " + name_of(d));
  if (const auto* lc = std::get_if<LifecycleDoc>(&d)) {
    if (const auto* other = lifecycle_for(lc->class_name))
      throw Error(ErrorCode::Project, "class " + lc->class_name + " already has lifecycle " + other->name);
  }
  docs_.push_back(std::move(d));
}

void DocumentSet::replace(const std::string& name, Document d) {
  for (auto& slot : docs_)
    if (name_of(slot) == name) {
      slot = std::move(d);
      return;
    }
  throw Error(ErrorCode::Project, "no document named " + name);
}

std::vector<const TypeDocument*> DocumentSet::types() const {
  std::vector<const TypeDocument*> out;
  for (const auto& d : docs_)
    if (auto* p = std::get_if<TypeDocument>(&d)) out.push_back(p);
  return out;
}

std::vector<const ObjectModelDoc*> DocumentSet::object_models() const {
  std::vector<const ObjectModelDoc*> out;
  for (const auto& d : docs_)
    if (auto* p = std::get_if<ObjectModelDoc>(&d)) out.push_back(p);
  return out;
}

std::vector<const ClassDescriptionDoc*> DocumentSet::class_documents() const {
  std::vector<const ClassDescriptionDoc*> out;
  for (const auto& d : docs_)
    if (auto* p = std::get_if<ClassDescriptionDoc>(&d)) out.push_back(p);
  return out;
}

std::vector<const LifecycleDoc*> DocumentSet::lifecycles() const {
  std::vector<const LifecycleDoc*> out;
  for (const auto& d : docs_)
    if (auto* p = std::get_if<LifecycleDoc>(&d)) out.push_back(p);
  return out;
}

const LifecycleDoc* DocumentSet::lifecycle_for(const std::string& cls) const {
  for (const auto* lc : lifecycles())
    if (lc->class_name == cls) return lc;
  return nullptr;
}

std::set<std::string> DocumentSet::declared_classes() const {
  std::set<std::string> out;
  for (const auto* om : object_models()) out.insert(om->classes.begin(), om->classes.end());
  for (const auto* cd : class_documents()) out.insert(cd->class_name);
  return out;
}

bool DocumentSet::operator==(const DocumentSet& o) const {
  if (docs_.size() != o.docs_.size()) return false;
  for (std::size_t i = 0; i < docs_.size(); ++i)
    if (!(docs_[i] == o.docs_[i])) return false;
  return true;
}

Project load_project(const std::filesystem::path& manifest) {
  Project p;
  std::filesystem::path dir = manifest.parent_path();
  p.manifest = parse_manifest(read_file(manifest), dir);
  for (const auto& rel : p.manifest.documents) {
    std::filesystem::path path = dir / rel;
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::Project, "missing document file " + path.string());
    Document d = [&] {
      try {
        return parse_document(read_file(path));
      } catch (const ParseError& e) {
        throw ParseError(path.string(), e);
      }
    }();
    p.paths[name_of(d)] = path;
    p.docs.add(std::move(d));
  }
  return p;
}

Universe universe_for(const DocumentSet& ds, const std::map<std::string, int>& bounds,
                      std::optional<std::uint64_t> budget) {
  std::map<std::string, int> pools;
  for (const auto& c : ds.declared_classes()) pools[c] = 1;
  for (const auto* lc : ds.lifecycles()) pools.emplace(lc->class_name, 1);
  for (const auto& [c, n] : bounds) pools[c] = n;
  std::vector<TypeDocument> types;
  for (const auto* t : ds.types()) types.push_back(*t);
  Universe u = build_universe(types, pools);
  if (budget) u.set_enumeration_cap(*budget);
  return u;
}

Universe project_universe(const Project& p) {
  return universe_for(p.docs, p.manifest.bounds, p.manifest.budget);
}

}  // namespace viewforge
