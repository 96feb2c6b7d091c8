#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "viewforge/documents.hpp"
#include "viewforge/universe.hpp"

namespace viewforge {

/// Flat `key = value` manifest.
///
///   name = final
///   documents = ../types.vtype, objects.vobj, branch.vlife
///   bound.Branch = 2
///   budget = 20000000
///   scenario.return = ../scenarios/return.scn
///
/// Paths are relative to the manifest's directory. `#` starts a comment.
struct Manifest {
  std::string name;
  std::vector<std::string> documents;
  std::map<std::string, int> bounds;
  std::optional<std::uint64_t> budget;
  std::map<std::string, std::string> scenarios;
  std::filesystem::path dir;
};

Manifest parse_manifest(const std::string& text, const std::filesystem::path& dir = {});

/// The document set D of a project, in manifest order, indexed by name.
class DocumentSet {
 public:
  const std::vector<Document>& documents() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }

  const Document* find(const std::string& name) const;
  Document* find(const std::string& name);

  /// Throws Project when the name is taken, or when a second lifecycle for
  /// the same class is added.
  void add(Document d);
  /// Replaces the document currently called `name`.
  void replace(const std::string& name, Document d);

  std::vector<const TypeDocument*> types() const;
  std::vector<const ObjectModelDoc*> object_models() const;
  std::vector<const ClassDescriptionDoc*> class_documents() const;
  std::vector<const LifecycleDoc*> lifecycles() const;
  const LifecycleDoc* lifecycle_for(const std::string& cls) const;

  /// Classes named by object models or class documents.
  std::set<std::string> declared_classes() const;

  bool operator==(const DocumentSet& o) const;

 private:
  std::vector<Document> docs_;
};

struct Project {
  Manifest manifest;
  DocumentSet docs;
  std::map<std::string, std::filesystem::path> paths;  // document name -> file
};

/// Reads the manifest and every listed document. Errors: Project for an
/// unreadable manifest or document file, a duplicate document name or a
/// second lifecycle for one class; ParseError from the documents.
Project load_project(const std::filesystem::path& manifest);

/// Universe of a project: pool size from `bound.<Class>` (default 1) for
/// every declared class, enumeration cap from `budget`.
Universe project_universe(const Project& p);
Universe universe_for(const DocumentSet& ds, const std::map<std::string, int>& bounds,
                      std::optional<std::uint64_t> budget = std::nullopt);

std::string read_file(const std::filesystem::path& p);

}  // namespace viewforge
