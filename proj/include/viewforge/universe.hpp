#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "viewforge/documents.hpp"
#include "viewforge/signature.hpp"
#include "viewforge/value.hpp"

namespace viewforge {

/// Default cap on search nodes per enumeration; see Universe::enumeration_cap.
inline constexpr std::uint64_t kDefaultEnumerationCap = 20'000'000;

/// Finite carriers for every sort plus identifier pools per class.
///
/// Carrier order is deterministic: declaration order for enumerations,
/// ascending for integer ranges, pool order for classes, and binary counting
/// order over the element carrier for set sorts.
class Universe {
 public:
  Universe();

  /// Carrier of a sort. Throws UnknownSort for undeclared names and
  /// BudgetExceeded for carriers that cannot be materialized (Out, or set
  /// sorts over very large element carriers).
  const std::vector<Value>& carrier(const SortExpr& sort) const;

  /// Membership without materializing the carrier.
  bool contains(const SortExpr& sort, const Value& v) const;

  /// Value named by a bare identifier: enumeration literal, object
  /// identifier or EXTERNAL.
  const Value* literal(const std::string& name) const;

  /// Name of the sort a value belongs to ("" when not an atom of this universe).
  std::string sort_of(const Value& v) const;

  bool is_class(const std::string& name) const { return pools_.count(name) != 0; }
  bool has_named_sort(const std::string& name) const;
  /// Declared (non-class) sort, or null.
  const SortDef* sort_def(const std::string& name) const { return find_sort(name); }
  void require_sort(const SortExpr& sort) const;

  const std::vector<Value>& pool(const std::string& cls) const;
  std::vector<std::string> classes() const;
  /// Class of an identifier, empty for EXTERNAL or non-identifiers.
  std::string class_of(const std::string& id) const;

  /// Makes `In C` carriers available; messages are ordered by method (canonical
  /// order), then sender, then arguments lexicographically.
  void attach_signatures(const SignatureEnv& env);

  std::uint64_t enumeration_cap() const { return cap_; }
  void set_enumeration_cap(std::uint64_t cap) { cap_ = cap; }

  /// Flat description, one sort per line, for reports and tests.
  std::string describe() const;

 private:
  friend Universe build_universe(const std::vector<TypeDocument>&, const std::map<std::string, int>&);

  const SortDef* find_sort(const std::string& name) const;
  std::vector<Value> materialize(const SortExpr& sort) const;

  std::map<std::string, SortDef> sorts_;
  std::map<std::string, std::vector<Value>> pools_;
  std::vector<std::string> class_order_;
  std::map<std::string, Value> literals_;
  std::map<std::string, std::string> literal_sort_;
  std::map<std::string, std::vector<MethodSig>> inputs_;
  std::uint64_t cap_ = kDefaultEnumerationCap;

  mutable std::shared_ptr<std::mutex> cache_mutex_;
  mutable std::map<SortExpr, std::shared_ptr<const std::vector<Value>>> cache_;
};

/// Builds carriers from the type documents and synthesizes identifier pools
/// `<Class>#0 .. <Class>#n-1` from `pool_sizes`.
///
/// Errors: UnknownSort for a set sort over an undeclared element sort or a
/// sort/class name clash; ZeroBound for a pool size below one; NameClash for
/// an enumeration literal used by two sorts.
Universe build_universe(const std::vector<TypeDocument>& types, const std::map<std::string, int>& pool_sizes);

}  // namespace viewforge
