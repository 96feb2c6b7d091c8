#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace viewforge {

struct Value;

/// Enumeration literal or object identifier (including EXTERNAL).
struct Atom {
  std::string name;
};

/// Finite set; elements kept sorted and unique.
struct SetValue {
  std::vector<Value> elems;
};

/// Finite sequence, used for the `out` message sequence.
struct SeqValue {
  std::vector<Value> items;
};

/// A message in transit: body (name + args) plus routing metadata.
struct Message {
  std::string receiver;
  std::string sender;
  std::string name;
  std::vector<Value> args;
};

inline constexpr const char* kExternal = "EXTERNAL";

/// Immutable value with a shared payload; copies are cheap. Atoms are
/// interned, so equal atoms share one payload.
struct Value {
  using Rep = std::variant<Atom, std::int64_t, SetValue, SeqValue, Message>;

  Value();

  static Value atom(std::string name);
  static Value integer(std::int64_t v);
  /// Sorts and deduplicates.
  static Value set(std::vector<Value> elems);
  static Value seq(std::vector<Value> items);
  static Value message(Message m);

  bool is_atom() const { return std::holds_alternative<Atom>(*rep_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(*rep_); }
  bool is_set() const { return std::holds_alternative<SetValue>(*rep_); }
  bool is_seq() const { return std::holds_alternative<SeqValue>(*rep_); }
  bool is_message() const { return std::holds_alternative<Message>(*rep_); }

  const std::string& as_atom() const { return std::get<Atom>(*rep_).name; }
  std::int64_t as_int() const { return std::get<std::int64_t>(*rep_); }
  const std::vector<Value>& as_set() const { return std::get<SetValue>(*rep_).elems; }
  const std::vector<Value>& as_seq() const { return std::get<SeqValue>(*rep_).items; }
  const Message& as_message() const { return std::get<Message>(*rep_); }

  const Rep& rep() const { return *rep_; }
  bool same_payload(const Value& o) const { return rep_ == o.rep_; }

  /// Kind name for diagnostics ("atom", "int", "set", "sequence", "message").
  const char* kind_name() const;

 private:
  explicit Value(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

bool operator==(const Atom& a, const Atom& b);
bool operator<(const Atom& a, const Atom& b);
bool operator==(const SetValue& a, const SetValue& b);
bool operator<(const SetValue& a, const SetValue& b);
bool operator==(const SeqValue& a, const SeqValue& b);
bool operator<(const SeqValue& a, const SeqValue& b);
bool operator==(const Message& a, const Message& b);
bool operator<(const Message& a, const Message& b);
bool operator==(const Value& a, const Value& b);
bool operator<(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

bool set_contains(const Value& set, const Value& v);

std::string to_string(const Value& v);
std::string to_string(const Message& m);

/// Named values, ordered by name. Sorts travel alongside in `sorts` when known.
struct Binding {
  std::map<std::string, Value> values;
  std::map<std::string, std::string> sorts;

  void set(const std::string& name, Value v, std::string sort = {});
  const Value* find(const std::string& name) const;
  bool operator==(const Binding& other) const { return values == other.values; }
};

/// `{a = 1, b = {c1}}` in name order.
std::string to_string(const Binding& b);

}  // namespace viewforge
