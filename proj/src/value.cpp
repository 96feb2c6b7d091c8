#include "viewforge/value.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "viewforge/error.hpp"

namespace viewforge {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::Structure: return "Structure";
    case ErrorCode::Project: return "ProjectError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::SortMismatch: return "SortMismatch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::AlreadyPrimed: return "AlreadyPrimed";
    case ErrorCode::PatternVariableClash: return "PatternVariableClash";
    case ErrorCode::BudgetExceeded: return "CombinatorialBudgetExceeded";
    case ErrorCode::UnknownSort: return "UnknownSort";
    case ErrorCode::ZeroBound: return "ZeroBound";
    case ErrorCode::AttributeCollision: return "AttributeCollision";
    case ErrorCode::IdPoolExhausted: return "IdPoolExhausted";
    case ErrorCode::TargetMissing: return "TargetMissing";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::IllegalPayload: return "IllegalPayload";
    case ErrorCode::Scenario: return "ScenarioError";
    case ErrorCode::CapExceeded: return "CapExceeded";
  }
  return "Unknown";
}

ParseError::ParseError(ErrorCode code, int line, int column, std::vector<std::string> expected,
                       const std::string& message)
    : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

ParseError::ParseError(const std::string& prefix, const ParseError& base)
    : Error(base.code(), prefix + ": " + base.what()),
      line_(base.line_),
      column_(base.column_),
      expected_(base.expected_) {}

Value::Value() {
  static const auto zero = std::make_shared<const Rep>(std::int64_t{0});
  rep_ = zero;
}

Value Value::atom(std::string name) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<const Rep>> interned;
  std::lock_guard<std::mutex> lock(mu);
  auto it = interned.find(name);
  if (it == interned.end()) {
    auto rep = std::make_shared<const Rep>(Atom{name});
    it = interned.emplace(std::move(name), std::move(rep)).first;
  }
  return Value{it->second};
}

Value Value::integer(std::int64_t v) { return Value{std::make_shared<const Rep>(v)}; }

Value Value::set(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return Value{std::make_shared<const Rep>(SetValue{std::move(elems)})};
}

Value Value::seq(std::vector<Value> items) { return Value{std::make_shared<const Rep>(SeqValue{std::move(items)})}; }
Value Value::message(Message m) { return Value{std::make_shared<const Rep>(std::move(m))}; }

const char* Value::kind_name() const {
  switch (rep_->index()) {
    case 0: return "atom";
    case 1: return "int";
    case 2: return "set";
    case 3: return "sequence";
    default: return "message";
  }
}

bool operator==(const Atom& a, const Atom& b) { return a.name == b.name; }
bool operator<(const Atom& a, const Atom& b) { return a.name < b.name; }
bool operator==(const SetValue& a, const SetValue& b) { return a.elems == b.elems; }
bool operator<(const SetValue& a, const SetValue& b) { return a.elems < b.elems; }
bool operator==(const SeqValue& a, const SeqValue& b) { return a.items == b.items; }
bool operator<(const SeqValue& a, const SeqValue& b) { return a.items < b.items; }

bool operator==(const Message& a, const Message& b) {
  return a.receiver == b.receiver && a.sender == b.sender && a.name == b.name && a.args == b.args;
}

bool operator<(const Message& a, const Message& b) {
  if (a.receiver != b.receiver) return a.receiver < b.receiver;
  if (a.sender != b.sender) return a.sender < b.sender;
  if (a.name != b.name) return a.name < b.name;
  return a.args < b.args;
}

bool operator==(const Value& a, const Value& b) {
  if (a.same_payload(b)) return true;
  if (a.is_atom() && b.is_atom()) return false;
  return a.rep() == b.rep();
}

bool operator<(const Value& a, const Value& b) {
  if (a.same_payload(b)) return false;
  return a.rep() < b.rep();
}

bool set_contains(const Value& set, const Value& v) {
  const auto& elems = set.as_set();
  return std::binary_search(elems.begin(), elems.end(), v);
}

namespace {

void join(std::ostringstream& out, const std::vector<Value>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out << ", ";
    out << to_string(vs[i]);
  }
}

}  // namespace

std::string to_string(const Message& m) {
  std::ostringstream out;
  out << m.sender << " -> " << m.receiver << " " << m.name << "(";
  join(out, m.args);
  out << ")";
  return out.str();
}

std::string to_string(const Value& v) {
  std::ostringstream out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          out << x.name;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out << x;
        } else if constexpr (std::is_same_v<T, SetValue>) {
          out << "{";
          join(out, x.elems);
          out << "}";
        } else if constexpr (std::is_same_v<T, SeqValue>) {
          out << "<";
          join(out, x.items);
          out << ">";
        } else {
          out << "[" << to_string(x) << "]";
        }
      },
      v.rep());
  return out.str();
}

void Binding::set(const std::string& name, Value v, std::string sort) {
  values.insert_or_assign(name, std::move(v));
  if (!sort.empty()) sorts.insert_or_assign(name, std::move(sort));
}

const Value* Binding::find(const std::string& name) const {
  auto it = values.find(name);
  return it == values.end() ? nullptr : &it->second;
}

std::string to_string(const Binding& b) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [name, value] : b.values) {
    if (!first) out << ", ";
    first = false;
    out << name << " = " << to_string(value);
  }
  out << "}";
  return out.str();
}

}  // namespace viewforge
