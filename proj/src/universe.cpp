#include "viewforge/universe.hpp"

#include <algorithm>
#include <sstream>

#include "viewforge/error.hpp"

namespace viewforge {

namespace {

constexpr std::size_t kMaxSetBase = 20;

std::vector<Value> power_set(const std::vector<Value>& base) {
  if (base.size() > kMaxSetBase)
    throw BudgetExceeded("set carrier over " + std::to_string(base.size()) + " elements is too large");
  std::vector<Value> out;
  const std::uint64_t n = std::uint64_t{1} << base.size();
  out.reserve(n);
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    std::vector<Value> elems;
    for (std::size_t i = 0; i < base.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) elems.push_back(base[i]);
    out.push_back(Value::set(std::move(elems)));
  }
  return out;
}

}  // namespace

Universe::Universe() : cache_mutex_(std::make_shared<std::mutex>()) {}

const SortDef* Universe::find_sort(const std::string& name) const {
  auto it = sorts_.find(name);
  return it == sorts_.end() ? nullptr : &it->second;
}

bool Universe::has_named_sort(const std::string& name) const {
  return find_sort(name) != nullptr || is_class(name);
}

void Universe::require_sort(const SortExpr& sort) const {
  switch (sort.kind) {
    case SortExpr::Kind::Named:
    case SortExpr::Kind::Set:
      if (!has_named_sort(sort.name)) throw Error(ErrorCode::UnknownSort, "unknown sort " + sort.name);
      return;
    case SortExpr::Kind::In:
      if (!is_class(sort.name)) throw Error(ErrorCode::UnknownSort, "unknown class " + sort.name);
      return;
    case SortExpr::Kind::Id:
    case SortExpr::Kind::Out:
      return;
  }
}

const std::vector<Value>& Universe::pool(const std::string& cls) const {
  auto it = pools_.find(cls);
  if (it == pools_.end()) throw Error(ErrorCode::UnknownSort, "unknown class " + cls);
  return it->second;
}

std::vector<std::string> Universe::classes() const { return class_order_; }

std::string Universe::class_of(const std::string& id) const {
  auto hash = id.rfind('#');
  if (hash == std::string::npos) return {};
  std::string cls = id.substr(0, hash);
  auto it = pools_.find(cls);
  if (it == pools_.end()) return {};
  Value v = Value::atom(id);
  for (const auto& p : it->second)
    if (p == v) return cls;
  return {};
}

const Value* Universe::literal(const std::string& name) const {
  auto it = literals_.find(name);
  return it == literals_.end() ? nullptr : &it->second;
}

std::string Universe::sort_of(const Value& v) const {
  if (v.is_int()) {
    for (const auto& [name, def] : sorts_)
      if (def.kind == SortDef::Kind::Range && v.as_int() >= def.low && v.as_int() <= def.high) return name;
    return {};
  }
  if (!v.is_atom()) return {};
  auto it = literal_sort_.find(v.as_atom());
  return it == literal_sort_.end() ? std::string{} : it->second;
}

void Universe::attach_signatures(const SignatureEnv& env) {
  std::lock_guard<std::mutex> lock(*cache_mutex_);
  inputs_.clear();
  for (const auto& [cls, sig] : env.classes) inputs_[cls] = sig.methods;
  for (auto it = cache_.begin(); it != cache_.end();) {
    if (it->first.kind == SortExpr::Kind::In) it = cache_.erase(it);
    else ++it;
  }
}

bool Universe::contains(const SortExpr& sort, const Value& v) const {
  switch (sort.kind) {
    case SortExpr::Kind::Id:
      if (!v.is_atom()) return false;
      return v.as_atom() == kExternal || !class_of(v.as_atom()).empty();
    case SortExpr::Kind::Out: {
      if (!v.is_seq()) return false;
      for (const auto& m : v.as_seq())
        if (!m.is_message()) return false;
      return true;
    }
    case SortExpr::Kind::Set: {
      if (!v.is_set()) return false;
      SortExpr elem = SortExpr::named(sort.name);
      for (const auto& e : v.as_set())
        if (!contains(elem, e)) return false;
      return true;
    }
    case SortExpr::Kind::In: {
      if (!v.is_message()) return false;
      const Message& m = v.as_message();
      if (class_of(m.receiver) != sort.name) return false;
      if (!contains(SortExpr::id(), Value::atom(m.sender))) return false;
      auto it = inputs_.find(sort.name);
      if (it == inputs_.end()) return false;
      for (const auto& sig : it->second) {
        if (sig.name != m.name || sig.params.size() != m.args.size()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m.args.size() && ok; ++i) ok = contains(sig.params[i].sort, m.args[i]);
        if (ok) return true;
      }
      return false;
    }
    case SortExpr::Kind::Named:
      break;
  }
  if (is_class(sort.name)) return v.is_atom() && class_of(v.as_atom()) == sort.name;
  const SortDef* def = find_sort(sort.name);
  if (!def) throw Error(ErrorCode::UnknownSort, "unknown sort " + sort.name);
  switch (def->kind) {
    case SortDef::Kind::Enumeration:
      return v.is_atom() &&
             std::find(def->literals.begin(), def->literals.end(), v.as_atom()) != def->literals.end();
    case SortDef::Kind::Range:
      return v.is_int() && v.as_int() >= def->low && v.as_int() <= def->high;
    case SortDef::Kind::SetOf:
      return contains(SortExpr::set_of(def->element), v);
  }
  return false;
}

std::vector<Value> Universe::materialize(const SortExpr& sort) const {
  switch (sort.kind) {
    case SortExpr::Kind::Out:
      throw BudgetExceeded("sort Out has no finite carrier; pin `out` by an equation");
    case SortExpr::Kind::Id: {
      std::vector<Value> out;
      for (const auto& c : class_order_)
        for (const auto& id : pools_.at(c)) out.push_back(id);
      out.push_back(Value::atom(kExternal));
      return out;
    }
    case SortExpr::Kind::Set:
      return power_set(carrier(SortExpr::named(sort.name)));
    case SortExpr::Kind::In: {
      std::vector<Value> out;
      auto it = inputs_.find(sort.name);
      if (it == inputs_.end()) return out;
      const auto& senders = carrier(SortExpr::id());
      std::vector<MethodSig> methods = it->second;
      std::stable_sort(methods.begin(), methods.end(),
                       [](const MethodSig& a, const MethodSig& b) { return a.name < b.name; });
      for (const auto& receiver : pool(sort.name)) {
        for (const auto& sig : methods) {
          std::vector<const std::vector<Value>*> cars;
          for (const auto& p : sig.params) cars.push_back(&carrier(p.sort));
          std::uint64_t total = 1;
          for (auto* c : cars) total *= c->size();
          for (const auto& sender : senders) {
            for (std::uint64_t n = 0; n < total; ++n) {
              Message m{receiver.as_atom(), sender.as_atom(), sig.name, {}};
              m.args.resize(cars.size());
              std::uint64_t rest = n;
              for (std::size_t i = cars.size(); i-- > 0;) {
                m.args[i] = (*cars[i])[rest % cars[i]->size()];
                rest /= cars[i]->size();
              }
              out.push_back(Value::message(std::move(m)));
              if (out.size() > cap_) throw BudgetExceeded("input carrier of " + sort.name + " is too large");
            }
          }
        }
      }
      return out;
    }
    case SortExpr::Kind::Named:
      break;
  }
  if (is_class(sort.name)) return pool(sort.name);
  const SortDef* def = find_sort(sort.name);
  if (!def) throw Error(ErrorCode::UnknownSort, "unknown sort " + sort.name);
  std::vector<Value> out;
  switch (def->kind) {
    case SortDef::Kind::Enumeration:
      for (const auto& l : def->literals) out.push_back(Value::atom(l));
      break;
    case SortDef::Kind::Range:
      for (std::int64_t i = def->low; i <= def->high; ++i) out.push_back(Value::integer(i));
      break;
    case SortDef::Kind::SetOf:
      out = power_set(carrier(SortExpr::named(def->element)));
      break;
  }
  return out;
}

const std::vector<Value>& Universe::carrier(const SortExpr& sort) const {
  {
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    auto it = cache_.find(sort);
    if (it != cache_.end()) return *it->second;
  }
  auto values = std::make_shared<const std::vector<Value>>(materialize(sort));
  std::lock_guard<std::mutex> lock(*cache_mutex_);
  auto [it, inserted] = cache_.emplace(sort, std::move(values));
  return *it->second;
}

std::string Universe::describe() const {
  std::ostringstream out;
  auto list = [&](const std::vector<Value>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + to_string(vs[i]);
    return s;
  };
  for (const auto& [name, def] : sorts_) {
    out << "sort " << name << " : ";
    if (def.kind == SortDef::Kind::SetOf) out << "Set " << def.element << " (" << carrier(SortExpr::named(name)).size() << " values)";
    else out << "{" << list(carrier(SortExpr::named(name))) << "}";
    out << "\n";
  }
  for (const auto& c : class_order_) out << "class " << c << " : {" << list(pools_.at(c)) << "}\n";
  return out.str();
}

Universe build_universe(const std::vector<TypeDocument>& types, const std::map<std::string, int>& pool_sizes) {
  Universe u;
  for (const auto& [cls, n] : pool_sizes) {
    if (n < 1) throw Error(ErrorCode::ZeroBound, "bound for class " + cls + " must be at least 1");
    std::vector<Value> ids;
    for (int i = 0; i < n; ++i) {
      std::string id = cls + "#" + std::to_string(i);
      ids.push_back(Value::atom(id));
      u.literals_[id] = Value::atom(id);
      u.literal_sort_[id] = cls;
    }
    u.pools_[cls] = std::move(ids);
    u.class_order_.push_back(cls);
  }
  u.literals_[kExternal] = Value::atom(kExternal);
  for (const auto& doc : types) {
    for (const auto& s : doc.sorts) {
      if (u.sorts_.count(s.name) || u.pools_.count(s.name))
        throw Error(ErrorCode::NameClash, "sort " + s.name + " is declared twice");
      u.sorts_[s.name] = s;
      if (s.kind == SortDef::Kind::Enumeration) {
        for (const auto& l : s.literals) {
          if (u.literals_.count(l))
            throw Error(ErrorCode::NameClash, "literal " + l + " of sort " + s.name + " is already declared");
          u.literals_[l] = Value::atom(l);
          u.literal_sort_[l] = s.name;
        }
      }
    }
  }
  for (const auto& [name, def] : u.sorts_) {
    if (def.kind == SortDef::Kind::SetOf && !u.has_named_sort(def.element))
      throw Error(ErrorCode::UnknownSort, "sort " + name + " ranges over unknown sort " + def.element);
    if (def.kind == SortDef::Kind::Range && def.low > def.high)
      throw Error(ErrorCode::Structure, "empty range for sort " + name);
    if (def.kind == SortDef::Kind::Enumeration && def.literals.empty())
      throw Error(ErrorCode::Structure, "empty enumeration for sort " + name);
  }
  return u;
}

}  // namespace viewforge
