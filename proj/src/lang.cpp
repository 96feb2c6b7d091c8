#include "viewforge/lang.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "viewforge/error.hpp"

namespace viewforge {

namespace {

// ------------------------------------------------------------------ lexer

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view src) {
  static const char* const kMulti[] = {"<=>", "=>", "->", "--", "..", "<=", ">=", "!="};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int tl = line, tc = col;
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size()) {
        if (ident_char(src[j])) {
          ++j;
        } else if (src[j] == '-' && j + 1 < src.size() && ident_char(src[j + 1])) {
          j += 2;
        } else if (src[j] == '#' && j + 1 < src.size() &&
                   std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
          j += 2;
        } else {
          break;
        }
      }
      if (j < src.size() && src[j] == '\'') ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* m : kMulti) {
      std::string_view mv(m);
      if (src.substr(i, mv.size()) == mv) {
        out.push_back({Tok::Sym, std::string(mv), tl, tc});
        advance(mv.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view(":;,()[]{}<>=!?.+-*").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), tl, tc});
      advance(1);
      continue;
    }
    throw ParseError(ErrorCode::Syntax, tl, tc, {}, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "and",    "or",      "not",   "exists", "forall", "true",   "false",  "self",
      "in",     "out",     "elem",  "subset", "card",   "arg",    "new",    "Set",
      "In",     "Id",      "Out",   "pre",    "post",   "input",  "output", "vars",
      "havoc",  "state",   "initial", "transition", "class", "attributes", "methods",
      "sort",   "classes", "relationship"};
  return words;
}

// ----------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Document document() {
    const Token& t = peek();
    if (is_word("typedocument")) return type_document();
    if (is_word("objectmodel")) return object_model();
    if (is_word("classdocument")) return class_document();
    if (is_word("lifecycledocument")) return lifecycle_document();
    fail(t, {"typedocument", "objectmodel", "classdocument", "lifecycledocument"});
  }

  Formula formula() {
    if (is_word("exists") || is_word("forall")) return quantifier();
    return iff();
  }

  Term term() { return arith(); }

  SortExpr sort() {
    if (accept_word("Set")) return SortExpr::set_of(identifier("sort name"));
    if (accept_word("In")) return SortExpr::input_of(identifier("class name"));
    if (accept_word("Id")) return SortExpr::id();
    if (accept_word("Out")) return SortExpr::out();
    return SortExpr::named(identifier("sort name"));
  }

  Role role() {
    Role r;
    r.class_name = identifier("class name");
    if (peek().kind == Tok::Ident) r.rolename = identifier("rolename");
    r.card = cardinality();
    return r;
  }

  Relationship relationship() {
    Relationship rel;
    rel.first = role();
    expect("--");
    rel.second = role();
    return rel;
  }

  MethodSig method() {
    MethodSig m;
    const Token& at = peek();
    m.name = identifier("method name");
    expect("(");
    std::set<std::string> seen;
    if (!accept(")")) {
      do {
        const Token& pt = peek();
        Param p;
        p.name = identifier("parameter name");
        expect(":");
        p.sort = sort();
        if (!seen.insert(p.name).second)
          duplicate(pt, "parameter '" + p.name + "' in method '" + m.name + "'");
        m.params.push_back(std::move(p));
      } while (accept(","));
      expect(")");
    }
    (void)at;
    return m;
  }

  AttributeDecl attribute() {
    AttributeDecl a;
    a.name = identifier("attribute name");
    expect(":");
    a.sort = sort();
    return a;
  }

  StateDef state() {
    StateDef s;
    s.name = identifier("state name");
    expect("[");
    const Token& ft = peek();
    s.predicate = formula();
    expect("]");
    auto free = free_names(*s.predicate);
    for (const auto& n : free) {
      if (n.back() == '\'' || n == "in" || n == "out" || n == "self")
        structure(ft, "state predicate of '" + s.name + "' may only mention unprimed attributes, found '" + n + "'");
    }
    return s;
  }

  TransitionDef transition() {
    expect_word("transition");
    TransitionDef t;
    t.name = identifier("transition name");
    expect(":");
    t.source = identifier("state name");
    expect("->");
    t.target = identifier("state name");
    if (accept_word("input")) {
      const Token& it = peek();
      InputPattern in;
      in.sender = identifier("sender variable");
      expect("?");
      in.method = identifier("method name");
      expect("(");
      std::set<std::string> seen{in.sender};
      if (!accept(")")) {
        do {
          const Token& vt = peek();
          auto v = identifier("pattern variable");
          if (!seen.insert(v).second) duplicate(vt, "pattern variable '" + v + "'");
          in.vars.push_back(std::move(v));
        } while (accept(","));
        expect(")");
      }
      (void)it;
      t.input = std::move(in);
    }
    if (accept_word("output")) {
      do {
        t.outputs.push_back(output_pattern());
      } while (accept(","));
    }
    if (accept_word("vars")) {
      std::set<std::string> seen;
      do {
        const Token& vt = peek();
        VarDecl v;
        v.name = identifier("variable name");
        expect(":");
        v.sort = sort();
        if (!seen.insert(v.name).second) duplicate(vt, "variable '" + v.name + "'");
        t.vars.push_back(std::move(v));
      } while (accept(","));
    }
    if (accept_word("havoc")) {
      do {
        t.havoc.push_back(identifier("attribute name"));
      } while (accept(","));
    }
    if (accept_word("pre")) {
      const Token& pt = peek();
      t.pre = formula();
      for (const auto& n : free_names(*t.pre))
        if (n.back() == '\'' || n == "out")
          structure(pt, "precondition of '" + t.name + "' may not mention '" + n + "'");
    } else {
      t.pre = ex::truth();
    }
    t.post = accept_word("post") ? formula() : ex::truth();
    return t;
  }

  OutputPattern output_pattern() {
    OutputPattern o;
    if (accept_word("new")) {
      o.new_var = identifier("variable name");
      expect(":");
      o.new_class = identifier("class name");
    } else {
      o.receiver = primary_base();
    }
    expect("!");
    o.method = identifier("method name");
    expect("(");
    if (!accept(")")) {
      do {
        o.args.push_back(term());
      } while (accept(","));
      expect(")");
    }
    return o;
  }

  void finish() {
    if (peek().kind != Tok::End) fail(peek(), {"end of input"});
  }

  void optional_semicolon() { accept(";"); }

 private:
  // --------------------------------------------------------- documents

  Document type_document() {
    expect_word("typedocument");
    TypeDocument d;
    d.name = identifier("document name");
    expect(":");
    std::set<std::string> names;
    while (accept_word("sort")) {
      const Token& st = peek();
      SortDef s;
      s.name = identifier("sort name");
      if (!names.insert(s.name).second) duplicate(st, "sort '" + s.name + "'");
      expect("=");
      if (accept("{")) {
        s.kind = SortDef::Kind::Enumeration;
        std::set<std::string> lits;
        if (!accept("}")) {
          do {
            const Token& lt = peek();
            auto lit = identifier("literal");
            if (!lits.insert(lit).second) duplicate(lt, "literal '" + lit + "' in sort '" + s.name + "'");
            s.literals.push_back(std::move(lit));
          } while (accept(","));
          expect("}");
        }
        if (s.literals.empty()) structure(st, "enumeration sort '" + s.name + "' is empty");
      } else if (accept_word("Set")) {
        s.kind = SortDef::Kind::SetOf;
        s.element = identifier("sort name");
      } else if (peek().kind == Tok::Int || is_sym("-")) {
        s.kind = SortDef::Kind::Range;
        s.low = integer();
        expect("..");
        s.high = integer();
        if (s.low > s.high) structure(st, "integer range of sort '" + s.name + "' is empty");
      } else {
        fail(peek(), {"{", "Set", "integer"});
      }
      optional_semicolon();
      d.sorts.push_back(std::move(s));
    }
    expect_word("endtypedocument");
    Document doc = std::move(d);
    canonicalize(doc);
    return doc;
  }

  Document object_model() {
    expect_word("objectmodel");
    ObjectModelDoc d;
    d.name = identifier("document name");
    expect(":");
    std::set<std::string> classes;
    if (accept_word("classes")) {
      do {
        const Token& ct = peek();
        auto c = identifier("class name");
        if (!classes.insert(c).second) duplicate(ct, "class '" + c + "'");
        d.classes.push_back(std::move(c));
      } while (accept(","));
      optional_semicolon();
    }
    std::set<std::pair<std::string, std::string>> pairs;
    std::set<std::pair<std::string, std::string>> rolenames;
    while (accept_word("relationship")) {
      const Token& rt = peek();
      auto rel = relationship();
      optional_semicolon();
      for (const Role* r : {&rel.first, &rel.second}) {
        if (!classes.count(r->class_name))
          structure(rt, "role class '" + r->class_name + "' is not among the model's classes");
        if (r->rolename && !rolenames.insert({r->class_name, *r->rolename}).second)
          duplicate(rt, "rolename '" + *r->rolename + "' at class '" + r->class_name + "'");
      }
      auto a = rel.first.rolename.value_or(""), b = rel.second.rolename.value_or("");
      if (b < a) std::swap(a, b);
      if (!pairs.insert({a, b}).second)
        duplicate(rt, "relationship with rolenames {" + a + ", " + b + "}");
      d.relationships.push_back(std::move(rel));
    }
    expect_word("endobjectmodel");
    Document doc = std::move(d);
    canonicalize(doc);
    return doc;
  }

  Document class_document() {
    expect_word("classdocument");
    ClassDescriptionDoc d;
    d.name = identifier("document name");
    expect(":");
    expect_word("class");
    d.class_name = identifier("class name");
    optional_semicolon();
    if (accept_word("attributes")) {
      std::set<std::string> seen;
      while (peek().kind == Tok::Ident && !is_word("methods") && !is_word("endclassdocument")) {
        const Token& at = peek();
        auto a = attribute();
        if (!seen.insert(a.name).second) duplicate(at, "attribute '" + a.name + "'");
        d.attributes.push_back(std::move(a));
        optional_semicolon();
      }
    }
    if (accept_word("methods")) {
      std::set<std::pair<std::string, std::size_t>> seen;
      while (peek().kind == Tok::Ident && !is_word("endclassdocument")) {
        const Token& mt = peek();
        auto m = method();
        if (!seen.insert({m.name, m.params.size()}).second)
          duplicate(mt, "method '" + m.name + "/" + std::to_string(m.params.size()) + "'");
        d.methods.push_back(std::move(m));
        optional_semicolon();
      }
    }
    expect_word("endclassdocument");
    Document doc = std::move(d);
    canonicalize(doc);
    return doc;
  }

  Document lifecycle_document() {
    expect_word("lifecycledocument");
    LifecycleDoc d;
    d.name = identifier("document name");
    expect(":");
    expect_word("class");
    d.class_name = identifier("class name");
    optional_semicolon();
    std::set<std::string> states;
    if (!is_word("state")) fail(peek(), {"state"});
    while (accept_word("state")) {
      const Token& st = peek();
      auto s = state();
      if (!states.insert(s.name).second) duplicate(st, "state '" + s.name + "'");
      d.states.push_back(std::move(s));
      optional_semicolon();
    }
    expect_word("initial");
    do {
      const Token& it = peek();
      auto s = identifier("state name");
      if (!states.count(s)) structure(it, "initial state '" + s + "' is not declared");
      if (std::find(d.initial_states.begin(), d.initial_states.end(), s) != d.initial_states.end())
        duplicate(it, "initial state '" + s + "'");
      d.initial_states.push_back(std::move(s));
    } while (accept(","));
    optional_semicolon();
    std::set<std::string> names;
    while (is_word("transition")) {
      const Token& tt = toks_[pos_ + 1];
      auto t = transition();
      optional_semicolon();
      if (!names.insert(t.name).second) duplicate(tt, "transition '" + t.name + "'");
      if (!states.count(t.source)) structure(tt, "transition '" + t.name + "' leaves undeclared state '" + t.source + "'");
      if (!states.count(t.target)) structure(tt, "transition '" + t.name + "' enters undeclared state '" + t.target + "'");
      d.transitions.push_back(std::move(t));
    }
    expect_word("endlifecycledocument");
    Document doc = std::move(d);
    canonicalize(doc);
    return doc;
  }

  // ---------------------------------------------------------- formulas

  Formula quantifier() {
    const bool is_exists = is_word("exists");
    next();
    auto var = identifier("variable name");
    expect(":");
    auto s = sort();
    expect(".");
    auto body = formula();
    return is_exists ? ex::exists(var, s, body) : ex::forall(var, s, body);
  }

  Formula iff() {
    auto lhs = implication();
    while (accept("<=>")) lhs = ex::binary(Op::Iff, lhs, implication());
    return lhs;
  }

  Formula implication() {
    auto lhs = disjunction();
    if (accept("=>")) return ex::binary(Op::Implies, lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    auto lhs = conjunction();
    while (accept_word("or")) lhs = ex::binary(Op::Or, lhs, conjunction());
    return lhs;
  }

  Formula conjunction() {
    auto lhs = negation();
    while (accept_word("and")) lhs = ex::binary(Op::And, lhs, negation());
    return lhs;
  }

  Formula negation() {
    if (accept_word("not")) return ex::neg(negation());
    if (is_word("exists") || is_word("forall")) return quantifier();
    return comparison();
  }

  Formula comparison() {
    auto lhs = arith();
    static const std::pair<const char*, Op> kOps[] = {{"=", Op::Eq},  {"!=", Op::Ne}, {"<", Op::Lt},
                                                      {"<=", Op::Le}, {">", Op::Gt},  {">=", Op::Ge}};
    for (const auto& [sym, op] : kOps)
      if (accept(sym)) return ex::binary(op, lhs, arith());
    if (accept_word("elem")) return ex::binary(Op::Elem, lhs, arith());
    if (accept_word("subset")) return ex::binary(Op::Subset, lhs, arith());
    return lhs;
  }

  Term arith() {
    auto lhs = primary();
    while (true) {
      if (accept("+"))
        lhs = ex::binary(Op::Add, lhs, primary());
      else if (accept("-"))
        lhs = ex::binary(Op::Sub, lhs, primary());
      else
        return lhs;
    }
  }

  Term primary() {
    auto base = primary_base();
    if (is_sym("?") || is_sym("!")) {
      const bool input = is_sym("?");
      next();
      auto method = identifier("method name");
      expect("(");
      std::vector<ExprPtr> args;
      if (!accept(")")) {
        do {
          args.push_back(term());
        } while (accept(","));
        expect(")");
      }
      return input ? ex::in_msg(base, method, args) : ex::out_msg(base, method, args);
    }
    return base;
  }

  Term primary_base() {
    const Token& t = peek();
    if (t.kind == Tok::Int || is_sym("-")) return ex::integer(integer());
    if (accept("(")) {
      auto f = formula();
      expect(")");
      return f;
    }
    if (accept("{")) {
      std::vector<ExprPtr> elems;
      if (!accept("}")) {
        do {
          elems.push_back(term());
        } while (accept(","));
        expect("}");
      }
      return ex::set_lit(std::move(elems));
    }
    if (accept("<")) {
      std::vector<ExprPtr> items;
      if (!accept(">")) {
        do {
          items.push_back(term());
        } while (accept(","));
        expect(">");
      }
      return ex::seq_lit(std::move(items));
    }
    if (t.kind == Tok::Ident) {
      if (accept_word("true")) return ex::truth();
      if (accept_word("false")) return ex::falsity();
      if (accept_word("self")) return ex::self();
      if (accept_word("in")) return ex::in();
      if (accept_word("out")) return ex::out();
      if (accept_word("card")) {
        expect("(");
        auto s = term();
        expect(")");
        return ex::unary(Op::Card, s);
      }
      if (accept_word("arg")) {
        expect("(");
        auto m = term();
        expect(",");
        auto k = integer();
        expect(")");
        return ex::arg(m, k);
      }
      if (reserved_words().count(t.text)) fail(t, {"term"});
      next();
      if (t.text.back() == '\'') return ex::primed(t.text.substr(0, t.text.size() - 1));
      return ex::name(t.text);
    }
    fail(t, {"term"});
  }

  // ------------------------------------------------------------ tokens

  Cardinality cardinality() {
    const Token& t = peek();
    if (t.kind == Tok::Int && t.text == "1") {
      next();
      return Cardinality::One;
    }
    if (accept("*")) return Cardinality::Many;
    fail(t, {"1", "*"});
  }

  std::int64_t integer() {
    const bool negative = accept("-");
    const Token& t = peek();
    if (t.kind != Tok::Int) fail(t, {"integer"});
    next();
    std::int64_t v = 0;
    try {
      v = std::stoll(t.text);
    } catch (const std::exception&) {
      throw ParseError(ErrorCode::Syntax, t.line, t.column, {"integer"}, "integer literal out of range");
    }
    return negative ? -v : v;
  }

  std::string identifier(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || reserved_words().count(t.text)) fail(t, {what});
    next();
    return t.text;
  }

  const Token& peek() const { return toks_[pos_]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }

  bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }

  bool accept(const char* s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }

  bool accept_word(const char* w) {
    if (!is_word(w)) return false;
    next();
    return true;
  }

  void expect(const char* s) {
    if (!accept(s)) fail(peek(), {s});
  }

  void expect_word(const char* w) {
    if (!accept_word(w)) fail(peek(), {w});
  }

  [[noreturn]] void fail(const Token& t, std::vector<std::string> expected) const {
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "expected ";
    if (expected.size() > 1) msg += "one of ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    msg += ", found " + found;
    throw ParseError(ErrorCode::Syntax, t.line, t.column, std::move(expected), msg);
  }

  [[noreturn]] void duplicate(const Token& t, const std::string& what) const {
    throw ParseError(ErrorCode::DuplicateName, t.line, t.column, {}, "duplicate " + what);
  }

  [[noreturn]] void structure(const Token& t, const std::string& what) const {
    throw ParseError(ErrorCode::Structure, t.line, t.column, {}, what);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <typename F>
auto parse_fragment(std::string_view text, F&& f) {
  Parser p(text);
  auto result = f(p);
  p.optional_semicolon();
  p.finish();
  return result;
}

// --------------------------------------------------------------- renderer

std::string join_names(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s;
}

void render_type(std::ostringstream& out, const TypeDocument& d) {
  out << "typedocument " << d.name << " :\n";
  for (const auto& s : d.sorts) {
    out << "  sort " << s.name << " = ";
    switch (s.kind) {
      case SortDef::Kind::Enumeration: out << "{ " << join_names(s.literals) << " }"; break;
      case SortDef::Kind::Range: out << s.low << " .. " << s.high; break;
      case SortDef::Kind::SetOf: out << "Set " << s.element; break;
    }
    out << " ;\n";
  }
  out << "endtypedocument\n";
}

void render_object_model(std::ostringstream& out, const ObjectModelDoc& d) {
  out << "objectmodel " << d.name << " :\n";
  if (!d.classes.empty()) out << "  classes " << join_names(d.classes) << " ;\n";
  for (const auto& r : d.relationships) out << "  relationship " << render_relationship(r) << " ;\n";
  out << "endobjectmodel\n";
}

void render_class(std::ostringstream& out, const ClassDescriptionDoc& d) {
  out << "classdocument " << d.name << " :\n";
  out << "  class " << d.class_name << " ;\n";
  if (!d.attributes.empty()) {
    out << "  attributes\n";
    for (const auto& a : d.attributes) out << "    " << a.name << " : " << to_string(a.sort) << " ;\n";
  }
  if (!d.methods.empty()) {
    out << "  methods\n";
    for (const auto& m : d.methods) out << "    " << render_method(m) << " ;\n";
  }
  out << "endclassdocument\n";
}

void render_lifecycle(std::ostringstream& out, const LifecycleDoc& d) {
  out << "lifecycledocument " << d.name << " :\n";
  out << "  class " << d.class_name << " ;\n";
  for (const auto& s : d.states) out << "  state " << s.name << " [ " << render(s.predicate) << " ] ;\n";
  out << "  initial " << join_names(d.initial_states) << " ;\n";
  for (const auto& t : d.transitions) out << render_transition(t, "  ") << "\n";
  out << "endlifecycledocument\n";
}

}  // namespace

Document parse_document(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.document(); });
}

Formula parse_formula(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.formula(); });
}

Term parse_term(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.term(); });
}

SortExpr parse_sort(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.sort(); });
}

Role parse_role(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.role(); });
}

Relationship parse_relationship(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.relationship(); });
}

MethodSig parse_method(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.method(); });
}

AttributeDecl parse_attribute(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.attribute(); });
}

StateDef parse_state(std::string_view text) {
  return parse_fragment(text, [](Parser& p) { return p.state(); });
}

TransitionDef parse_transition(std::string_view text) {
  auto t = parse_fragment(text, [](Parser& p) { return p.transition(); });
  std::sort(t.vars.begin(), t.vars.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(t.havoc.begin(), t.havoc.end());
  return t;
}

std::string render_role(const Role& r) {
  std::string s = r.class_name;
  if (r.rolename) s += " " + *r.rolename;
  s += r.card == Cardinality::One ? " 1" : " *";
  return s;
}

std::string render_relationship(const Relationship& r) {
  return render_role(r.first) + " -- " + render_role(r.second);
}

std::string render_method(const MethodSig& m) {
  std::string s = m.name + "(";
  for (std::size_t i = 0; i < m.params.size(); ++i)
    s += (i ? ", " : "") + m.params[i].name + " : " + to_string(m.params[i].sort);
  return s + ")";
}

std::string render_output(const OutputPattern& o) {
  std::string s;
  if (o.new_var)
    s = "new " + *o.new_var + " : " + o.new_class + " ";
  else {
    // receivers are primaries; reuse the expression printer on a message node
    auto probe = ex::out_msg(o.receiver, o.method, o.args);
    return render(probe);
  }
  s += "!" + o.method + "(";
  for (std::size_t i = 0; i < o.args.size(); ++i) s += (i ? ", " : "") + render(o.args[i]);
  return s + ")";
}

std::string render_transition(const TransitionDef& t, const std::string& indent) {
  std::ostringstream out;
  const std::string inner = indent + "  ";
  out << indent << "transition " << t.name << " : " << t.source << " -> " << t.target;
  if (t.input) {
    out << "\n" << inner << "input " << t.input->sender << "?" << t.input->method << "("
        << join_names(t.input->vars) << ")";
  }
  if (!t.outputs.empty()) {
    out << "\n" << inner << "output ";
    for (std::size_t i = 0; i < t.outputs.size(); ++i) out << (i ? ", " : "") << render_output(t.outputs[i]);
  }
  if (!t.vars.empty()) {
    out << "\n" << inner << "vars ";
    for (std::size_t i = 0; i < t.vars.size(); ++i)
      out << (i ? ", " : "") << t.vars[i].name << " : " << to_string(t.vars[i].sort);
  }
  if (!t.havoc.empty()) out << "\n" << inner << "havoc " << join_names(t.havoc);
  if (t.pre && t.pre->op != Op::True) out << "\n" << inner << "pre " << render(t.pre);
  if (t.post && t.post->op != Op::True) out << "\n" << inner << "post " << render(t.post);
  out << " ;";
  return out.str();
}

std::string render_document(const Document& input) {
  Document doc = input;
  canonicalize(doc);
  std::ostringstream out;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, TypeDocument>)
          render_type(out, d);
        else if constexpr (std::is_same_v<T, ObjectModelDoc>)
          render_object_model(out, d);
        else if constexpr (std::is_same_v<T, ClassDescriptionDoc>)
          render_class(out, d);
        else
          render_lifecycle(out, d);
      },
      doc);
  return out.str();
}

}  // namespace viewforge
