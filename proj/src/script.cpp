#include <cctype>
#include <sstream>

#include "viewforge/error.hpp"
#include "viewforge/lang.hpp"
#include "viewforge/refine.hpp"

namespace viewforge {

namespace {

struct RawEntry {
  int line = 0;
  std::string text;
};

std::string strip_comment(const std::string& s) {
  auto pos = s.find("//");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<RawEntry> split_entries(std::string_view text) {
  std::vector<RawEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string body = strip_comment(line);
    if (trim(body).empty()) continue;
    const bool continuation = std::isspace(static_cast<unsigned char>(body[0]));
    if (continuation) {
      if (out.empty()) throw ParseError(ErrorCode::Syntax, n, 1, {"step"}, "continuation line without a step");
      out.back().text += "\n" + body;
    } else {
      out.push_back(RawEntry{n, body});
    }
  }
  return out;
}

/// Splits off the first whitespace-delimited word.
std::string next_word(std::string& rest, int line, const char* what) {
  std::string r = trim(rest);
  std::size_t end = 0;
  while (end < r.size() && !std::isspace(static_cast<unsigned char>(r[end]))) ++end;
  if (end == 0) throw ParseError(ErrorCode::Syntax, line, 1, {what}, std::string("missing ") + what);
  std::string w = r.substr(0, end);
  rest = r.substr(end);
  return w;
}

/// Splits `text` at the first occurrence of `sep` outside brackets.
std::pair<std::string, std::string> split_top(const std::string& text, const std::string& sep, int line) {
  int depth = 0;
  for (std::size_t i = 0; i + sep.size() <= text.size(); ++i) {
    char c = text[i];
    if (c == '[' || c == '(' || c == '{') ++depth;
    if (c == ']' || c == ')' || c == '}') --depth;
    if (depth == 0 && text.compare(i, sep.size(), sep) == 0) return {text.substr(0, i), text.substr(i + sep.size())};
  }
  throw ParseError(ErrorCode::Syntax, line, 1, {sep}, "expected '" + sep + "'");
}

template <typename F>
auto fragment(int line, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError("script line " + std::to_string(line), e);
  }
}

ScriptEntry parse_entry(const RawEntry& raw) {
  ScriptEntry e;
  e.line = raw.line;
  std::string rest = raw.text;
  const int ln = raw.line;
  const std::string keyword = next_word(rest, ln, "step");
  if (keyword == "rename" || keyword == "expect") {
    e.kind = keyword == "rename" ? ScriptEntry::Kind::Rename : ScriptEntry::Kind::Expect;
    e.document = next_word(rest, ln, "document name");
    e.argument = next_word(rest, ln, keyword == "rename" ? "new name" : "path");
    if (!trim(rest).empty()) throw ParseError(ErrorCode::Syntax, ln, 1, {"end of line"}, "unexpected text after " + keyword);
    return e;
  }
  Step& s = e.step;
  static const std::map<std::string, StepKind> kinds{
      {"addclass", StepKind::AddClass}, {"addrel", StepKind::AddRel},     {"refrel", StepKind::RefRel},
      {"addmeth", StepKind::AddMeth},   {"addattr", StepKind::AddAttr},   {"addstate", StepKind::AddState},
      {"remstate", StepKind::RemState}, {"split", StepKind::Split},       {"addtrans", StepKind::AddTrans},
      {"remtrans", StepKind::RemTrans}, {"reftrans", StepKind::RefTrans}, {"reminit", StepKind::RemInit},
  };
  auto k = kinds.find(keyword);
  if (k == kinds.end()) {
    std::vector<std::string> expected{"rename", "expect"};
    for (const auto& [w, _] : kinds) expected.push_back(w);
    throw ParseError(ErrorCode::Syntax, ln, 1, expected, "unknown step '" + keyword + "'");
  }
  s.kind = k->second;
  s.target = next_word(rest, ln, "target");
  auto single_name = [&](const char* what) {
    s.name = next_word(rest, ln, what);
    if (!trim(rest).empty()) throw ParseError(ErrorCode::Syntax, ln, 1, {"end of line"}, "unexpected text after " + s.name);
  };
  switch (s.kind) {
    case StepKind::AddClass: single_name("class name"); break;
    case StepKind::RemState:
    case StepKind::RemInit: single_name("state name"); break;
    case StepKind::RemTrans: single_name("transition name"); break;
    case StepKind::AddRel: s.rel = fragment(ln, [&] { return parse_relationship(rest); }); break;
    case StepKind::RefRel: {
      auto [a, b] = split_top(rest, "=>", ln);
      s.rel = fragment(ln, [&] { return parse_relationship(a); });
      s.rel_new = fragment(ln, [&] { return parse_relationship(b); });
      break;
    }
    case StepKind::AddMeth: s.method = fragment(ln, [&] { return parse_method(rest); }); break;
    case StepKind::AddAttr: s.attribute = fragment(ln, [&] { return parse_attribute(rest); }); break;
    case StepKind::AddState: s.states.push_back(fragment(ln, [&] { return parse_state(rest); })); break;
    case StepKind::Split: {
      s.name = next_word(rest, ln, "state name");
      if (next_word(rest, ln, "into") != "into") throw ParseError(ErrorCode::Syntax, ln, 1, {"into"}, "expected 'into'");
      auto [a, b] = split_top(rest, ",", ln);
      s.states.push_back(fragment(ln, [&] { return parse_state(a); }));
      s.states.push_back(fragment(ln, [&] { return parse_state(b); }));
      break;
    }
    case StepKind::AddTrans: s.transition = fragment(ln, [&] { return parse_transition(rest); }); break;
    case StepKind::RefTrans:
      s.name = next_word(rest, ln, "transition name");
      s.transition = fragment(ln, [&] { return parse_transition(rest); });
      break;
  }
  return e;
}

}  // namespace

RefinementScript parse_script(std::string_view text, const std::filesystem::path& dir) {
  RefinementScript s;
  s.dir = dir;
  for (const auto& raw : split_entries(text)) s.entries.push_back(parse_entry(raw));
  return s;
}

RefinementScript load_script(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_script(text, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

// ------------------------------------------------------------------ replay

namespace {

std::string first_difference(const std::string& a, const std::string& b) {
  std::istringstream x(a), y(b);
  std::string la, lb;
  int n = 0;
  while (true) {
    ++n;
    bool ga = static_cast<bool>(std::getline(x, la));
    bool gb = static_cast<bool>(std::getline(y, lb));
    if (!ga && !gb) return "differs in line endings";
    if (ga != gb || la != lb) return "first difference at line " + std::to_string(n);
  }
}

const LifecycleDoc* lifecycle_of(const DocumentSet& ds, const std::string& target) {
  if (const Document* d = ds.find(target)) return std::get_if<LifecycleDoc>(d);
  for (const auto* lc : ds.lifecycles())
    if (lc->class_name == target) return lc;
  return nullptr;
}

}  // namespace

ReplayResult replay_script(const DocumentSet& ds, const RefinementScript& script, const ReplayOptions& opts) {
  ReplayResult r;
  r.docs = ds;
  auto stop = [&](const ScriptEntry& e, const std::string& msg) {
    r.completed = false;
    r.error = "line " + std::to_string(e.line) + ": " + msg;
    return r;
  };
  for (const auto& e : script.entries) {
    if (e.kind == ScriptEntry::Kind::Rename) {
      const Document* d = r.docs.find(e.document);
      if (!d) return stop(e, "TargetMissing: no document " + e.document);
      if (r.docs.find(e.argument)) return stop(e, "NameClash: document " + e.argument + " already exists");
      Document copy = *d;
      set_name(copy, e.argument);
      r.docs.replace(e.document, std::move(copy));
      continue;
    }
    if (e.kind == ScriptEntry::Kind::Expect) {
      CheckResult c{"expect", e.document, Verdict::Pass, std::nullopt, e.argument, false};
      const Document* d = r.docs.find(e.document);
      try {
        const std::string golden = read_file(script.dir / e.argument);
        if (!d) {
          c.verdict = Verdict::Fail;
          c.detail = "no document " + e.document;
        } else if (render_document(*d) != golden) {
          c.verdict = Verdict::Fail;
          c.detail = e.argument + ": " + first_difference(render_document(*d), golden);
        }
      } catch (const Error& err) {
        c.verdict = Verdict::Fail;
        c.detail = err.what();
      }
      r.report.results.push_back(std::move(c));
      continue;
    }
    const Step& step = e.step;
    StepOutcome out;
    try {
      out = apply_step(r.docs, step, opts.frame);
    } catch (const Error& err) {
      return stop(e, describe(step) + ": " + to_string(err.code()) + ": " + err.what());
    }
    ConditionReport rep;
    try {
      Universe u = universe_for(out.docs, opts.bounds, opts.budget);
      SignatureEnv env = induce_signatures(out.docs);
      rep = discharge(out.obligations, u, env);
      if (is_automaton_step(step.kind)) {
        const LifecycleDoc* after = lifecycle_of(out.docs, step.target);
        ConditionReport structure = check_lifecycle_structure(*after, env, u);
        for (auto& c : structure.results)
          if (c.verdict != Verdict::Pass) rep.results.push_back(std::move(c));
      }
    } catch (const Error& err) {
      return stop(e, describe(step) + ": " + to_string(err.code()) + ": " + err.what());
    }
    r.report.append(rep);
    if (!rep.passed()) return stop(e, describe(step) + ": obligations did not pass");
    if (is_automaton_step(step.kind)) {
      const LifecycleDoc* before = lifecycle_of(r.docs, step.target);
      const LifecycleDoc* after = lifecycle_of(out.docs, step.target);
      r.changes.push_back(LifecycleChange{describe(step), after->class_name, *before, *after, r.docs, out.docs});
    }
    r.docs = std::move(out.docs);
  }
  return r;
}

}  // namespace viewforge
