#include <cctype>
#include <charconv>
#include <sstream>

#include "viewforge/error.hpp"
#include "viewforge/lang.hpp"
#include "viewforge/sim.hpp"

namespace viewforge {

namespace {

struct Entry {
  int line = 0;
  std::string text;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(int line, const std::string& expected, const std::string& msg) {
  throw ParseError(ErrorCode::Scenario, line, 1, {expected}, msg);
}

std::vector<Entry> entries_of(std::string_view text) {
  std::vector<Entry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto pos = line.find("//");
    if (pos != std::string::npos) line.resize(pos);
    if (trim(line).empty()) continue;
    if (std::isspace(static_cast<unsigned char>(line[0]))) {
      if (out.empty()) fail(n, "entry", "continuation line without an entry");
      out.back().text += " " + trim(line);
    } else {
      out.push_back(Entry{n, trim(line)});
    }
  }
  return out;
}

std::string word(std::string& rest, int line, const char* what) {
  std::string r = trim(rest);
  std::size_t end = 0;
  while (end < r.size() && !std::isspace(static_cast<unsigned char>(r[end])) && r[end] != '{' && r[end] != '(' &&
         r[end] != '=')
    ++end;
  if (end == 0) fail(line, what, std::string("missing ") + what);
  std::string w = r.substr(0, end);
  rest = r.substr(end);
  return w;
}

/// Splits at top-level commas.
std::vector<std::string> split_list(const std::string& text, int line) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '{' || c == '(' || c == '[') ++depth;
    if (c == '}' || c == ')' || c == ']') --depth;
    if (depth < 0) fail(line, "balanced brackets", "unbalanced brackets");
    if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) fail(line, "balanced brackets", "unbalanced brackets");
  if (!trim(cur).empty() || !parts.empty()) parts.push_back(trim(cur));
  for (const auto& p : parts)
    if (p.empty()) fail(line, "item", "empty list item");
  return parts;
}

/// Text between the outermost `open` at the start of `rest` and its match.
std::string enclosed(std::string& rest, char open, char close, int line) {
  std::string r = trim(rest);
  if (r.empty() || r[0] != open) fail(line, std::string(1, open), std::string("expected '") + open + "'");
  int depth = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == open) ++depth;
    if (r[i] == close && --depth == 0) {
      rest = r.substr(i + 1);
      return r.substr(1, i - 1);
    }
  }
  fail(line, std::string(1, close), std::string("missing '") + close + "'");
}

template <typename T>
T number(const std::string& s, int line, const char* what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(line, what, "expected " + std::string(what) + ", got '" + s + "'");
  return v;
}

Term term_at(const std::string& text, int line) {
  try {
    return parse_term(text);
  } catch (const ParseError& e) {
    throw ParseError("scenario line " + std::to_string(line), e);
  }
}

void parse_object(Scenario& sc, std::string rest, int line) {
  InitialObject o;
  o.line = line;
  o.id = word(rest, line, "identifier");
  o.control = word(rest, line, "state name");
  if (!trim(rest).empty()) {
    std::string body = enclosed(rest, '{', '}', line);
    if (!trim(rest).empty()) fail(line, "end of line", "unexpected text after '}'");
    for (const auto& item : split_list(body, line)) {
      auto eq = item.find('=');
      if (eq == std::string::npos) fail(line, "=", "expected 'attribute = value'");
      std::string name = trim(item.substr(0, eq));
      if (name.empty()) fail(line, "attribute", "missing attribute name");
      o.attributes.emplace_back(name, term_at(item.substr(eq + 1), line));
    }
  }
  sc.objects.push_back(std::move(o));
}

void parse_stimulus(Scenario& sc, std::string rest, int line) {
  Stimulus s;
  s.line = line;
  s.tick = number<std::int64_t>(word(rest, line, "tick"), line, "tick");
  s.receiver = word(rest, line, "receiver");
  s.method = word(rest, line, "method");
  std::string args = enclosed(rest, '(', ')', line);
  if (!trim(rest).empty()) fail(line, "end of line", "unexpected text after ')'");
  for (const auto& a : split_list(args, line)) s.args.push_back(term_at(a, line));
  sc.stimuli.push_back(std::move(s));
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  for (const auto& e : entries_of(text)) {
    std::string rest = e.text;
    const std::string key = word(rest, e.line, "entry");
    if (key == "object") {
      parse_object(sc, rest, e.line);
      continue;
    }
    if (key == "stimulus") {
      parse_stimulus(sc, rest, e.line);
      continue;
    }
    std::string r = trim(rest);
    if (r.empty() || r[0] != '=')
      fail(e.line, "=", "expected 'object', 'stimulus' or 'key = value', got '" + key + "'");
    const std::string value = trim(r.substr(1));
    if (key == "horizon") sc.horizon = number<std::int64_t>(value, e.line, "integer");
    else if (key == "seed") sc.seed = number<std::uint64_t>(value, e.line, "integer");
    else if (key == "max_delay") sc.max_delay = number<int>(value, e.line, "integer");
    else if (key == "drop_on_stall") {
      if (value != "true" && value != "false") fail(e.line, "true or false", "drop_on_stall takes true or false");
      sc.drop_on_stall = value == "true";
    } else {
      fail(e.line, "horizon, seed, max_delay or drop_on_stall", "unknown key '" + key + "'");
    }
  }
  if (sc.horizon < 1) throw Error(ErrorCode::Scenario, "horizon must be at least 1");
  if (sc.max_delay < 0) throw Error(ErrorCode::Scenario, "max_delay must not be negative");
  for (const auto& s : sc.stimuli)
    if (s.tick < 0 || s.tick > sc.horizon)
      throw Error(ErrorCode::Scenario, "stimulus at line " + std::to_string(s.line) + " lies outside 0.." +
                                           std::to_string(sc.horizon));
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_scenario(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

}  // namespace viewforge
