#include "viewforge/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "viewforge/checker.hpp"
#include "viewforge/error.hpp"
#include "viewforge/lang.hpp"
#include "viewforge/project.hpp"
#include "viewforge/refine.hpp"
#include "viewforge/sim.hpp"

namespace viewforge {

namespace {

namespace fs = std::filesystem;

int code_for(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitPass;
    case Verdict::Fail: return kExitFail;
    case Verdict::Budget: return kExitBudget;
  }
  return kExitFail;
}

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> budget_override() {
  const char* env = std::getenv("VIEWFORGE_BUDGET");
  if (!env || !*env) return std::nullopt;
  std::uint64_t v = 0;
  std::string_view s(env);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v == 0)
    throw Usage("VIEWFORGE_BUDGET must be a positive integer");
  return v;
}

std::optional<std::uint64_t> effective_budget(const Project& p) {
  if (auto b = budget_override()) return b;
  return p.manifest.budget;
}

Universe universe_of(const Project& p) {
  return universe_for(p.docs, p.manifest.bounds, effective_budget(p));
}

const LifecycleDoc& lifecycle_arg(const std::string& arg, const Project& p, std::optional<Document>& holder) {
  if (const Document* d = p.docs.find(arg)) {
    if (const auto* lc = std::get_if<LifecycleDoc>(d)) return *lc;
    throw Usage(arg + " is not a lifecycle document");
  }
  if (!fs::exists(arg)) throw Usage("no lifecycle document or file named " + arg);
  holder = parse_document(read_file(arg));
  if (const auto* lc = std::get_if<LifecycleDoc>(&*holder)) return *lc;
  throw Usage(arg + " does not contain a lifecycle document");
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Project, "cannot write " + p.string());
  f << text;
  if (!f) throw Error(ErrorCode::Project, "cannot write " + p.string());
}

// ---------------------------------------------------------- subcommands

int cmd_check(const std::string& manifest, bool json, std::string& report) {
  Project p = load_project(manifest);
  ConditionReport r = check_consistency(p.docs, universe_of(p));
  report = json ? r.to_json() : r.to_text();
  return code_for(r.overall());
}

int cmd_refine(const std::string& manifest, const std::string& script, const std::string& out_dir, bool json,
               std::string& report, std::ostream& err) {
  Project p = load_project(manifest);
  RefinementScript s = load_script(script);
  ReplayOptions o;
  o.bounds = p.manifest.bounds;
  o.budget = effective_budget(p);
  ReplayResult r = replay_script(p.docs, s, o);
  report = json ? r.report.to_json() : r.report.to_text();
  if (!r.completed) {
    err << "refine: " << r.error << "\n";
    Verdict v = r.report.overall();
    return v == Verdict::Pass ? kExitFail : code_for(v);
  }
  if (!r.report.passed()) return code_for(r.report.overall());
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ostringstream m;
    m << "name = " << (p.manifest.name.empty() ? std::string("refined") : p.manifest.name + "-refined") << "\n";
    m << "documents = ";
    bool first = true;
    for (const auto& d : r.docs.documents()) {
      const std::string file = name_of(d) + extension_for(kind_of(d));
      write_text(fs::path(out_dir) / file, render_document(d));
      m << (first ? "" : ", ") << file;
      first = false;
    }
    m << "\n";
    for (const auto& [cls, n] : p.manifest.bounds) m << "bound." << cls << " = " << n << "\n";
    if (p.manifest.budget) m << "budget = " << *p.manifest.budget << "\n";
    write_text(fs::path(out_dir) / "views.manifest", m.str());
  }
  return kExitPass;
}

int cmd_verify(const std::string& manifest, const std::string& old_arg, const std::string& new_arg,
               const std::string& old_manifest, std::size_t horizon, bool raw, bool one_self, std::string& report) {
  Project p = load_project(manifest);
  std::optional<Project> old_p;
  if (!old_manifest.empty()) old_p = load_project(old_manifest);
  std::optional<Document> old_holder, new_holder;
  const LifecycleDoc& old_lc = lifecycle_arg(old_arg, old_p ? *old_p : p, old_holder);
  const LifecycleDoc& new_lc = lifecycle_arg(new_arg, p, new_holder);
  if (old_lc.class_name != new_lc.class_name)
    throw Usage(old_lc.name + " and " + new_lc.name + " describe different classes");
  SignatureEnv env_new = induce_signatures(p.docs);
  SignatureEnv env_old = old_p ? induce_signatures(old_p->docs) : env_new;
  const ClassSignature* sig_new = env_new.find(new_lc.class_name);
  const ClassSignature* sig_old = env_old.find(old_lc.class_name);
  if (!sig_new || !sig_old) throw Usage("class " + new_lc.class_name + " is not declared");
  Universe u = universe_of(p);
  u.attach_signatures(env_new);
  OracleOptions opts;
  opts.horizon = horizon;
  opts.frame = !raw;
  opts.all_selves = !one_self;
  OracleResult r = oracle_refines(old_lc, new_lc, *sig_old, *sig_new, u, opts);
  report = r.to_text();
  return r.refines ? kExitPass : kExitFail;
}

struct SimulateArgs {
  std::string manifest;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_delay;
  bool exhaustive = false;
  std::size_t cap = kDefaultExhaustiveCap;
  bool json = false;
  bool check = false;
};

int cmd_simulate(const SimulateArgs& a, std::string& report, std::ostream& err) {
  Project p = load_project(a.manifest);
  Universe u = universe_of(p);
  ConditionReport consistency = check_consistency(p.docs, u);
  if (!consistency.passed()) {
    err << "simulate: " << a.manifest << " is not consistent\n" << consistency.to_text();
    return code_for(consistency.overall());
  }
  Scenario sc = load_scenario(a.scenario);
  if (a.seed) sc.seed = *a.seed;
  if (a.max_delay) {
    if (*a.max_delay < 0) throw Usage("--max-delay must not be negative");
    sc.max_delay = *a.max_delay;
  }
  Simulator sim(p.docs, u);
  std::vector<Trace> traces;
  if (a.exhaustive) traces = sim.exhaustive(sc, a.cap);
  else traces.push_back(sim.random(sc));
  std::ostringstream out;
  ConditionReport checks;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (a.exhaustive) out << "=== trace " << i + 1 << " of " << traces.size() << "\n";
    out << (a.json ? trace_json(traces[i]) : render_trace(traces[i]));
    if (a.check) {
      ConditionReport c = sim.check_trace(sc, traces[i]);
      out << c.to_text();
      checks.append(c);
    }
  }
  report = out.str();
  return a.check ? code_for(checks.overall()) : kExitPass;
}

int cmd_fmt(const std::string& path, bool check, bool in_place, std::string& report, std::ostream& err) {
  const std::string text = read_file(path);
  Document d = parse_document(text);
  const std::string formatted = render_document(d);
  if (check) {
    if (formatted != text) {
      err << "fmt: " << path << " is not in canonical form\n";
      return kExitFail;
    }
    return kExitPass;
  }
  if (in_place) {
    if (formatted != text) write_text(path, formatted);
    return kExitPass;
  }
  report = formatted;
  return kExitPass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks, refines and simulates view documents of object-oriented system models.", "viewforge"};
  app.require_subcommand(1);
  std::string output;
  bool json = false;

  auto* check = app.add_subcommand("check", "structural checks, context conditions and a witness system");
  std::string manifest;
  check->add_option("manifest", manifest, "project manifest")->required();
  check->add_flag("--json", json, "report as JSON");
  check->add_option("-o,--output", output, "write the report to a file");

  auto* refine = app.add_subcommand("refine", "replay a refinement script and discharge its obligations");
  std::string script, out_dir = "refined";
  refine->add_option("manifest", manifest, "project manifest")->required();
  refine->add_option("script", script, "refinement script")->required();
  refine->add_option("--out-dir", out_dir, "directory for the resulting documents (empty: do not write)");
  refine->add_flag("--json", json, "report as JSON");
  refine->add_option("-o,--output", output, "write the report to a file");

  auto* verify = app.add_subcommand("verify", "bounded trace inclusion of a new lifecycle in an old one");
  std::string old_lc, new_lc, old_manifest;
  std::size_t horizon = 6;
  bool raw = false, one_self = false;
  verify->add_option("manifest", manifest, "project manifest of the new lifecycle")->required();
  verify->add_option("old", old_lc, "old lifecycle: document name or file")->required();
  verify->add_option("new", new_lc, "new lifecycle: document name or file")->required();
  verify->add_option("--horizon", horizon, "trace length bound")->check(CLI::PositiveNumber);
  verify->add_option("--old-manifest", old_manifest, "project of the old lifecycle (default: the same project)");
  verify->add_flag("--raw", raw, "no implicit frame");
  verify->add_flag("--one-self", one_self, "explore only the first identifier of the class");
  verify->add_option("-o,--output", output, "write the report to a file");

  auto* simulate = app.add_subcommand("simulate", "run a scenario and print the trace");
  SimulateArgs sa;
  std::uint64_t seed = 0;
  int max_delay = 0;
  simulate->add_option("manifest", sa.manifest, "project manifest")->required();
  simulate->add_option("scenario", sa.scenario, "scenario file")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "random seed (default: the scenario's)");
  auto* ex_opt = simulate->add_flag("--exhaustive", sa.exhaustive, "all traces over every nondeterministic choice");
  seed_opt->excludes(ex_opt);
  auto* delay_opt = simulate->add_option("--max-delay", max_delay, "override the scenario's maximal delay");
  simulate->add_option("--cap", sa.cap, "run cap for --exhaustive")->check(CLI::PositiveNumber);
  simulate->add_flag("--check", sa.check, "append the trace checks; exit code follows them");
  simulate->add_flag("--json", json, "traces as JSON");
  simulate->add_option("-o,--output", output, "write the traces to a file");

  auto* fmt = app.add_subcommand("fmt", "print a document in canonical form");
  std::string doc;
  bool fmt_check = false, in_place = false;
  fmt->add_option("document", doc, "document file")->required();
  auto* check_opt = fmt->add_flag("--check", fmt_check, "exit 1 unless the file is already canonical");
  fmt->add_flag("-i,--in-place", in_place, "rewrite the file")->excludes(check_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  std::string report;
  int code = kExitUsage;
  try {
    if (*check) {
      code = cmd_check(manifest, json, report);
    } else if (*refine) {
      code = cmd_refine(manifest, script, out_dir, json, report, err);
    } else if (*verify) {
      code = cmd_verify(manifest, old_lc, new_lc, old_manifest, horizon, raw, one_self, report);
    } else if (*simulate) {
      if (*seed_opt) sa.seed = seed;
      if (*delay_opt) sa.max_delay = max_delay;
      sa.json = json;
      code = cmd_simulate(sa, report, err);
    } else if (*fmt) {
      code = cmd_fmt(doc, fmt_check, in_place, report, err);
    }
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::Project) return kExitUsage;
    if (e.code() == ErrorCode::CapExceeded) return kExitBudget;
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!output.empty()) {
    try {
      write_text(output, report);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kExitUsage;
    }
  } else {
    out << report;
  }
  return code;
}

}  // namespace viewforge
