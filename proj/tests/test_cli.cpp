#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "viewforge/cli.hpp"

using namespace viewforge;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "viewforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string c(const std::string& rel) { return vftest::corpus(rel).string(); }

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("viewforge-cli-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct BudgetEnv {
  explicit BudgetEnv(const char* v) { setenv("VIEWFORGE_BUDGET", v, 1); }
  ~BudgetEnv() { unsetenv("VIEWFORGE_BUDGET"); }
};

}  // namespace

TEST(Cli, CheckPassesOnCorpus) {
  CliRun r = cli({"check", c("final/views.manifest")});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("PASS condition-1"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, CheckFailsOnFault) {
  CliRun r = cli({"check", c("faults/unsatisfiable-state/views.manifest")});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("FAIL condition-1 FaultRentalLifecycle/Returned"), std::string::npos);
}

TEST(Cli, CheckJson) {
  CliRun r = cli({"check", c("pickup/views.manifest"), "--json"});
  EXPECT_EQ(r.code, kExitPass);
  ASSERT_FALSE(r.out.empty());
  EXPECT_EQ(r.out.front(), '[');
}

TEST(Cli, UsageErrorsWriteNothing) {
  fs::path dir = scratch("usage");
  CliRun none = cli({});
  EXPECT_EQ(none.code, kExitUsage);
  CliRun bad = cli({"frobnicate"});
  EXPECT_EQ(bad.code, kExitUsage);
  CliRun missing = cli({"check", (dir / "nope.manifest").string(), "-o", (dir / "report.txt").string()});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_TRUE(missing.out.empty());
  EXPECT_FALSE(missing.err.empty());
  EXPECT_FALSE(fs::exists(dir / "report.txt"));
}

TEST(Cli, BudgetExitCode) {
  BudgetEnv env("10");
  CliRun r = cli({"check", c("final/views.manifest")});
  EXPECT_EQ(r.code, kExitBudget) << r.out << r.err;
}

TEST(Cli, BadBudgetIsAUsageError) {
  BudgetEnv env("lots");
  EXPECT_EQ(cli({"check", c("final/views.manifest")}).code, kExitUsage);
}

TEST(Cli, RefineWritesGoldenDocuments) {
  fs::path dir = scratch("refine");
  CliRun r = cli({"refine", c("init/views.manifest"), c("scripts/init-to-pickup.steps"), "--out-dir", dir.string()});
  ASSERT_EQ(r.code, kExitPass) << r.out << r.err;
  const std::pair<const char*, const char*> files[] = {
      {"Pick-UpBranch.vclass", "pickup/branch.vclass"},
      {"Pick-UpRental.vclass", "pickup/rental.vclass"},
      {"Pick-UpObjectModel.vobj", "pickup/objects.vobj"},
      {"Pick-UpBranchLifecycle.vlife", "pickup/branch.vlife"},
      {"Pick-UpRentalLifecycle.vlife", "pickup/rental.vlife"},
  };
  for (const auto& [out, golden] : files)
    EXPECT_EQ(vftest::slurp(dir / out), vftest::slurp(vftest::corpus(golden))) << out;
  ASSERT_TRUE(fs::exists(dir / "views.manifest"));
  CliRun again = cli({"check", (dir / "views.manifest").string()});
  EXPECT_EQ(again.code, kExitPass) << again.out << again.err;
}

TEST(Cli, VerifyNegativeChange) {
  CliRun r = cli({"verify", c("pickup/views.manifest"), "Pick-UpBranchLifecycle", c("negatives/weak-post.vlife")});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("NOT-REFINES"), std::string::npos);
}

TEST(Cli, VerifyIdentity) {
  CliRun r = cli({"verify", c("pickup/views.manifest"), "Pick-UpBranchLifecycle", c("pickup/branch.vlife"),
               "--horizon", "2", "--one-self"});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
}

TEST(Cli, SimulateIsByteIdentical) {
  std::vector<std::string> args = {"simulate", c("final/views.manifest"), c("scenarios/return.scn"), "--seed", "7"};
  CliRun a = cli(args), b = cli(args);
  EXPECT_EQ(a.code, kExitPass) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, vftest::slurp(vftest::corpus("scenarios/return.seed7.trace")));
}

TEST(Cli, SimulateCheckAndExhaustive) {
  CliRun r = cli({"simulate", c("final/views.manifest"), c("scenarios/pickup.scn"), "--check"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("PASS conservation"), std::string::npos);
  CliRun ex = cli({"simulate", c("final/views.manifest"), c("scenarios/pickup.scn"), "--exhaustive"});
  EXPECT_EQ(ex.code, kExitPass) << ex.err;
  EXPECT_NE(ex.out.find("=== trace 1 of 1"), std::string::npos);
}

TEST(Cli, SimulateRefusesInconsistentProject) {
  CliRun r = cli({"simulate", c("faults/two-true-states/views.manifest"), c("scenarios/pickup.scn")});
  EXPECT_EQ(r.code, kExitFail);
}

TEST(Cli, FmtIsIdempotent) {
  fs::path dir = scratch("fmt");
  fs::path f = dir / "branch.vclass";
  {
    std::ofstream o(f);
    o << "classdocument C :\n  class Branch ;\n  attributes\n    town : Town ;\n    available_cars : Set Car ;\n"
         "endclassdocument\n";
  }
  EXPECT_EQ(cli({"fmt", f.string(), "--check"}).code, kExitFail);
  EXPECT_EQ(cli({"fmt", f.string(), "-i"}).code, kExitPass);
  const std::string once = vftest::slurp(f);
  EXPECT_EQ(cli({"fmt", f.string(), "--check"}).code, kExitPass);
  EXPECT_EQ(cli({"fmt", f.string(), "-i"}).code, kExitPass);
  EXPECT_EQ(vftest::slurp(f), once);
  EXPECT_EQ(cli({"fmt", f.string()}).out, once);
}

TEST(Cli, FmtSyntaxErrorExitsOne) {
  fs::path dir = scratch("fmt-bad");
  fs::path f = dir / "bad.vtype";
  {
    std::ofstream o(f);
    o << "typedocument T :\n  sort Car = { c1 c2 } ;\nendtypedocument\n";
  }
  CliRun r = cli({"fmt", f.string()});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.err.find("line 2, column 19"), std::string::npos) << r.err;
}
