#include <gtest/gtest.h>

#include "oracles.hpp"
#include "viewforge/error.hpp"
#include "viewforge/system_model.hpp"

using namespace viewforge;
namespace fs = std::filesystem;

TEST(Checker, CorpusProjectsAreConsistent) {
  for (const char* name : {"init", "pickup", "final"}) {
    Project p = vftest::project(name);
    ConditionReport r = check_consistency(p.docs, project_universe(p));
    EXPECT_EQ(r.overall(), Verdict::Pass) << name << "\n" << r.to_text();
    EXPECT_GT(r.count(Verdict::Pass), 0u);
  }
}

TEST(Checker, SatisfiabilityWitnessesHold) {
  Project p = vftest::project("final");
  SignatureEnv env = induce_signatures(p.docs);
  Universe u = with_signatures(project_universe(p), env);
  for (const LifecycleDoc* lc : p.docs.lifecycles()) {
    ConditionReport r = check_automaton(*lc, env, u);
    std::size_t seen = 0;
    for (const auto& c : r.results) {
      if (c.check != "condition-1") continue;
      ++seen;
      ASSERT_TRUE(c.binding);
      const StateDef* s = lc->find_state(c.locus.substr(c.locus.find('/') + 1));
      ASSERT_TRUE(s) << c.locus;
      EXPECT_TRUE(eval(s->predicate, vftest::detail::with_self(*c.binding, u, lc->class_name), u)) << c.locus;
    }
    EXPECT_EQ(seen, lc->states.size());
  }
}

TEST(Checker, WitnessSystemActivatesLifecycleClasses) {
  Project p = vftest::project("final");
  Universe u = with_signatures(project_universe(p), induce_signatures(p.docs));
  auto w = witness_system(p.docs, u);
  ASSERT_TRUE(std::holds_alternative<SystemConfig>(w));
  const auto& cfg = std::get<SystemConfig>(w);
  for (const auto& [id, obj] : cfg.objects) {
    EXPECT_EQ(obj.liveness, Liveness::Active) << id;
    EXPECT_TRUE(p.docs.lifecycle_for(u.class_of(id))->is_initial(obj.control)) << id;
  }
}

TEST(Checker, ReportFormats) {
  Project p = vftest::project("pickup");
  ConditionReport r = check_consistency(p.docs, project_universe(p));
  std::string text = r.to_text();
  EXPECT_EQ(text.rfind("PASS ", 0), 0u);
  EXPECT_NE(r.to_json().find("\"verdict\": \"PASS\""), std::string::npos);
}

class FaultSuite : public ::testing::TestWithParam<fs::path> {};

TEST_P(FaultSuite, ReportsTheSeededFault) {
  const fs::path dir = GetParam();
  Project p = load_project(dir / "views.manifest");
  ConditionReport report = check_consistency(p.docs, project_universe(p));
  EXPECT_EQ(report.overall(), Verdict::Fail);
  EXPECT_EQ(vftest::recheck_fault(p, report, vftest::read_expected(dir)), "") << report.to_text();
}

INSTANTIATE_TEST_SUITE_P(Corpus, FaultSuite, ::testing::ValuesIn(vftest::fault_dirs()),
                         [](const auto& info) {
                           std::string s = info.param.filename().string();
                           for (auto& ch : s)
                             if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
                           return s;
                         });

TEST(Checker, CollisionFromInducedSignatures) {
  Project p = load_project(vftest::corpus("faults/induced-collision/views.manifest"));
  EXPECT_THROW(induce_signatures(p.docs), Error);
}

TEST(Checker, StructureFailureSkipsConditions) {
  Project p = load_project(vftest::corpus("faults/unknown-input/views.manifest"));
  ConditionReport r = check_consistency(p.docs, project_universe(p));
  for (const auto& c : r.results) EXPECT_NE(c.check.rfind("condition-", 0), 0u) << c.check;
}
