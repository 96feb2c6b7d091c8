#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "viewforge/error.hpp"
#include "viewforge/system_model.hpp"

using namespace viewforge;

namespace {

TypeDocument corpus_types() {
  return std::get<TypeDocument>(parse_document(vftest::slurp(vftest::corpus("types.vtype"))));
}

Value cars(std::initializer_list<const char*> names) {
  std::vector<Value> v;
  for (const char* n : names) v.push_back(Value::atom(n));
  return Value::set(std::move(v));
}

ObjectState branch_state(Value available, Value branches) {
  ObjectState s;
  s.control = "Idle";
  s.liveness = Liveness::Active;
  s.valuation["available_cars"] = std::move(available);
  s.valuation["branches"] = std::move(branches);
  s.valuation["pick-up_rentals"] = Value::set({});
  s.valuation["town"] = Value::atom("hamburg");
  return s;
}

Message pick_up(const std::string& to) {
  return Message{to, kExternal, "pick-up", {Value::integer(3), Value::atom("hamburg")}};
}

struct PickUp {
  Project p = vftest::project("pickup");
  SignatureEnv env = induce_signatures(p.docs);
  Universe u = with_signatures(project_universe(p), env);
  const LifecycleDoc& lc = *p.docs.lifecycle_for("Branch");
};

}  // namespace

TEST(Universe, EnumerationAndRangeOrder) {
  Universe u = build_universe({corpus_types()}, {{"Branch", 2}, {"Rental", 2}});
  const auto& car = u.carrier(SortExpr::named("Car"));
  ASSERT_EQ(car.size(), 3u);
  EXPECT_EQ(car[0].as_atom(), "c1");
  EXPECT_EQ(car[2].as_atom(), "c3");
  const auto& date = u.carrier(SortExpr::named("Date"));
  ASSERT_EQ(date.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(date[i].as_int(), i);
}

TEST(Universe, PowerSetInBinaryCountingOrder) {
  Universe u = build_universe({corpus_types()}, {{"Branch", 2}, {"Rental", 2}});
  const auto& sets = u.carrier(SortExpr::set_of("Car"));
  const char* base[] = {"c1", "c2", "c3"};
  ASSERT_EQ(sets.size(), 8u);
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<Value> elems;
    for (unsigned i = 0; i < 3; ++i)
      if (mask & (1u << i)) elems.push_back(Value::atom(base[i]));
    EXPECT_TRUE(sets[mask] == Value::set(elems)) << mask;
  }
}

TEST(Universe, PoolsAreDisjoint) {
  Universe u = build_universe({corpus_types()}, {{"Branch", 2}, {"Rental", 2}});
  ASSERT_EQ(u.pool("Branch").size(), 2u);
  EXPECT_EQ(u.pool("Branch")[1].as_atom(), "Branch#1");
  for (const auto& b : u.pool("Branch"))
    for (const auto& r : u.pool("Rental")) EXPECT_FALSE(b == r);
  EXPECT_EQ(u.class_of("Rental#1"), "Rental");
  EXPECT_EQ(u.class_of(kExternal), "");
}

TEST(Universe, Errors) {
  try {
    build_universe({corpus_types()}, {{"Branch", 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroBound);
  }
  Universe u = build_universe({corpus_types()}, {{"Branch", 1}});
  try {
    u.carrier(SortExpr::named("Truck"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSort);
  }
}

TEST(Universe, InputCarrierSize) {
  Project p = vftest::project("final");
  SignatureEnv env = induce_signatures(p.docs);
  Universe u = with_signatures(project_universe(p), env);
  // senders: 2 branches, 2 rentals, EXTERNAL
  const std::size_t senders = 5, receivers = 2;
  std::size_t per = 0;
  for (const auto& m : env.at("Branch").methods) {
    std::size_t args = 1;
    for (const auto& prm : m.params) args *= u.carrier(prm.sort).size();
    per += senders * args;
  }
  EXPECT_EQ(per, 5u * (6 + 6 + 8 + 6));
  EXPECT_EQ(u.carrier(SortExpr::input_of("Branch")).size(), receivers * per);
}

TEST(Signatures, RolenamesInduceAttributes) {
  Project p = vftest::project("pickup");
  SignatureEnv env = induce_signatures(p.docs);
  const AttributeDecl* pub = env.at("Rental").find_attribute("pick-up_branch");
  ASSERT_TRUE(pub);
  EXPECT_TRUE(pub->sort == SortExpr::named("Branch"));
  const AttributeDecl* rentals = env.at("Branch").find_attribute("pick-up_rentals");
  ASSERT_TRUE(rentals);
  EXPECT_TRUE(rentals->sort == SortExpr::set_of("Rental"));
}

TEST(Signatures, ClassesOnlyAndUnnamedRoles) {
  auto om = std::get<ObjectModelDoc>(parse_document(
      "objectmodel M :\n  classes Branch, Rental ;\n  relationship Branch 1 -- Rental 1 ;\nendobjectmodel\n"));
  auto cd = std::get<ClassDescriptionDoc>(parse_document(
      "classdocument C :\n  class Branch ;\n  attributes\n    town : Town ;\nendclassdocument\n"));
  SignatureEnv env = induce_signatures({&om}, {&cd});
  EXPECT_EQ(env.at("Branch").attributes.size(), 1u);
  EXPECT_TRUE(env.at("Rental").attributes.empty());
}

TEST(Signatures, CollisionIsAnError) {
  auto om = std::get<ObjectModelDoc>(parse_document(
      "objectmodel M :\n  classes Branch, Rental ;\n  relationship Branch home 1 -- Rental * ;\nendobjectmodel\n"));
  auto cd = std::get<ClassDescriptionDoc>(parse_document(
      "classdocument C :\n  class Rental ;\n  attributes\n    home : Town ;\nendclassdocument\n"));
  try {
    induce_signatures({&om}, {&cd});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AttributeCollision);
  }
}

TEST(ObjectStep, AvailableCarIsRented) {
  PickUp f;
  auto results = object_step(f.lc, branch_state(cars({"c1"}), Value::set({Value::atom("Branch#0")})), "Branch#0",
                             pick_up("Branch#0"), f.u, f.env);
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_EQ(r.transition, "pick-up-ok");
    EXPECT_TRUE(r.next.valuation.at("available_cars") == Value::set({}));
    ASSERT_EQ(r.outputs.size(), 2u);
    EXPECT_EQ(r.outputs[0].name, "create");
    EXPECT_EQ(r.outputs[1].name, "ack");
    EXPECT_EQ(r.outputs[1].receiver, kExternal);
    EXPECT_TRUE(set_contains(r.next.valuation.at("pick-up_rentals"), Value::atom(r.outputs[0].receiver)));
  }
}

TEST(ObjectStep, NoCarMeansDeny) {
  PickUp f;
  auto results = object_step(f.lc, branch_state(Value::set({}), Value::set({Value::atom("Branch#0")})), "Branch#0",
                             pick_up("Branch#0"), f.u, f.env);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].transition, "pick-up-deny");
  ASSERT_EQ(results[0].outputs.size(), 1u);
  EXPECT_EQ(results[0].outputs[0].name, "deny");
}

TEST(ObjectStep, SuccessorCountByHand) {
  PickUp f;
  Stepper s(f.lc, f.env.at("Branch"), f.u);
  ObjectState st = branch_state(cars({"c1", "c2"}), Value::set({Value::atom("Branch#0"), Value::atom("Branch#1")}));
  // c: 2 cars, rb: 2 branches, r: 2 rental identifiers
  EXPECT_EQ(s.step(st, "Branch#0", pick_up("Branch#0")).size(), 8u);
  // a fixed fresh identifier leaves c and rb
  EXPECT_EQ(s.step(st, "Branch#0", pick_up("Branch#0"), {{"Rental", "Rental#1"}}).size(), 4u);
}

TEST(ObjectStep, NoTransitionsMeansNoSuccessor) {
  PickUp f;
  LifecycleDoc empty = f.lc;
  empty.transitions.clear();
  EXPECT_TRUE(object_step(empty, branch_state(cars({"c1"}), Value::set({})), "Branch#0", pick_up("Branch#0"), f.u,
                          f.env)
                  .empty());
}

TEST(Stepper, EnabledAndAcceptsAgreeWithStep) {
  PickUp f;
  Stepper s(f.lc, f.env.at("Branch"), f.u);
  std::vector<ObjectState> states = {
      branch_state(Value::set({}), Value::set({})),
      branch_state(cars({"c2"}), Value::set({Value::atom("Branch#1")})),
      branch_state(cars({"c1", "c3"}), Value::set({})),
  };
  for (const auto& st : states) {
    for (const auto& in : f.u.carrier(SortExpr::input_of("Branch"))) {
      if (in.as_message().receiver != "Branch#0") continue;
      auto results = s.step(st, "Branch#0", in.as_message());
      EXPECT_EQ(s.enabled(st, "Branch#0", in.as_message()), !results.empty());
      for (const auto& r : results) {
        auto names = s.accepts(st, "Branch#0", in.as_message(), r.outputs, r.next);
        EXPECT_NE(std::find(names.begin(), names.end(), r.transition), names.end());
      }
    }
  }
  ObjectState st = states[1];
  ObjectState wrong = st;
  wrong.valuation["town"] = Value::atom("munich");
  auto results = s.step(st, "Branch#0", pick_up("Branch#0"));
  ASSERT_FALSE(results.empty());
  wrong.valuation["available_cars"] = results[0].next.valuation.at("available_cars");
  wrong.valuation["pick-up_rentals"] = results[0].next.valuation.at("pick-up_rentals");
  EXPECT_TRUE(s.accepts(st, "Branch#0", pick_up("Branch#0"), results[0].outputs, wrong).empty());
}

TEST(Medium, ZeroDelayDeliversNextTick) {
  MediumState m;
  m.max_delay = 0;
  m.enqueue(Message{"Rental#0", "Branch#0", "create", {}}, 0);
  MediumStep same = medium_step(m, 0, [] { return false; });
  EXPECT_TRUE(same.deliveries.empty());
  MediumStep next = medium_step(m, 1, [] { return false; });
  ASSERT_EQ(next.deliveries.size(), 1u);
  EXPECT_TRUE(next.deliveries[0].forced);
  EXPECT_EQ(next.next.size(), 0u);
}

TEST(Medium, PairOrderHoldsForAnySeed) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    MediumState m;
    m.max_delay = 2;
    m.enqueue(Message{"Rental#0", "Branch#0", "A", {}}, 0);
    m.enqueue(Message{"Rental#0", "Branch#0", "B", {}}, 0);
    std::vector<std::string> order;
    for (std::int64_t t = 1; t < 10 && m.size() > 0; ++t) {
      MediumStep s = medium_step(m, t, [&] { return (rng() & 1) != 0; });
      for (const auto& d : s.deliveries) order.push_back(d.env.msg.name);
      m = s.next;
    }
    ASSERT_EQ(order, (std::vector<std::string>{"A", "B"})) << seed;
  }
}

TEST(Medium, RandomizedConservation) {
  std::mt19937_64 rng(42);
  const std::vector<std::string> ids = {"Branch#0", "Branch#1", "Rental#0", "Rental#1", kExternal};
  MediumState m;
  m.max_delay = 3;
  std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> sent, got;
  std::map<std::uint64_t, std::int64_t> sent_at;
  std::size_t total = 0, delivered = 0;
  std::int64_t t = 0;
  for (; total < 10000 || m.size() > 0; ++t) {
    MediumStep s = medium_step(m, t, [&] { return (rng() & 1) != 0; });
    std::set<std::string> receivers;
    for (const auto& d : s.deliveries) {
      got[{d.env.msg.sender, d.env.msg.receiver}].push_back(d.env.uid);
      if (d.env.msg.receiver != kExternal) EXPECT_TRUE(receivers.insert(d.env.msg.receiver).second);
      ++delivered;
    }
    m = s.next;
    for (int k = 0; k < 3 && total < 10000; ++k, ++total) {
      const auto& from = ids[rng() % ids.size()];
      const auto& to = ids[rng() % ids.size()];
      auto uid = m.enqueue(Message{to, from, "m", {}}, t);
      sent[{from, to}].push_back(uid);
      sent_at[uid] = t;
    }
  }
  EXPECT_EQ(delivered, total);
  EXPECT_EQ(got, sent);
}
