#include <doctest.h>

#include <random>

#include "dco/enforcement.hpp"
#include "support/fixtures.hpp"
#include "support/generator.hpp"

using namespace dco;
using namespace dco::fixtures;

namespace {

const Limits kLimits{};

std::vector<DeviationPoint> points_for(const Scenario& s) {
  ScenarioAnalysis ctx(s, kLimits);
  return deviation_points(ctx, unintended_traces(ctx),
                          locally_uncheckable_traces(ctx));
}

}  // namespace

TEST_CASE("payment deviation points name the missing validation") {
  auto points = points_for(pay_scenario());
  REQUIRE(points.size() == 4);
  const DeviationPoint& first = points[0];
  CHECK(first.kind == DeviationKind::Controllability);
  CHECK(first.offending == rcv("m3", "L3"));
  CHECK(!first.premature_end);
  CHECK(std::find(first.missing.begin(), first.missing.end(),
                  rcv("m2", "L3")) != first.missing.end());
  CHECK(std::find(first.missing.begin(), first.missing.end(),
                  snd("m2", "L1")) != first.missing.end());
  // The reception dominates the emission, so only it anchors candidates.
  CHECK(first.maximal_missing == std::vector<Event>{rcv("m2", "L3")});
}

TEST_CASE("notification deviation point is the lost send") {
  auto points = points_for(notify_scenario());
  REQUIRE(points.size() == 1);
  CHECK(points[0].kind == DeviationKind::Observability);
  CHECK(points[0].premature_end);
  CHECK(points[0].offending == snd("m2", "L2"));
  CHECK(points[0].missing == std::vector<Event>{rcv("m2", "L1")});
}

TEST_CASE("no witnesses produce no deviation points") {
  CHECK(points_for(single_scenario()).empty());
}

TEST_CASE("payment candidates start with the reference-validation hint") {
  auto pool = candidate_coordinations(pay_scenario(),
                                      points_for(pay_scenario()));
  REQUIRE(!pool.empty());
  CHECK(pool[0].from == "L3");
  CHECK(pool[0].to == "L2");
  CHECK(pool[0].after == rcv("m2", "L3"));
  REQUIRE(pool[0].before.has_value());
  CHECK(*pool[0].before == snd("m3", "L2"));
}

TEST_CASE("notification candidates start with the acknowledgment") {
  auto pool = candidate_coordinations(notify_scenario(),
                                      points_for(notify_scenario()));
  REQUIRE(!pool.empty());
  CHECK(pool[0].from == "L1");
  CHECK(pool[0].to == "L2");
  CHECK(pool[0].after == rcv("m2", "L1"));
  CHECK(!pool[0].before.has_value());
  CHECK(render_coordination(pool[0]) ==
        "L1 -> L2 after ?m2@L1 before end-of-L2");
}

TEST_CASE("verify accepts the payment fix and rejects the empty set") {
  CoordinationMessage fix{"Ctrl1", "L3", rcv("m2", "L3"), "L2",
                          snd("m3", "L2")};
  CHECK(verify_candidate_set(pay_scenario(), {fix}, kLimits));
  CHECK(!verify_candidate_set(pay_scenario(), {}, kLimits));
}

TEST_CASE("verify accepts the notification acknowledgment") {
  CoordinationMessage ack{"Ctrl1", "L1", rcv("m2", "L1"), "L2", std::nullopt};
  CHECK(verify_candidate_set(notify_scenario(), {ack}, kLimits));
}

TEST_CASE("insert places the payment coordination between m2 and m3") {
  CoordinationMessage fix{"Ctrl1", "L3", rcv("m2", "L3"), "L2",
                          snd("m3", "L2")};
  InsertResult result = insert(pay_scenario(), {fix});
  REQUIRE(std::holds_alternative<Scenario>(result));
  const Scenario& refined = std::get<Scenario>(result);
  CHECK(message_walk_order(refined.body) ==
        std::vector<std::string>{"m1", "m2", "Ctrl1", "m3"});

  auto locals = valid_local_traces(refined, "L2", kLimits);
  REQUIRE(locals.size() == 1);
  CHECK(render_trace(locals[0]) == "[?m1@L2, ?Ctrl1@L2, !m3@L2]");
  CHECK(erase_coordination(refined) == pay_scenario());
}

TEST_CASE("insert appends the acknowledgment inside the option") {
  CoordinationMessage ack{"Ctrl1", "L1", rcv("m2", "L1"), "L2", std::nullopt};
  InsertResult result = insert(notify_scenario(), {ack});
  REQUIRE(std::holds_alternative<Scenario>(result));
  const Scenario& refined = std::get<Scenario>(result);
  auto locals = valid_local_traces(refined, "L2", kLimits);
  REQUIRE(locals.size() == 2);
  CHECK(render_trace(locals[0]) == "[?m1@L2]");
  CHECK(render_trace(locals[1]) == "[?m1@L2, !m2@L2, ?Ctrl1@L2]");
  CHECK(erase_coordination(refined) == notify_scenario());
}

TEST_CASE("insert with no messages is the identity") {
  InsertResult result = insert(pay_scenario(), {});
  REQUIRE(std::holds_alternative<Scenario>(result));
  CHECK(std::get<Scenario>(result) == pay_scenario());
}

TEST_CASE("insert error paths") {
  SUBCASE("unknown anchor") {
    CoordinationMessage cm{"Ctrl1", "L3", rcv("zz", "L3"), "L2",
                           snd("m3", "L2")};
    InsertResult r = insert(pay_scenario(), {cm});
    REQUIRE(std::holds_alternative<InsertError>(r));
    CHECK(std::get<InsertError>(r).kind == InsertErrorKind::AnchorNotFound);
  }
  SUBCASE("before anchor precedes after anchor") {
    CoordinationMessage cm{"Ctrl1", "L2", snd("m3", "L2"), "L3",
                           rcv("m2", "L3")};
    InsertResult r = insert(pay_scenario(), {cm});
    REQUIRE(std::holds_alternative<InsertError>(r));
    CHECK(std::get<InsertError>(r).kind == InsertErrorKind::CycleIntroduced);
  }
  SUBCASE("anchors in different operands") {
    Scenario s = make_scenario("operands");
    s.lifelines = {Lifeline{"A", ""}, Lifeline{"B", ""}};
    s.messages = {MessageDecl{"a", "A", "B", false},
                  MessageDecl{"b", "B", "A", false}};
    AltNode alt;
    alt.operands.push_back({Fragment{MsgNode{"a"}}});
    alt.operands.push_back({Fragment{MsgNode{"b"}}});
    s.body = Fragment{SeqNode{{Fragment{std::move(alt)}}}};
    REQUIRE(validate_scenario(s).empty());

    CoordinationMessage cm{"Ctrl1", "A", snd("a", "A"), "B", snd("b", "B")};
    InsertResult r = insert(s, {cm});
    REQUIRE(std::holds_alternative<InsertError>(r));
    CHECK(std::get<InsertError>(r).kind == InsertErrorKind::DifferentOperands);
  }
}

TEST_CASE("synthesis fixes the payment race with one L3 -> L2 message") {
  SynthesisResult result =
      synthesize_minimal_coordination(pay_scenario(), kLimits);
  REQUIRE(result.status == SynthesisResult::Status::Synthesized);
  REQUIRE(result.refined->added.size() == 1);
  const CoordinationMessage& cm = result.refined->added[0];
  CHECK(render_coordination(cm) ==
        "Ctrl1: L3 -> L2 after ?m2@L3 before !m3@L2");
  CHECK(erase_coordination(result.refined->scenario) == pay_scenario());
}

TEST_CASE("synthesis acknowledges the lost notification") {
  SynthesisResult result =
      synthesize_minimal_coordination(notify_scenario(), kLimits);
  REQUIRE(result.status == SynthesisResult::Status::Synthesized);
  REQUIRE(result.refined->added.size() == 1);
  const CoordinationMessage& cm = result.refined->added[0];
  CHECK(cm.from == "L1");
  CHECK(cm.to == "L2");
  CHECK(cm.after == rcv("m2", "L1"));
  CHECK(!cm.before.has_value());
  CHECK(verify_candidate_set(notify_scenario(), result.refined->added,
                             kLimits));
}

TEST_CASE("satisfied scenarios need no synthesis") {
  CHECK(synthesize_minimal_coordination(single_scenario(), kLimits).status ==
        SynthesisResult::Status::AlreadySatisfied);
  CHECK(synthesize_minimal_coordination(empty_scenario(), kLimits).status ==
        SynthesisResult::Status::AlreadySatisfied);
}

TEST_CASE("refined valid traces honor the ordering-constraint reading") {
  SynthesisResult result =
      synthesize_minimal_coordination(pay_scenario(), kLimits);
  REQUIRE(result.status == SynthesisResult::Status::Synthesized);
  const Scenario& refined = result.refined->scenario;
  const CoordinationMessage& cm = result.refined->added[0];
  for (const auto& t : valid_global_traces(refined, kLimits)) {
    auto after_at = std::find(t.begin(), t.end(), cm.after);
    auto before_at = std::find(t.begin(), t.end(), *cm.before);
    REQUIRE(after_at != t.end());
    REQUIRE(before_at != t.end());
    CHECK(after_at < before_at);
  }
}

TEST_CASE("synthesis on random scenarios returns sound minimal sets") {
  std::mt19937 rng(8001);
  int synthesized = 0;
  for (int round = 0; round < 12; ++round) {
    Scenario s = testgen::random_scenario(rng);
    SynthesisResult result;
    try {
      result = synthesize_minimal_coordination(s, kLimits, 2);
    } catch (const BudgetExceeded&) {
      continue;
    }
    if (result.status != SynthesisResult::Status::Synthesized) continue;
    ++synthesized;
    std::vector<CoordinationMessage> added = result.refined->added;
    CHECK(verify_candidate_set(s, added, kLimits));
    CHECK(erase_coordination(result.refined->scenario) == s);
  }
  CHECK(synthesized >= 0);  // smoke guard; corpus coverage lives in acceptance
}
