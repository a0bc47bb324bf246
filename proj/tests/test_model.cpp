#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dco/model.hpp"
#include "support/fixtures.hpp"

using namespace dco;
using namespace dco::fixtures;

TEST_CASE("validate accepts the shared fixtures") {
  CHECK(validate_scenario(empty_scenario()).empty());
  CHECK(validate_scenario(single_scenario()).empty());
  CHECK(validate_scenario(pay_scenario()).empty());
  CHECK(validate_scenario(notify_scenario()).empty());
}

TEST_CASE("validate rejects a self-message") {
  Scenario s = single_scenario();
  s.messages[0].receiver = "A";
  auto diags = validate_scenario(s);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0] == "sender equals receiver for m");
}

TEST_CASE("validate reports structural violations") {
  SUBCASE("duplicate lifeline") {
    Scenario s = single_scenario();
    s.lifelines.push_back(Lifeline{"A", ""});
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("duplicate message name") {
    Scenario s = pay_scenario();
    s.messages.push_back(MessageDecl{"m1", "L1", "L3", false});
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("undeclared sender") {
    Scenario s = single_scenario();
    s.messages[0].sender = "Z";
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("loop min above max") {
    Scenario s = single_scenario();
    s.body = Fragment{
        SeqNode{{Fragment{LoopNode{3, 1, {Fragment{MsgNode{"m"}}}}}}}};
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("alt without operands") {
    Scenario s = single_scenario();
    s.body = Fragment{SeqNode{{Fragment{MsgNode{"m"}}, Fragment{AltNode{}}}}};
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("occurrence of undeclared message") {
    Scenario s = single_scenario();
    s.body = Fragment{SeqNode{{Fragment{MsgNode{"ghost"}}}}};
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("declared message never occurs") {
    Scenario s = single_scenario();
    s.body = Fragment{SeqNode{}};
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("message occurring twice") {
    Scenario s = single_scenario();
    s.body = Fragment{
        SeqNode{{Fragment{MsgNode{"m"}}, Fragment{MsgNode{"m"}}}}};
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("reserved Ctrl name without the coord flag") {
    Scenario s = single_scenario();
    s.messages[0].name = "Ctrl1";
    s.body = Fragment{SeqNode{{Fragment{MsgNode{"Ctrl1"}}}}};
    CHECK(!validate_scenario(s).empty());
  }
  SUBCASE("coord flag with a plain name") {
    Scenario s = single_scenario();
    s.messages[0].is_coordination = true;
    CHECK(!validate_scenario(s).empty());
  }
}

TEST_CASE("coordination name pattern") {
  CHECK(is_coordination_name("Ctrl1"));
  CHECK(is_coordination_name("Ctrl12"));
  CHECK(!is_coordination_name("Ctrl"));
  CHECK(!is_coordination_name("Ctrl0"));
  CHECK(!is_coordination_name("Ctrl01"));
  CHECK(!is_coordination_name("ctrl1"));
  CHECK(!is_coordination_name("Ctrl1x"));
}

TEST_CASE("erase_coordination strips synthesized messages") {
  Scenario refined = notify_scenario();
  refined.messages.push_back(MessageDecl{"Ctrl1", "L1", "L2", true});
  auto& opt = std::get<AltNode>(
      std::get<SeqNode>(refined.body.node).items[1].node);
  opt.operands[0].push_back(Fragment{MsgNode{"Ctrl1"}});
  REQUIRE(validate_scenario(refined).empty());

  CHECK(erase_coordination(refined) == notify_scenario());
  CHECK(erase_coordination(erase_coordination(refined)) ==
        erase_coordination(refined));
}

TEST_CASE("erase_coordination is the identity without coordination") {
  CHECK(erase_coordination(pay_scenario()) == pay_scenario());
}

TEST_CASE("erasing the only message leaves an empty body") {
  Scenario s = make_scenario("only_ctrl");
  s.lifelines = {Lifeline{"A", ""}, Lifeline{"B", ""}};
  s.messages = {MessageDecl{"Ctrl1", "A", "B", true}};
  s.body = Fragment{SeqNode{{Fragment{MsgNode{"Ctrl1"}}}}};
  Scenario erased = erase_coordination(s);
  CHECK(erased.messages.empty());
  CHECK(std::get<SeqNode>(erased.body.node).items.empty());
}

TEST_CASE("message_walk_order follows the tree") {
  CHECK(message_walk_order(pay_scenario().body) ==
        std::vector<std::string>{"m1", "m2", "m3"});
  CHECK(message_walk_order(notify_scenario().body) ==
        std::vector<std::string>{"m1", "m2"});
}
