#include <doctest.h>

#include <random>

#include "dco/dsl.hpp"
#include "support/fixtures.hpp"
#include "support/generator.hpp"

using namespace dco;
using namespace dco::fixtures;

TEST_CASE("parses the shared fixtures") {
  CHECK(parse_scenario(read_fixture("fix-empty.dco")).scenario ==
        empty_scenario());
  CHECK(parse_scenario(read_fixture("fix-single.dco")).scenario ==
        single_scenario());
  CHECK(parse_scenario(read_fixture("fix-notify.dco")).scenario ==
        notify_scenario());
}

TEST_CASE("parses the payment fixture with declaration order intact") {
  ParseResult result = parse_scenario(read_fixture("fix-pay.dco"));
  REQUIRE(result.ok());
  CHECK(*result.scenario == pay_scenario());
  CHECK(result.scenario->lifelines[0].id == "L1");
  CHECK(result.scenario->messages[0].name == "m1");
  CHECK(result.scenario->messages[2].name == "m3");
}

TEST_CASE("reference to an undeclared lifeline points at its span") {
  ParseResult result = parse_scenario(
      "scenario broken\n"
      "lifeline L1\n"
      "m9: L1 -> LX\n");
  REQUIRE(!result.ok());
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].message == "undeclared lifeline LX");
  CHECK(result.errors[0].span.line == 3);
  CHECK(result.errors[0].span.column == 11);
  CHECK(result.errors[0].span.length == 2);
}

TEST_CASE("parse error cases") {
  SUBCASE("duplicate message name") {
    auto r = parse_scenario(
        "scenario x\nlifeline A\nlifeline B\nm: A -> B\nm: B -> A\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].message == "duplicate message name m");
  }
  SUBCASE("self message") {
    auto r = parse_scenario("scenario x\nlifeline A\nm: A -> A\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].message == "sender equals receiver for m");
  }
  SUBCASE("unsupported fragment keyword") {
    auto r = parse_scenario(
        "scenario x\nlifeline A\nlifeline B\npar {\nm: A -> B\n}\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].message == "unsupported fragment 'par'");
  }
  SUBCASE("missing scenario header") {
    auto r = parse_scenario("lifeline A\n");
    CHECK(!r.ok());
  }
  SUBCASE("unclosed block") {
    auto r = parse_scenario("scenario x\nlifeline A\nlifeline B\nopt {\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].message == "unclosed block");
  }
  SUBCASE("loop bounds reversed") {
    auto r = parse_scenario(
        "scenario x\nlifeline A\nlifeline B\nloop(3,1) {\nm: A -> B\n}\n");
    CHECK(!r.ok());
  }
  SUBCASE("reserved name without coord") {
    auto r = parse_scenario(
        "scenario x\nlifeline A\nlifeline B\nCtrl1: A -> B\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].message ==
          "message Ctrl1 uses a reserved coordination name");
  }
  SUBCASE("bad character") {
    auto r = parse_scenario("scenario x\nlifeline A;\n");
    CHECK(!r.ok());
  }
}

TEST_CASE("comments, blank lines and CRLF are accepted") {
  auto r = parse_scenario(
      "# header comment\r\n"
      "scenario fix_single\r\n"
      "\r\n"
      "lifeline A   # the driver\r\n"
      "lifeline B\r\n"
      "m: A -> B # fire and forget\r\n");
  REQUIRE(r.ok());
  CHECK(*r.scenario == single_scenario());
}

TEST_CASE("display names survive a round trip") {
  auto r = parse_scenario(
      "scenario named\nlifeline A \"Payment Service\"\nlifeline B\n"
      "m: A -> B\n");
  REQUIRE(r.ok());
  CHECK(r.scenario->lifelines[0].display_name == "Payment Service");
  auto again = parse_scenario(render_scenario(*r.scenario));
  REQUIRE(again.ok());
  CHECK(*again.scenario == *r.scenario);
}

TEST_CASE("renders an empty second operand as opt") {
  std::string text = render_scenario(notify_scenario());
  CHECK(text.find("opt {") != std::string::npos);
  CHECK(text.find("else") == std::string::npos);
  auto again = parse_scenario(text);
  REQUIRE(again.ok());
  CHECK(*again.scenario == notify_scenario());
}

TEST_CASE("renders coordination declarations") {
  Scenario refined = pay_scenario();
  refined.messages.insert(refined.messages.begin() + 2,
                          MessageDecl{"Ctrl1", "L3", "L2", true});
  auto& seq = std::get<SeqNode>(refined.body.node);
  seq.items.insert(seq.items.begin() + 2, Fragment{MsgNode{"Ctrl1"}});
  REQUIRE(validate_scenario(refined).empty());

  std::string text = render_scenario(refined);
  CHECK(text.find("coord Ctrl1: L3 -> L2") != std::string::npos);
  auto again = parse_scenario(text);
  REQUIRE(again.ok());
  CHECK(*again.scenario == refined);
}

TEST_CASE("two-operand alt renders with else") {
  Scenario s = make_scenario("alted");
  s.lifelines = {Lifeline{"A", ""}, Lifeline{"B", ""}};
  s.messages = {MessageDecl{"a", "A", "B", false},
                MessageDecl{"b", "B", "A", false}};
  AltNode alt;
  alt.operands.push_back({Fragment{MsgNode{"a"}}});
  alt.operands.push_back({Fragment{MsgNode{"b"}}});
  s.body = Fragment{SeqNode{{Fragment{std::move(alt)}}}};
  REQUIRE(validate_scenario(s).empty());

  std::string text = render_scenario(s);
  CHECK(text.find("alt {") != std::string::npos);
  CHECK(text.find("} else {") != std::string::npos);
  auto again = parse_scenario(text);
  REQUIRE(again.ok());
  CHECK(*again.scenario == s);
}

TEST_CASE("random scenarios round trip through the text format") {
  std::mt19937 rng(4001);
  for (int round = 0; round < 100; ++round) {
    Scenario s = testgen::random_scenario(rng);
    ParseResult r = parse_scenario(render_scenario(s));
    REQUIRE(r.ok());
    CHECK(*r.scenario == s);
  }
}

TEST_CASE("parsing never accepts what validation rejects") {
  std::mt19937 rng(4002);
  for (int round = 0; round < 50; ++round) {
    Scenario s = testgen::random_scenario(rng);
    ParseResult r = parse_scenario(render_scenario(s));
    REQUIRE(r.ok());
    CHECK(validate_scenario(*r.scenario).empty());
  }
}
