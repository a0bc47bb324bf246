#ifndef DCO_TESTS_FIXTURES_HPP_
#define DCO_TESTS_FIXTURES_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dco/model.hpp"
#include "dco/semantics.hpp"

namespace dco::fixtures {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(DCO_FIXTURE_DIR) + "/" + name,
                   std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Scenario empty_scenario() { return make_scenario("fix_empty"); }

inline Scenario single_scenario() {
  Scenario s = make_scenario("fix_single");
  s.lifelines = {Lifeline{"A", ""}, Lifeline{"B", ""}};
  s.messages = {MessageDecl{"m", "A", "B", false}};
  s.body = Fragment{SeqNode{{Fragment{MsgNode{"m"}}}}};
  return s;
}

inline Scenario pay_scenario() {
  Scenario s = make_scenario("fix_pay");
  s.lifelines = {Lifeline{"L1", ""}, Lifeline{"L2", ""}, Lifeline{"L3", ""}};
  s.messages = {MessageDecl{"m1", "L1", "L2", false},
                MessageDecl{"m2", "L1", "L3", false},
                MessageDecl{"m3", "L2", "L3", false}};
  s.body = Fragment{SeqNode{{Fragment{MsgNode{"m1"}}, Fragment{MsgNode{"m2"}},
                             Fragment{MsgNode{"m3"}}}}};
  return s;
}

inline Scenario notify_scenario() {
  Scenario s = make_scenario("fix_notify");
  s.lifelines = {Lifeline{"L1", ""}, Lifeline{"L2", ""}};
  s.messages = {MessageDecl{"m1", "L1", "L2", false},
                MessageDecl{"m2", "L2", "L1", false}};
  AltNode opt;
  opt.operands.push_back({Fragment{MsgNode{"m2"}}});
  opt.operands.emplace_back();
  s.body = Fragment{
      SeqNode{{Fragment{MsgNode{"m1"}}, Fragment{std::move(opt)}}}};
  return s;
}

// Event shorthand.
inline Event snd(const std::string& m, const std::string& l, int occ = 1) {
  return Event{Direction::Send, m, occ, l};
}
inline Event rcv(const std::string& m, const std::string& l, int occ = 1) {
  return Event{Direction::Receive, m, occ, l};
}

}  // namespace dco::fixtures

#endif  // DCO_TESTS_FIXTURES_HPP_
