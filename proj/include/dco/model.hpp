#ifndef DCO_MODEL_HPP_
#define DCO_MODEL_HPP_

#include <string>
#include <variant>
#include <vector>

namespace dco {

/// A participant in a scenario. Owns a totally ordered sequence of events
/// per resolved variant.
struct Lifeline {
  std::string id;
  std::string display_name;  // optional, empty when absent

  bool operator==(const Lifeline&) const = default;
};

/// Declaration of a message. Declarations are fused with their single
/// occurrence in the fragment tree; coordination messages (names Ctrl1,
/// Ctrl2, ...) are the ones synthesized by the enforcement pass.
struct MessageDecl {
  std::string name;
  std::string sender;
  std::string receiver;
  bool is_coordination = false;

  bool operator==(const MessageDecl&) const = default;
};

struct Fragment;

/// One message occurrence.
struct MsgNode {
  std::string message;
  bool operator==(const MsgNode&) const = default;
};

/// Ordered sequence of fragments (weak sequencing between them).
struct SeqNode {
  std::vector<Fragment> items;
  bool operator==(const SeqNode&) const;
};

/// Alternative with >= 1 operands; an empty operand encodes `opt`.
struct AltNode {
  std::vector<std::vector<Fragment>> operands;
  bool operator==(const AltNode&) const;
};

/// Bounded loop; min <= max, max kept finite by the loop-bound cap.
struct LoopNode {
  unsigned min = 0;
  unsigned max = 0;
  std::vector<Fragment> body;
  bool operator==(const LoopNode&) const;
};

struct Fragment {
  std::variant<MsgNode, SeqNode, AltNode, LoopNode> node;
  bool operator==(const Fragment&) const = default;
};

/// A test scenario: lifelines plus a fragment tree. Immutable after
/// construction by convention; every analysis takes it by const reference.
struct Scenario {
  std::string name;
  std::vector<Lifeline> lifelines;
  std::vector<MessageDecl> messages;  // in fragment-tree walk order
  Fragment body;                      // always a SeqNode

  bool operator==(const Scenario&) const = default;
};

inline Scenario make_scenario(std::string name) {
  return Scenario{std::move(name), {}, {}, Fragment{SeqNode{}}};
}

/// True for the reserved coordination-message names Ctrl1, Ctrl2, ...
bool is_coordination_name(const std::string& name);

/// Checks every structural invariant; returns one human-readable
/// diagnostic per violation, each naming the offending element.
/// An empty result means the scenario is accepted by every analysis.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Removes every coordination message (declaration and occurrence),
/// leaving all other structure unchanged. Idempotent.
Scenario erase_coordination(const Scenario& s);

// --- shared lookups used across modules ---

const MessageDecl* find_message(const Scenario& s, const std::string& name);
const Lifeline* find_lifeline(const Scenario& s, const std::string& id);

/// Message names in fragment-tree walk order (loop bodies once).
std::vector<std::string> message_walk_order(const Fragment& body);

}  // namespace dco

#endif  // DCO_MODEL_HPP_
