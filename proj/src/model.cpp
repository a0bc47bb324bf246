#include "dco/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace dco {

bool SeqNode::operator==(const SeqNode&) const = default;
bool AltNode::operator==(const AltNode&) const = default;
bool LoopNode::operator==(const LoopNode&) const = default;

bool is_coordination_name(const std::string& name) {
  if (name.size() < 5 || name.compare(0, 4, "Ctrl") != 0) return false;
  if (name[4] == '0') return false;
  return std::all_of(name.begin() + 4, name.end(),
                     [](unsigned char c) { return c >= '0' && c <= '9'; });
}

const MessageDecl* find_message(const Scenario& s, const std::string& name) {
  for (const auto& m : s.messages)
    if (m.name == name) return &m;
  return nullptr;
}

const Lifeline* find_lifeline(const Scenario& s, const std::string& id) {
  for (const auto& l : s.lifelines)
    if (l.id == id) return &l;
  return nullptr;
}

namespace {

void walk(const Fragment& f, const std::function<void(const MsgNode&)>& on_msg,
          const std::function<void(const LoopNode&)>& on_loop,
          const std::function<void(const AltNode&)>& on_alt) {
  if (const auto* m = std::get_if<MsgNode>(&f.node)) {
    on_msg(*m);
  } else if (const auto* seq = std::get_if<SeqNode>(&f.node)) {
    for (const auto& c : seq->items) walk(c, on_msg, on_loop, on_alt);
  } else if (const auto* alt = std::get_if<AltNode>(&f.node)) {
    on_alt(*alt);
    for (const auto& op : alt->operands)
      for (const auto& c : op) walk(c, on_msg, on_loop, on_alt);
  } else {
    const auto& loop = std::get<LoopNode>(f.node);
    on_loop(loop);
    for (const auto& c : loop.body) walk(c, on_msg, on_loop, on_alt);
  }
}

}  // namespace

std::vector<std::string> message_walk_order(const Fragment& body) {
  std::vector<std::string> order;
  walk(
      body, [&](const MsgNode& m) { order.push_back(m.message); },
      [](const LoopNode&) {}, [](const AltNode&) {});
  return order;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> diags;

  std::set<std::string> lifeline_ids;
  for (const auto& l : s.lifelines) {
    if (l.id.empty()) diags.push_back("lifeline with empty id");
    if (!lifeline_ids.insert(l.id).second)
      diags.push_back("duplicate lifeline id " + l.id);
  }

  std::set<std::string> message_names;
  for (const auto& m : s.messages) {
    if (m.name.empty()) diags.push_back("message with empty name");
    if (!message_names.insert(m.name).second)
      diags.push_back("duplicate message name " + m.name);
    if (m.sender == m.receiver)
      diags.push_back("sender equals receiver for " + m.name);
    if (!lifeline_ids.count(m.sender))
      diags.push_back("message " + m.name + " names undeclared sender " +
                      m.sender);
    if (!lifeline_ids.count(m.receiver))
      diags.push_back("message " + m.name + " names undeclared receiver " +
                      m.receiver);
    if (m.is_coordination && !is_coordination_name(m.name))
      diags.push_back("coordination message " + m.name +
                      " must be named Ctrl<k>");
    if (!m.is_coordination && is_coordination_name(m.name))
      diags.push_back("message " + m.name +
                      " uses a reserved coordination name");
  }

  // Fragment invariants plus occurrence counting.
  std::map<std::string, int> occurrences;
  walk(
      s.body,
      [&](const MsgNode& m) {
        if (!message_names.count(m.message))
          diags.push_back("occurrence of undeclared message " + m.message);
        occurrences[m.message] += 1;
      },
      [&](const LoopNode& loop) {
        if (loop.min > loop.max)
          diags.push_back("loop has min " + std::to_string(loop.min) +
                          " greater than max " + std::to_string(loop.max));
      },
      [&](const AltNode& alt) {
        if (alt.operands.empty()) diags.push_back("alt with no operands");
      });

  for (const auto& [name, count] : occurrences)
    if (count > 1)
      diags.push_back("message " + name + " occurs " + std::to_string(count) +
                      " times in the fragment tree");
  for (const auto& m : s.messages)
    if (!occurrences.count(m.name))
      diags.push_back("message " + m.name + " declared but never occurs");

  if (!std::holds_alternative<SeqNode>(s.body.node))
    diags.push_back("scenario body is not a sequence");

  return diags;
}

namespace {

std::vector<Fragment> erase_in_list(const std::vector<Fragment>& items,
                                    const std::set<std::string>& doomed);

Fragment erase_in_fragment(const Fragment& f,
                           const std::set<std::string>& doomed) {
  if (const auto* seq = std::get_if<SeqNode>(&f.node))
    return Fragment{SeqNode{erase_in_list(seq->items, doomed)}};
  if (const auto* alt = std::get_if<AltNode>(&f.node)) {
    AltNode out;
    for (const auto& op : alt->operands)
      out.operands.push_back(erase_in_list(op, doomed));
    return Fragment{std::move(out)};
  }
  if (const auto* loop = std::get_if<LoopNode>(&f.node))
    return Fragment{
        LoopNode{loop->min, loop->max, erase_in_list(loop->body, doomed)}};
  return f;  // MsgNode handled by the caller
}

std::vector<Fragment> erase_in_list(const std::vector<Fragment>& items,
                                    const std::set<std::string>& doomed) {
  std::vector<Fragment> out;
  for (const auto& f : items) {
    if (const auto* m = std::get_if<MsgNode>(&f.node)) {
      if (!doomed.count(m->message)) out.push_back(f);
    } else {
      out.push_back(erase_in_fragment(f, doomed));
    }
  }
  return out;
}

}  // namespace

Scenario erase_coordination(const Scenario& s) {
  std::set<std::string> doomed;
  for (const auto& m : s.messages)
    if (m.is_coordination) doomed.insert(m.name);
  if (doomed.empty()) return s;

  Scenario out = s;
  out.messages.clear();
  for (const auto& m : s.messages)
    if (!m.is_coordination) out.messages.push_back(m);
  out.body = erase_in_fragment(s.body, doomed);
  return out;
}

}  // namespace dco
