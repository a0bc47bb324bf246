#include "dco/controllability.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace dco {

std::vector<std::pair<std::string, int>> DistributedState::in_flight() const {
  std::map<std::string, int> sent, received;
  for (const auto& e : global_history)
    (e.dir == Direction::Send ? sent : received)[e.message] += 1;
  std::vector<std::pair<std::string, int>> out;
  for (const auto& [name, n_sent] : sent)
    for (int k = received[name] + 1; k <= n_sent; ++k)
      out.emplace_back(name, k);
  return out;
}

namespace {

// The search interns events as small integer keys and keeps every piece
// of per-state data in flat vectors, so extending a state is a handful of
// contiguous copies. Budgets cap the state count, the 64-event mask width
// caps the history length.
class ReachEngine {
 public:
  struct Node {
    std::vector<int> history;            // event keys
    std::vector<std::uint64_t> hb;       // closure per history index
    std::vector<std::uint64_t> taken;    // per variant; kDead when dead
    std::vector<int> trie_at;            // per lifeline; -1 once deviated
    std::vector<std::int16_t> sent;      // per message
    std::vector<std::int16_t> received;  // per message
    std::vector<std::int8_t> last_at;    // per lifeline; -1 when none
  };

  static constexpr std::uint64_t kDead = ~std::uint64_t{0};

  explicit ReachEngine(const ScenarioAnalysis& ctx) {
    const Scenario& s = ctx.scenario();
    for (std::size_t i = 0; i < s.lifelines.size(); ++i)
      lifeline_idx_[s.lifelines[i].id] = static_cast<int>(i);
    for (std::size_t i = 0; i < s.messages.size(); ++i)
      msg_idx_[s.messages[i].name] = static_cast<int>(i);
    msgs_ = s.messages;

    // Local prefix trees over the valid local traces, nodes in a pool.
    trie_roots_.resize(s.lifelines.size(), -1);
    for (std::size_t li = 0; li < s.lifelines.size(); ++li) {
      trie_roots_[li] = new_trie_node();
      for (const auto& t : ctx.local_traces(s.lifelines[li].id)) {
        int node = trie_roots_[li];
        for (const auto& e : t) node = trie_insert(node, key_of(e));
      }
    }

    // Per-variant lookup: event key -> (event index, predecessor mask).
    for (const auto& v : ctx.variants()) {
      VariantIndex vi;
      for (std::size_t i = 0; i < v.events.size(); ++i)
        vi.by_key.emplace_back(key_of(v.events[i]),
                               std::pair<std::uint64_t, std::uint64_t>{
                                   std::uint64_t{1} << i, v.preds[i]});
      std::sort(vi.by_key.begin(), vi.by_key.end());
      variant_index_.push_back(std::move(vi));
    }
  }

  Node initial() const {
    Node n;
    n.taken.assign(variant_index_.size(), 0);
    n.trie_at = trie_roots_;
    n.sent.assign(msgs_.size(), 0);
    n.received.assign(msgs_.size(), 0);
    n.last_at.assign(trie_roots_.size(), -1);
    return n;
  }

  int key_of(const Event& e) const {
    auto it = msg_idx_.find(e.message);
    if (it == msg_idx_.end()) return -1;
    return make_key(it->second, e.occurrence, e.dir == Direction::Receive);
  }

  Event event_of(int key) const {
    const MessageDecl& m = msgs_[static_cast<std::size_t>(key >> 7)];
    bool receive = key & 1;
    return Event{receive ? Direction::Receive : Direction::Send, m.name,
                 (key >> 1) & 63, receive ? m.receiver : m.sender};
  }

  Trace trace_of(const Node& n) const {
    Trace t;
    t.reserve(n.history.size());
    for (int key : n.history) t.push_back(event_of(key));
    return t;
  }

  Node extend(const Node& n, int key) const {
    Node out = n;
    std::size_t idx = out.history.size();
    if (idx >= 64) throw BudgetExceeded("search history exceeds 64 events");
    out.history.push_back(key);

    int msg = key >> 7;
    bool receive = key & 1;
    int lifeline = lifeline_of(key);

    std::uint64_t mask = std::uint64_t{1} << idx;
    if (out.last_at[lifeline] >= 0) mask |= out.hb[out.last_at[lifeline]];
    if (receive) {
      int send_at = find_send(out, msg, (key >> 1) & 63);
      if (send_at >= 0) mask |= out.hb[send_at];
    }
    out.hb.push_back(mask);
    out.last_at[lifeline] = static_cast<std::int8_t>(idx);

    if (receive) {
      out.received[msg] += 1;
    } else {
      out.sent[msg] += 1;
    }

    if (out.trie_at[lifeline] >= 0)
      out.trie_at[lifeline] = trie_step(out.trie_at[lifeline], key);

    for (std::size_t v = 0; v < variant_index_.size(); ++v) {
      std::uint64_t& taken = out.taken[v];
      if (taken == kDead) continue;
      auto [bit, preds] = variant_index_[v].lookup(key);
      if (bit == 0 || (taken & bit) != 0 || (preds & ~taken) != 0)
        taken = kDead;
      else
        taken |= bit;
    }
    return out;
  }

  bool valid_prefix(const Node& n) const {
    return std::any_of(n.taken.begin(), n.taken.end(),
                       [](std::uint64_t t) { return t != kDead; });
  }

  std::vector<int> enabled(const Node& n) const {
    std::vector<int> out;
    for (std::size_t li = 0; li < n.trie_at.size(); ++li) {
      if (n.trie_at[li] < 0) continue;
      for (const auto& [key, child] :
           trie_children_[static_cast<std::size_t>(n.trie_at[li])])
        if ((key & 1) == 0) out.push_back(key);
    }
    for (std::size_t m = 0; m < msgs_.size(); ++m) {
      if (n.received[m] >= n.sent[m]) continue;
      int occ = n.received[m] + 1;
      if (delivery_blocked(n, static_cast<int>(m), occ)) continue;
      out.push_back(make_key(static_cast<int>(m), occ, true));
    }
    std::sort(out.begin(), out.end(), [this](int a, int b) {
      return event_of(a) < event_of(b);
    });
    return out;
  }

 private:
  struct VariantIndex {
    // sorted (key, (bit, preds))
    std::vector<std::pair<int, std::pair<std::uint64_t, std::uint64_t>>>
        by_key;

    std::pair<std::uint64_t, std::uint64_t> lookup(int key) const {
      auto it = std::lower_bound(
          by_key.begin(), by_key.end(), key,
          [](const auto& entry, int k) { return entry.first < k; });
      if (it == by_key.end() || it->first != key) return {0, 0};
      return it->second;
    }
  };

  static int make_key(int msg, int occurrence, bool receive) {
    return (msg << 7) | ((occurrence & 63) << 1) | (receive ? 1 : 0);
  }

  int lifeline_of(int key) const {
    const MessageDecl& m = msgs_[static_cast<std::size_t>(key >> 7)];
    return lifeline_idx_.at((key & 1) ? m.receiver : m.sender);
  }

  int find_send(const Node& n, int msg, int occurrence) const {
    int key = make_key(msg, occurrence, false);
    for (std::size_t i = n.history.size(); i-- > 0;)
      if (n.history[i] == key) return static_cast<int>(i);
    return -1;
  }

  // A delivery must not overtake a causally prior in-flight send to the
  // same destination.
  bool delivery_blocked(const Node& n, int msg, int occurrence) const {
    int my_send = find_send(n, msg, occurrence);
    assert(my_send >= 0);
    std::uint64_t my_hb = n.hb[static_cast<std::size_t>(my_send)];
    const std::string& receiver = msgs_[static_cast<std::size_t>(msg)].receiver;
    for (std::size_t other = 0; other < msgs_.size(); ++other) {
      if (static_cast<int>(other) == msg) continue;
      if (n.received[other] >= n.sent[other]) continue;
      if (msgs_[other].receiver != receiver) continue;
      int other_send = find_send(n, static_cast<int>(other),
                                 n.received[other] + 1);
      if (other_send >= 0 && ((my_hb >> other_send) & 1u)) return true;
    }
    return false;
  }

  int new_trie_node() {
    trie_children_.emplace_back();
    return static_cast<int>(trie_children_.size() - 1);
  }

  int trie_insert(int node, int key) {
    for (const auto& [k, child] : trie_children_[static_cast<std::size_t>(node)])
      if (k == key) return child;
    int child = new_trie_node();
    auto& children = trie_children_[static_cast<std::size_t>(node)];
    children.emplace_back(key, child);
    std::sort(children.begin(), children.end());
    return child;
  }

  int trie_step(int node, int key) const {
    for (const auto& [k, child] : trie_children_[static_cast<std::size_t>(node)])
      if (k == key) return child;
    return -1;
  }

  std::vector<MessageDecl> msgs_;
  std::map<std::string, int> msg_idx_;
  std::map<std::string, int> lifeline_idx_;
  std::vector<std::vector<std::pair<int, int>>> trie_children_;
  std::vector<int> trie_roots_;
  std::vector<VariantIndex> variant_index_;
};

void search(const ReachEngine& engine, const ReachEngine::Node& n,
            const Limits& limits, std::size_t& visited,
            std::vector<UnintendedTrace>& witnesses) {
  if (++visited > limits.budget)
    throw BudgetExceeded("reachability search exceeds budget of " +
                         std::to_string(limits.budget));
  for (int key : engine.enabled(n)) {
    ReachEngine::Node next = engine.extend(n, key);
    if (engine.valid_prefix(next)) {
      search(engine, next, limits, visited, witnesses);
    } else {
      Trace t = engine.trace_of(next);
      witnesses.push_back(UnintendedTrace{t, t.size() - 1});
    }
  }
}

}  // namespace

std::vector<Event> enabled_steps(const ScenarioAnalysis& ctx,
                                 const DistributedState& st) {
  ReachEngine engine(ctx);
  ReachEngine::Node n = engine.initial();
  for (const auto& e : st.global_history) {
    int key = engine.key_of(e);
    if (key < 0)
      throw std::invalid_argument("unknown message in state history: " +
                                  e.message);
    n = engine.extend(n, key);
    if (!engine.valid_prefix(n))
      throw std::invalid_argument("state history is not a valid prefix: " +
                                  render_trace(st.global_history));
  }
  std::vector<Event> out;
  for (int key : engine.enabled(n)) out.push_back(engine.event_of(key));
  return out;
}

std::vector<Event> enabled_steps(const Scenario& s, const DistributedState& st,
                                 const Limits& limits) {
  ScenarioAnalysis ctx(s, limits);
  return enabled_steps(ctx, st);
}

std::vector<UnintendedTrace> unintended_traces(const ScenarioAnalysis& ctx) {
  ReachEngine engine(ctx);
  std::vector<UnintendedTrace> witnesses;
  std::size_t visited = 0;
  search(engine, engine.initial(), ctx.limits(), visited, witnesses);
  std::sort(witnesses.begin(), witnesses.end(),
            [](const UnintendedTrace& a, const UnintendedTrace& b) {
              return trace_shortlex_less(a.trace, b.trace);
            });
  witnesses.erase(std::unique(witnesses.begin(), witnesses.end()),
                  witnesses.end());
  return witnesses;
}

std::vector<UnintendedTrace> unintended_traces(const Scenario& s,
                                               const Limits& limits) {
  ScenarioAnalysis ctx(s, limits);
  return unintended_traces(ctx);
}

bool is_locally_controllable(const ScenarioAnalysis& ctx) {
  return unintended_traces(ctx).empty();
}

bool is_locally_controllable(const Scenario& s, const Limits& limits) {
  ScenarioAnalysis ctx(s, limits);
  return is_locally_controllable(ctx);
}

}  // namespace dco
