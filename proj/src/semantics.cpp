#include "dco/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace dco {

namespace {

constexpr std::size_t kMaxEvents = 64;  // pred masks are single words

struct Occurrence {
  std::string message;
  int index;  // 1-based per message name
};

// Enumerates resolutions of the fragment tree into flat occurrence
// sequences. Each alt instance and each loop instance encountered during
// the unfolding is an independent choice point; choices are recorded in
// encounter order, operands and iteration counts ascending.
class Unfolder {
 public:
  Unfolder(const Scenario& s, const Limits& limits) : s_(s), limits_(limits) {
    const auto& seq = std::get<SeqNode>(s.body.node);
    walk_list(seq.items, 0, [this] { emit(); });
  }

  std::vector<FlatVariant> take() { return std::move(variants_); }

 private:
  using Cont = std::function<void()>;

  void walk_list(const std::vector<Fragment>& items, std::size_t i,
                 const Cont& done) {
    if (i == items.size()) {
      done();
      return;
    }
    const Fragment& f = items[i];
    Cont rest = [this, &items, i, &done] { walk_list(items, i + 1, done); };
    if (const auto* m = std::get_if<MsgNode>(&f.node)) {
      int idx = ++counts_[m->message];
      acc_.push_back(Occurrence{m->message, idx});
      rest();
      acc_.pop_back();
      counts_[m->message] -= 1;
    } else if (const auto* seq = std::get_if<SeqNode>(&f.node)) {
      walk_list(seq->items, 0, rest);
    } else if (const auto* alt = std::get_if<AltNode>(&f.node)) {
      for (std::size_t op = 0; op < alt->operands.size(); ++op) {
        choices_.push_back(static_cast<int>(op));
        walk_list(alt->operands[op], 0, rest);
        choices_.pop_back();
      }
    } else {
      const auto& loop = std::get<LoopNode>(f.node);
      unsigned hi =
          std::min(loop.max, static_cast<unsigned>(limits_.loop_bound));
      for (unsigned n = loop.min; n <= hi; ++n) {
        choices_.push_back(static_cast<int>(n));
        iterate(loop.body, n, rest);
        choices_.pop_back();
      }
    }
  }

  void iterate(const std::vector<Fragment>& body, unsigned remaining,
               const Cont& done) {
    if (remaining == 0) {
      done();
      return;
    }
    walk_list(body, 0,
              [this, &body, remaining, &done] {
                iterate(body, remaining - 1, done);
              });
  }

  void emit() {
    if (variants_.size() >= limits_.budget)
      throw BudgetExceeded("variant count exceeds budget of " +
                           std::to_string(limits_.budget));
    if (acc_.size() * 2 > kMaxEvents)
      throw BudgetExceeded("variant has more than " +
                           std::to_string(kMaxEvents) + " events");

    FlatVariant v;
    v.choices = choices_;
    v.events.reserve(acc_.size() * 2);
    for (const auto& occ : acc_) {
      const MessageDecl* decl = find_message(s_, occ.message);
      assert(decl != nullptr);
      v.events.push_back(
          Event{Direction::Send, occ.message, occ.index, decl->sender});
      v.events.push_back(
          Event{Direction::Receive, occ.message, occ.index, decl->receiver});
    }

    // Direct edges: per-lifeline chains over the flat order, plus
    // send < receive per occurrence. Events are emitted in a topological
    // order of those edges, so one forward pass closes the relation.
    std::size_t n = v.events.size();
    v.preds.assign(n, 0);
    std::map<std::string, std::size_t> last_at;
    for (std::size_t i = 0; i < n; ++i) {
      const Event& e = v.events[i];
      auto it = last_at.find(e.lifeline);
      if (it != last_at.end())
        v.preds[i] |= v.preds[it->second] | (std::uint64_t{1} << it->second);
      if (e.dir == Direction::Receive)  // send sits at i-1 by construction
        v.preds[i] |= v.preds[i - 1] | (std::uint64_t{1} << (i - 1));
      last_at[e.lifeline] = i;
    }
    variants_.push_back(std::move(v));
  }

  const Scenario& s_;
  const Limits& limits_;
  std::vector<Occurrence> acc_;
  std::vector<int> choices_;
  std::map<std::string, int> counts_;
  std::vector<FlatVariant> variants_;
};

void extend_linear(const FlatVariant& v, std::uint64_t taken, Trace& current,
                   std::size_t budget, std::size_t& produced, TraceSet& out) {
  std::size_t n = v.events.size();
  if (current.size() == n) {
    if (++produced > budget)
      throw BudgetExceeded("trace enumeration exceeds budget of " +
                           std::to_string(budget));
    out.push_back(current);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if ((taken >> i) & 1u) continue;
    if ((v.preds[i] & ~taken) != 0) continue;
    current.push_back(v.events[i]);
    extend_linear(v, taken | (std::uint64_t{1} << i), current, budget,
                  produced, out);
    current.pop_back();
  }
}

void linear_extensions(const FlatVariant& v, std::size_t budget,
                       std::size_t& produced, TraceSet& out) {
  Trace current;
  current.reserve(v.events.size());
  extend_linear(v, 0, current, budget, produced, out);
}

}  // namespace

std::vector<FlatVariant> unfold(const Scenario& s, const Limits& limits) {
  return Unfolder(s, limits).take();
}

TraceSet valid_global_traces(const Scenario& s, const Limits& limits) {
  auto variants = unfold(s, limits);
  TraceSet out;
  std::size_t produced = 0;
  for (const auto& v : variants)
    linear_extensions(v, limits.budget, produced, out);
  normalize_trace_set(out);
  return out;
}

Trace project(const Trace& t, const std::string& lifeline) {
  Trace out;
  for (const auto& e : t)
    if (e.lifeline == lifeline) out.push_back(e);
  return out;
}

TraceSet valid_local_traces(const Scenario& s, const std::string& lifeline,
                            const Limits& limits) {
  TraceSet out;
  for (const auto& t : valid_global_traces(s, limits))
    out.push_back(project(t, lifeline));
  normalize_trace_set(out);
  return out;
}

namespace {

// t is a prefix of a linear extension of v iff its events are distinct
// members of v and every step has all its predecessors already taken.
bool prefix_of_variant(const FlatVariant& v, const Trace& t) {
  if (t.size() > v.events.size()) return false;
  std::uint64_t taken = 0;
  for (const auto& e : t) {
    bool matched = false;
    for (std::size_t i = 0; i < v.events.size(); ++i) {
      if ((taken >> i) & 1u) continue;
      if (v.events[i] != e) continue;
      if ((v.preds[i] & ~taken) != 0) return false;
      taken |= std::uint64_t{1} << i;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

bool is_valid_prefix(const Scenario& s, const Trace& t, const Limits& limits) {
  for (const auto& v : unfold(s, limits))
    if (prefix_of_variant(v, t)) return true;
  return false;
}

std::string render_event(const Event& e, bool numbered) {
  std::string out;
  out += (e.dir == Direction::Send) ? '!' : '?';
  out += e.message;
  if (numbered) {
    out += '#';
    out += std::to_string(e.occurrence);
  }
  out += '@';
  out += e.lifeline;
  return out;
}

std::vector<std::string> render_trace_events(const Trace& t) {
  std::map<std::string, int> max_occurrence;
  for (const auto& e : t) {
    int& m = max_occurrence[e.message];
    m = std::max(m, e.occurrence);
  }
  std::vector<std::string> out;
  out.reserve(t.size());
  for (const auto& e : t)
    out.push_back(render_event(e, max_occurrence[e.message] > 1));
  return out;
}

std::string render_trace(const Trace& t) {
  std::string out = "[";
  auto parts = render_trace_events(t);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  out += "]";
  return out;
}

bool trace_shortlex_less(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto ra = render_trace_events(a);
  auto rb = render_trace_events(b);
  return ra < rb;
}

void normalize_trace_set(TraceSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  // Rendered keys are computed once per trace; comparing them on every
  // sort probe would dominate large enumerations.
  std::vector<std::pair<std::vector<std::string>, std::size_t>> keys;
  keys.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i)
    keys.emplace_back(render_trace_events(set[i]), i);
  std::sort(keys.begin(), keys.end(),
            [&](const auto& a, const auto& b) {
              if (set[a.second].size() != set[b.second].size())
                return set[a.second].size() < set[b.second].size();
              return a.first < b.first;
            });
  TraceSet sorted;
  sorted.reserve(set.size());
  for (const auto& [key, i] : keys) sorted.push_back(std::move(set[i]));
  set = std::move(sorted);
}

ScenarioAnalysis::ScenarioAnalysis(const Scenario& s, const Limits& limits)
    : scenario_(&s), limits_(limits) {
  variants_ = unfold(s, limits);
  // A lifeline's events form a chain in every variant, so the projection
  // of every linearization of that variant is the chain itself.
  for (const auto& l : s.lifelines) {
    TraceSet local;
    for (const auto& v : variants_) local.push_back(project_chain(v, l.id));
    normalize_trace_set(local);
    locals_[l.id] = std::move(local);
  }
}

const TraceSet& ScenarioAnalysis::valid_traces() const {
  if (!valid_computed_) {
    std::size_t produced = 0;
    for (const auto& v : variants_)
      linear_extensions(v, limits_.budget, produced, valid_);
    normalize_trace_set(valid_);
    valid_computed_ = true;
  }
  return valid_;
}

const TraceSet& ScenarioAnalysis::local_traces(
    const std::string& lifeline) const {
  auto it = locals_.find(lifeline);
  return it == locals_.end() ? empty_ : it->second;
}

bool ScenarioAnalysis::is_valid_prefix(const Trace& t) const {
  for (const auto& v : variants_)
    if (prefix_of_variant(v, t)) return true;
  return false;
}

bool ScenarioAnalysis::is_valid_complete(const Trace& t) const {
  for (const auto& v : variants_)
    if (v.events.size() == t.size() && prefix_of_variant(v, t)) return true;
  return false;
}

}  // namespace dco
