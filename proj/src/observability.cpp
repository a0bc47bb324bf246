#include "dco/observability.hpp"

#include <algorithm>
#include <map>

namespace dco {

namespace {

// Interleaves the chosen local traces (one per lifeline, positions in
// `pos`), emitting receives only after their matching send.
void interleave(const std::vector<const Trace*>& chosen,
                std::vector<std::size_t>& pos,
                std::map<std::string, int>& sent, Trace& current,
                std::size_t budget, std::size_t& touched, TraceSet& out) {
  if (++touched > budget)
    throw BudgetExceeded("composition enumeration exceeds budget of " +
                         std::to_string(budget));
  bool complete = true;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (pos[i] == chosen[i]->size()) continue;
    complete = false;
    const Event& e = (*chosen[i])[pos[i]];
    if (e.dir == Direction::Receive && sent[e.message] < e.occurrence)
      continue;  // matching send not yet emitted
    pos[i] += 1;
    if (e.dir == Direction::Send) sent[e.message] += 1;
    current.push_back(e);
    interleave(chosen, pos, sent, current, budget, touched, out);
    current.pop_back();
    if (e.dir == Direction::Send) sent[e.message] -= 1;
    pos[i] -= 1;
  }
  if (complete) out.push_back(current);
}

void choose_locals(const std::vector<const TraceSet*>& locals, std::size_t i,
                   std::vector<const Trace*>& chosen, std::size_t budget,
                   std::size_t& touched, TraceSet& out) {
  if (i == locals.size()) {
    std::vector<std::size_t> pos(chosen.size(), 0);
    std::map<std::string, int> sent;
    Trace current;
    interleave(chosen, pos, sent, current, budget, touched, out);
    return;
  }
  for (const auto& t : *locals[i]) {
    chosen.push_back(&t);
    choose_locals(locals, i + 1, chosen, budget, touched, out);
    chosen.pop_back();
  }
}

}  // namespace

TraceSet composable_complete_traces(const ScenarioAnalysis& ctx) {
  std::vector<const TraceSet*> locals;
  for (const auto& l : ctx.scenario().lifelines)
    locals.push_back(&ctx.local_traces(l.id));

  TraceSet out;
  std::vector<const Trace*> chosen;
  std::size_t touched = 0;
  choose_locals(locals, 0, chosen, ctx.limits().budget, touched, out);
  normalize_trace_set(out);
  return out;
}

TraceSet locally_uncheckable_traces(const ScenarioAnalysis& ctx) {
  TraceSet composable = composable_complete_traces(ctx);
  const TraceSet& valid = ctx.valid_traces();
  TraceSet out;
  for (const auto& t : composable)
    if (std::find(valid.begin(), valid.end(), t) == valid.end())
      out.push_back(t);
  return out;  // composable is already normalized
}

bool is_locally_observable(const ScenarioAnalysis& ctx) {
  return locally_uncheckable_traces(ctx).empty();
}

TraceSet composable_complete_traces(const Scenario& s, const Limits& limits) {
  ScenarioAnalysis ctx(s, limits);
  return composable_complete_traces(ctx);
}

TraceSet locally_uncheckable_traces(const Scenario& s, const Limits& limits) {
  ScenarioAnalysis ctx(s, limits);
  return locally_uncheckable_traces(ctx);
}

bool is_locally_observable(const Scenario& s, const Limits& limits) {
  ScenarioAnalysis ctx(s, limits);
  return is_locally_observable(ctx);
}

}  // namespace dco
