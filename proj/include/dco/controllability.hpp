#ifndef DCO_CONTROLLABILITY_HPP_
#define DCO_CONTROLLABILITY_HPP_

#include <vector>

#include "dco/semantics.hpp"

namespace dco {

/// A global state of the distributed execution, identified by its global
/// history; local histories and the in-flight multiset are derived views.
struct DistributedState {
  Trace global_history;

  Trace local_history(const std::string& lifeline) const {
    return project(global_history, lifeline);
  }
  /// Sent-but-undelivered occurrences as (message, occurrence) pairs.
  std::vector<std::pair<std::string, int>> in_flight() const;
};

/// A minimal reachable deviation: the prefix before deviation_index is a
/// valid global prefix, the full trace is not, and the trace ends at the
/// deviating event.
struct UnintendedTrace {
  Trace trace;
  std::size_t deviation_index = 0;

  bool operator==(const UnintendedTrace&) const = default;
};

/// Steps possible from `st` when every lifeline decides from local history
/// alone: sends that extend the lifeline's valid local prefix, plus
/// deliveries of in-flight occurrences. Delivery is environment-controlled
/// but never overtakes a causally prior in-flight message to the same
/// lifeline.
std::vector<Event> enabled_steps(const Scenario& s, const DistributedState& st,
                                 const Limits& limits);

/// Exhaustive reachability over enabled_steps from the empty history;
/// reports every history whose last step first exits the valid-prefix set,
/// shortlex ordered.
std::vector<UnintendedTrace> unintended_traces(const Scenario& s,
                                               const Limits& limits);

bool is_locally_controllable(const Scenario& s, const Limits& limits);

// Context-reusing variants for callers that already built the analysis.
std::vector<Event> enabled_steps(const ScenarioAnalysis& ctx,
                                 const DistributedState& st);
std::vector<UnintendedTrace> unintended_traces(const ScenarioAnalysis& ctx);
bool is_locally_controllable(const ScenarioAnalysis& ctx);

}  // namespace dco

#endif  // DCO_CONTROLLABILITY_HPP_
