#ifndef DCO_OBSERVABILITY_HPP_
#define DCO_OBSERVABILITY_HPP_

#include "dco/semantics.hpp"

namespace dco {

/// All complete behaviors that look finished and valid from every local
/// point of view: interleavings of one complete valid local trace per
/// lifeline in which each receive is preceded by its matching send
/// (FIFO-paired per message name). Sends may stay unreceived (message
/// loss). Superset of the valid global traces.
TraceSet composable_complete_traces(const Scenario& s, const Limits& limits);

/// composable_complete_traces minus valid_global_traces: invalid complete
/// behaviors no local tester can flag.
TraceSet locally_uncheckable_traces(const Scenario& s, const Limits& limits);

bool is_locally_observable(const Scenario& s, const Limits& limits);

// Context-reusing variants.
TraceSet composable_complete_traces(const ScenarioAnalysis& ctx);
TraceSet locally_uncheckable_traces(const ScenarioAnalysis& ctx);
bool is_locally_observable(const ScenarioAnalysis& ctx);

}  // namespace dco

#endif  // DCO_OBSERVABILITY_HPP_
