#ifndef DCO_TESTS_ORACLE_HPP_
#define DCO_TESTS_ORACLE_HPP_

// Brute-force reference implementations written directly from the
// definitions, kept independent of the library's enumeration code: they
// use explicit edge lists, quadratic happens-before closures and direct
// trace-set scans instead of the library's prefix tries and bitmask
// variants. Only suitable for small scenarios.

#include <string>
#include <vector>

#include "dco/model.hpp"
#include "dco/semantics.hpp"

namespace dco::oracle {

/// Valid global traces by resolving choices and enumerating every event
/// order consistent with the explicit constraint pairs.
TraceSet valid_global_traces(const Scenario& s, int loop_bound);

/// Full-permutation filter (n! work); requires <= 8 events per variant.
TraceSet valid_global_traces_by_permutation(const Scenario& s,
                                            int loop_bound);

TraceSet valid_local_traces(const Scenario& s, const std::string& lifeline,
                            int loop_bound);

/// Minimal deviating histories reachable with locally valid sends and
/// causally consistent adversarial delivery.
TraceSet unintended_traces(const Scenario& s, int loop_bound);

/// Complete per-lifeline-valid compositions (loss allowed).
TraceSet composable_complete_traces(const Scenario& s, int loop_bound);

TraceSet locally_uncheckable_traces(const Scenario& s, int loop_bound);

}  // namespace dco::oracle

#endif  // DCO_TESTS_ORACLE_HPP_
