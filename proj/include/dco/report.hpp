#ifndef DCO_REPORT_HPP_
#define DCO_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dco/controllability.hpp"
#include "dco/enforcement.hpp"
#include "dco/semantics.hpp"

namespace dco {

/// Which property groups an analysis run covers.
struct PropertySelection {
  bool valid = true;
  bool controllability = true;
  bool observability = true;
  bool coordination = true;
};

struct AnalysisReport {
  std::optional<TraceSet> valid_traces;
  std::optional<bool> locally_controllable;
  std::optional<std::vector<UnintendedTrace>> unintended;
  std::optional<bool> locally_observable;
  std::optional<TraceSet> uncheckable;

  enum class CoordinationStatus {
    NotRequested,
    AlreadySatisfied,
    Synthesized,
    NotFound
  };
  CoordinationStatus coordination_status = CoordinationStatus::NotRequested;
  std::vector<CoordinationMessage> coordination;
  int coordination_bound = 4;

  bool has_violations() const;
};

/// Runs the selected analyses. Throws BudgetExceeded when an enumeration
/// outgrows limits.budget.
AnalysisReport analyze_scenario(const Scenario& s, const Limits& limits,
                                const PropertySelection& properties,
                                int max_coord = 4);

/// Line-oriented text report, one property per line, deterministic bytes,
/// LF endings.
std::string render_report(const AnalysisReport& r);

/// JSON document with keys valid_traces, locally_controllable,
/// unintended_traces, locally_observable, locally_uncheckable_traces,
/// coordination_messages (requested ones only, in that order); byte
/// identical across runs.
std::string export_report_json(const AnalysisReport& r);

}  // namespace dco

#endif  // DCO_REPORT_HPP_
