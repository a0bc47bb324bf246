#ifndef DCO_ENFORCEMENT_HPP_
#define DCO_ENFORCEMENT_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dco/controllability.hpp"
#include "dco/observability.hpp"
#include "dco/semantics.hpp"

namespace dco {

/// A synthesized message. The send is placed immediately after `after` in
/// the from-lifeline's order, the receive immediately before `before` in
/// the to-lifeline's order (or appended at the to-lifeline's end when
/// `before` is absent). Anchor events always carry occurrence 1 and stand
/// for the anchored message occurrence in the fragment tree.
struct CoordinationMessage {
  std::string name;  // Ctrl<k>; empty for an unnamed candidate
  std::string from;
  Event after;
  std::string to;
  std::optional<Event> before;

  bool operator==(const CoordinationMessage&) const = default;
};

/// `Ctrl1: L3 -> L2 after ?m2@L3 before !m3@L2` (name omitted while
/// unnamed; `before end-of-<L>` for the append case).
std::string render_coordination(const CoordinationMessage& cm);

enum class DeviationKind { Controllability, Observability };

/// Where a violation witness departs from the valid behaviors. For a
/// premature-end observability witness the offending event is the lost
/// send and `missing` holds its never-delivered receive; otherwise
/// `missing` holds the events required before the offending event in
/// every valid continuation but absent from the witness, and
/// `maximal_missing` the latest of those (the candidate anchors).
struct DeviationPoint {
  DeviationKind kind = DeviationKind::Controllability;
  Event offending;
  bool premature_end = false;
  std::vector<Event> missing;
  std::vector<Event> maximal_missing;
  Trace witness;
};

struct RefinedScenario {
  Scenario scenario;
  std::vector<CoordinationMessage> added;
};

enum class InsertErrorKind {
  AnchorNotFound,
  CycleIntroduced,
  DifferentOperands,
  AdjacencyUnsatisfiable
};

struct InsertError {
  InsertErrorKind kind = InsertErrorKind::AnchorNotFound;
  std::string message;
};

using InsertResult = std::variant<Scenario, InsertError>;

std::vector<DeviationPoint> deviation_points(
    const ScenarioAnalysis& ctx, const std::vector<UnintendedTrace>& unintended,
    const TraceSet& uncheckable);

/// Candidate pool: hint-derived candidates first (anchored at the maximal
/// missing predecessors, plus acknowledgment candidates for lost
/// messages), then the exhaustive fallback over all insertable anchor
/// pairs. Each tier is shortlex-ordered on its rendered form.
std::vector<CoordinationMessage> candidate_coordinations(
    const Scenario& s, const std::vector<DeviationPoint>& points);

/// Inserts the coordination messages in order; the result satisfies
/// validate_scenario() == {} and erase_coordination(result) == s.
InsertResult insert(const Scenario& s,
                    const std::vector<CoordinationMessage>& coords);

/// True iff the refined scenario is locally controllable and observable,
/// has at least one valid trace, and preserves every lifeline's valid
/// local traces once coordination events are erased.
bool verify_candidate_set(const Scenario& s,
                          const std::vector<CoordinationMessage>& coords,
                          const Limits& limits);

struct SynthesisResult {
  enum class Status { AlreadySatisfied, Synthesized, NotFound };
  Status status = Status::AlreadySatisfied;
  std::optional<RefinedScenario> refined;
  int bound = 0;  // subset size bound that was searched (NotFound)
};

/// Breadth-first subset search over the candidate pool (all size-1
/// subsets, then size-2, ... up to max_coord), returning the first subset
/// that verifies; names Ctrl1, Ctrl2, ... are assigned in subset order.
SynthesisResult synthesize_minimal_coordination(const Scenario& s,
                                                const Limits& limits,
                                                int max_coord = 4);

}  // namespace dco

#endif  // DCO_ENFORCEMENT_HPP_
