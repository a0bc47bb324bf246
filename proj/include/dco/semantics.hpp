#ifndef DCO_SEMANTICS_HPP_
#define DCO_SEMANTICS_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dco/model.hpp"

namespace dco {

enum class Direction { Send, Receive };

/// A directed message occurrence at a lifeline: the emission `!m@L` or
/// reception `?m@L` of occurrence k of message m. Occurrence indices are
/// 1-based and count loop iterations.
struct Event {
  Direction dir = Direction::Send;
  std::string message;
  int occurrence = 1;
  std::string lifeline;

  auto operator<=>(const Event&) const = default;
};

using Trace = std::vector<Event>;

/// Finite set of traces with deterministic iteration order (shortlex over
/// the rendered traces). Producers return it sorted and deduplicated.
using TraceSet = std::vector<Trace>;

/// Enumeration limits shared by every analysis. The budget bounds the
/// number of traces/states an enumeration may touch; exceeding it raises
/// BudgetExceeded instead of silently truncating.
struct Limits {
  int loop_bound = 2;
  std::size_t budget = 100000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// One alt/loop resolution of a scenario: a labeled strict partial order
/// over its events. `preds` holds, per event index, the bitmask of all
/// (transitive) predecessors; events are listed in unfolded tree order
/// with each send immediately followed by its receive.
struct FlatVariant {
  std::vector<int> choices;  // operand index / iteration count, in DFS order
  std::vector<Event> events;
  std::vector<std::uint64_t> preds;

  bool before(std::size_t a, std::size_t b) const {
    return (preds[b] >> a) & 1u;
  }
};

/// Resolves every alt operand choice and loop iteration count (bounded by
/// limits.loop_bound) into flat partial orders, depth-first, operands and
/// iteration counts ascending.
std::vector<FlatVariant> unfold(const Scenario& s, const Limits& limits);

/// All linear extensions of all variants, deduplicated, shortlex order.
TraceSet valid_global_traces(const Scenario& s, const Limits& limits);

/// Subsequence of t at lifeline L.
Trace project(const Trace& t, const std::string& lifeline);

/// Projections of every valid global trace onto L, deduplicated.
TraceSet valid_local_traces(const Scenario& s, const std::string& lifeline,
                            const Limits& limits);

/// True iff t is a prefix of some valid global trace.
bool is_valid_prefix(const Scenario& s, const Trace& t, const Limits& limits);

// --- rendering (paper notation) and ordering ---

/// `!m@L` / `?m@L`, or `!m#k@L` when `numbered` asks for explicit
/// occurrence indices.
std::string render_event(const Event& e, bool numbered);

/// `[!m1@L1, ?m1@L2]`; occurrence indices are shown for a message iff the
/// trace holds more than one occurrence of it.
std::string render_trace(const Trace& t);

/// Per-event rendered strings of t (same numbering rule as render_trace).
std::vector<std::string> render_trace_events(const Trace& t);

/// Shortlex on rendered traces: by length, then lexicographic on the
/// rendered event strings.
bool trace_shortlex_less(const Trace& a, const Trace& b);

/// Sorts shortlex and removes duplicates in place.
void normalize_trace_set(TraceSet& set);

/// Precomputed per-scenario structures shared by the analyses. Variants
/// and local traces are derived directly from the partial orders (a
/// lifeline's projection of any linearization is its chain); the global
/// trace set is enumerated lazily on first use. Not safe for concurrent
/// use of one instance without external synchronization.
class ScenarioAnalysis {
 public:
  ScenarioAnalysis(const Scenario& s, const Limits& limits);

  const Scenario& scenario() const { return *scenario_; }
  const Limits& limits() const { return limits_; }
  const std::vector<FlatVariant>& variants() const { return variants_; }
  const TraceSet& valid_traces() const;
  const TraceSet& local_traces(const std::string& lifeline) const;

  bool has_valid_trace() const { return !variants_.empty(); }
  bool is_valid_prefix(const Trace& t) const;
  /// Membership in valid_traces() without enumerating it.
  bool is_valid_complete(const Trace& t) const;

 private:
  const Scenario* scenario_;
  Limits limits_;
  std::vector<FlatVariant> variants_;
  mutable TraceSet valid_;
  mutable bool valid_computed_ = false;
  std::map<std::string, TraceSet> locals_;
  TraceSet empty_;
};

}  // namespace dco

#endif  // DCO_SEMANTICS_HPP_
