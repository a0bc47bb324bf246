#include "dco/report.hpp"

#include <json.hpp>

#include "dco/observability.hpp"

namespace dco {

bool AnalysisReport::has_violations() const {
  if (locally_controllable && !*locally_controllable) return true;
  if (locally_observable && !*locally_observable) return true;
  return false;
}

AnalysisReport analyze_scenario(const Scenario& s, const Limits& limits,
                                const PropertySelection& properties,
                                int max_coord) {
  AnalysisReport r;
  ScenarioAnalysis ctx(s, limits);
  if (properties.valid) r.valid_traces = ctx.valid_traces();
  if (properties.controllability) {
    r.unintended = unintended_traces(ctx);
    r.locally_controllable = r.unintended->empty();
  }
  if (properties.observability) {
    r.uncheckable = locally_uncheckable_traces(ctx);
    r.locally_observable = r.uncheckable->empty();
  }
  if (properties.coordination) {
    r.coordination_bound = max_coord;
    SynthesisResult synth = synthesize_minimal_coordination(s, limits,
                                                            max_coord);
    switch (synth.status) {
      case SynthesisResult::Status::AlreadySatisfied:
        r.coordination_status = AnalysisReport::CoordinationStatus::
            AlreadySatisfied;
        break;
      case SynthesisResult::Status::Synthesized:
        r.coordination_status = AnalysisReport::CoordinationStatus::Synthesized;
        r.coordination = synth.refined->added;
        break;
      case SynthesisResult::Status::NotFound:
        r.coordination_status = AnalysisReport::CoordinationStatus::NotFound;
        break;
    }
  }
  return r;
}

namespace {

std::string render_trace_set(const TraceSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ", ";
    out += render_trace(set[i]);
  }
  out += "}";
  return out;
}

}  // namespace

std::string render_report(const AnalysisReport& r) {
  std::string out;
  if (r.valid_traces)
    out += "Valid Traces: " + render_trace_set(*r.valid_traces) + "\n";
  if (r.locally_controllable)
    out += std::string("Locally Controllable: ") +
           (*r.locally_controllable ? "true" : "false") + "\n";
  if (r.unintended) {
    TraceSet set;
    for (const auto& u : *r.unintended) set.push_back(u.trace);
    out += "Unintended Traces: " + render_trace_set(set) + "\n";
  }
  if (r.locally_observable)
    out += std::string("Locally Observable: ") +
           (*r.locally_observable ? "true" : "false") + "\n";
  if (r.uncheckable)
    out += "Locally Uncheckable Traces: " + render_trace_set(*r.uncheckable) +
           "\n";
  switch (r.coordination_status) {
    case AnalysisReport::CoordinationStatus::NotRequested:
      break;
    case AnalysisReport::CoordinationStatus::AlreadySatisfied:
      out += "Coordination Messages: none required\n";
      break;
    case AnalysisReport::CoordinationStatus::NotFound:
      out += "Coordination Messages: none found within bound " +
             std::to_string(r.coordination_bound) + "\n";
      break;
    case AnalysisReport::CoordinationStatus::Synthesized: {
      out += "Coordination Messages: {";
      for (std::size_t i = 0; i < r.coordination.size(); ++i) {
        if (i) out += ", ";
        out += render_coordination(r.coordination[i]);
      }
      out += "}\n";
      break;
    }
  }
  return out;
}

std::string export_report_json(const AnalysisReport& r) {
  nlohmann::ordered_json doc;
  auto trace_array = [](const Trace& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& part : render_trace_events(t)) arr.push_back(part);
    return arr;
  };
  auto set_array = [&](const TraceSet& set) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& t : set) arr.push_back(trace_array(t));
    return arr;
  };

  if (r.valid_traces) doc["valid_traces"] = set_array(*r.valid_traces);
  if (r.locally_controllable)
    doc["locally_controllable"] = *r.locally_controllable;
  if (r.unintended) {
    TraceSet set;
    for (const auto& u : *r.unintended) set.push_back(u.trace);
    doc["unintended_traces"] = set_array(set);
  }
  if (r.locally_observable) doc["locally_observable"] = *r.locally_observable;
  if (r.uncheckable)
    doc["locally_uncheckable_traces"] = set_array(*r.uncheckable);

  if (r.coordination_status !=
      AnalysisReport::CoordinationStatus::NotRequested) {
    nlohmann::ordered_json coord;
    switch (r.coordination_status) {
      case AnalysisReport::CoordinationStatus::AlreadySatisfied:
        coord["status"] = "none required";
        break;
      case AnalysisReport::CoordinationStatus::NotFound:
        coord["status"] = "none found within bound " +
                          std::to_string(r.coordination_bound);
        break;
      default:
        coord["status"] = "synthesized";
        break;
    }
    nlohmann::ordered_json messages = nlohmann::ordered_json::array();
    for (const auto& cm : r.coordination) {
      nlohmann::ordered_json one;
      one["name"] = cm.name;
      one["from"] = cm.from;
      one["to"] = cm.to;
      one["after"] = render_event(cm.after, false);
      one["before"] = cm.before ? render_event(*cm.before, false)
                                : "end-of-" + cm.to;
      messages.push_back(std::move(one));
    }
    coord["messages"] = std::move(messages);
    doc["coordination_messages"] = std::move(coord);
  }
  return doc.dump(2) + "\n";
}

}  // namespace dco
