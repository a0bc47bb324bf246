#include "dco/enforcement.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace dco {

std::string render_coordination(const CoordinationMessage& cm) {
  std::string out;
  if (!cm.name.empty()) out += cm.name + ": ";
  out += cm.from + " -> " + cm.to;
  out += " after " + render_event(cm.after, false);
  if (cm.before)
    out += " before " + render_event(*cm.before, false);
  else
    out += " before end-of-" + cm.to;
  return out;
}

namespace {

Event at_occurrence_one(const Event& e) {
  return Event{e.dir, e.message, 1, e.lifeline};
}

bool shortlex_str_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Fills missing / maximal_missing of a mid-trace deviation point from the
// valid traces extending the witness's valid prefix.
void fill_missing(const ScenarioAnalysis& ctx, DeviationPoint& p) {
  const Trace& w = p.witness;
  Trace prefix(w.begin(), w.end() - 1);
  const Event& e = p.offending;

  bool first = true;
  std::set<Event> missing;
  std::vector<Trace> considered;
  for (const auto& t : ctx.valid_traces()) {
    if (t.size() < prefix.size()) continue;
    if (!std::equal(prefix.begin(), prefix.end(), t.begin())) continue;
    auto it = std::find(t.begin(), t.end(), e);
    if (it == t.end()) continue;
    considered.push_back(t);
    std::set<Event> preds(t.begin(), it);
    for (const auto& pe : prefix) preds.erase(pe);
    if (first) {
      missing = std::move(preds);
      first = false;
    } else {
      std::set<Event> kept;
      std::set_intersection(missing.begin(), missing.end(), preds.begin(),
                            preds.end(), std::inserter(kept, kept.begin()));
      missing = std::move(kept);
    }
  }
  p.missing.assign(missing.begin(), missing.end());

  // Maximal elements: nothing in the set follows them in every considered
  // trace. Anchoring at these implies the earlier missing events too.
  for (const auto& f : p.missing) {
    bool dominated = false;
    for (const auto& g : p.missing) {
      if (f == g) continue;
      bool f_before_g_everywhere = true;
      for (const auto& t : considered) {
        auto fi = std::find(t.begin(), t.end(), f);
        auto gi = std::find(t.begin(), t.end(), g);
        if (fi == t.end() || gi == t.end() || fi > gi) {
          f_before_g_everywhere = false;
          break;
        }
      }
      if (f_before_g_everywhere) {
        dominated = true;
        break;
      }
    }
    if (!dominated) p.maximal_missing.push_back(f);
  }
}

// Tree events of every non-coordination message, walk order.
std::vector<Event> anchor_events(const Scenario& s) {
  std::vector<Event> out;
  for (const auto& name : message_walk_order(s.body)) {
    const MessageDecl* m = find_message(s, name);
    if (m == nullptr || m->is_coordination) continue;
    out.push_back(Event{Direction::Send, name, 1, m->sender});
    out.push_back(Event{Direction::Receive, name, 1, m->receiver});
  }
  return out;
}

// --- insertion ---

bool fragment_touches(const Fragment& f, const Scenario& s,
                      const std::string& lifeline) {
  if (const auto* m = std::get_if<MsgNode>(&f.node)) {
    const MessageDecl* decl = find_message(s, m->message);
    if (decl == nullptr || decl->is_coordination) return false;
    return decl->sender == lifeline || decl->receiver == lifeline;
  }
  if (const auto* seq = std::get_if<SeqNode>(&f.node)) {
    for (const auto& c : seq->items)
      if (fragment_touches(c, s, lifeline)) return true;
    return false;
  }
  if (const auto* alt = std::get_if<AltNode>(&f.node)) {
    for (const auto& op : alt->operands)
      for (const auto& c : op)
        if (fragment_touches(c, s, lifeline)) return true;
    return false;
  }
  const auto& loop = std::get<LoopNode>(f.node);
  for (const auto& c : loop.body)
    if (fragment_touches(c, s, lifeline)) return true;
  return false;
}

std::vector<Fragment>* find_message_list(Fragment& f, const std::string& name,
                                         std::size_t& index) {
  auto search_list = [&](std::vector<Fragment>& items) -> std::vector<Fragment>* {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (const auto* m = std::get_if<MsgNode>(&items[i].node)) {
        if (m->message == name) {
          index = i;
          return &items;
        }
      } else if (auto* found = find_message_list(items[i], name, index)) {
        return found;
      }
    }
    return nullptr;
  };
  if (auto* seq = std::get_if<SeqNode>(&f.node)) return search_list(seq->items);
  if (auto* alt = std::get_if<AltNode>(&f.node)) {
    for (auto& op : alt->operands)
      for (std::size_t i = 0; i < op.size(); ++i) {
        if (const auto* m = std::get_if<MsgNode>(&op[i].node)) {
          if (m->message == name) {
            index = i;
            return &op;
          }
        } else if (auto* found = find_message_list(op[i], name, index)) {
          return found;
        }
      }
    return nullptr;
  }
  if (auto* loop = std::get_if<LoopNode>(&f.node)) {
    for (std::size_t i = 0; i < loop->body.size(); ++i) {
      if (const auto* m = std::get_if<MsgNode>(&loop->body[i].node)) {
        if (m->message == name) {
          index = i;
          return &loop->body;
        }
      } else if (auto* found = find_message_list(loop->body[i], name, index)) {
        return found;
      }
    }
    return nullptr;
  }
  return nullptr;
}

// Rebuilds the declaration list in fragment-tree walk order.
void renumber_decls(Scenario& s) {
  std::vector<MessageDecl> ordered;
  for (const auto& name : message_walk_order(s.body)) {
    const MessageDecl* m = find_message(s, name);
    assert(m != nullptr);
    ordered.push_back(*m);
  }
  s.messages = std::move(ordered);
}

std::optional<InsertError> insert_one(Scenario& s,
                                      const CoordinationMessage& cm) {
  std::size_t idx_a = 0;
  std::vector<Fragment>* list = find_message_list(s.body, cm.after.message,
                                                  idx_a);
  if (list == nullptr)
    return InsertError{InsertErrorKind::AnchorNotFound,
                       "after anchor " + render_event(cm.after, false) +
                           " not found"};

  std::size_t bound;  // insertion may land at any p in (idx_a, bound]
  std::size_t idx_b = 0;
  if (cm.before) {
    std::size_t i = 0;
    bool in_list = false;
    for (; i < list->size(); ++i) {
      const auto* m = std::get_if<MsgNode>(&(*list)[i].node);
      if (m != nullptr && m->message == cm.before->message) {
        in_list = true;
        break;
      }
    }
    if (!in_list) {
      std::size_t ignore = 0;
      if (find_message_list(s.body, cm.before->message, ignore) != nullptr)
        return InsertError{InsertErrorKind::DifferentOperands,
                           "anchors of " + render_coordination(cm) +
                               " sit in different fragment scopes"};
      return InsertError{InsertErrorKind::AnchorNotFound,
                         "before anchor " + render_event(*cm.before, false) +
                             " not found"};
    }
    idx_b = i;
    if (idx_b <= idx_a)
      return InsertError{InsertErrorKind::CycleIntroduced,
                         "before anchor precedes after anchor for " +
                             render_coordination(cm)};
    bound = idx_b;
  } else {
    bound = list->size();
  }

  // First position where the send stays adjacent to the after anchor on
  // `from` and the receive adjacent to the before anchor (or final) on
  // `to`. Coordination messages inserted earlier do not count.
  std::optional<std::size_t> position;
  for (std::size_t p = idx_a + 1; p <= bound; ++p) {
    bool ok = true;
    for (std::size_t q = idx_a + 1; q < p && ok; ++q)
      if (fragment_touches((*list)[q], s, cm.from)) ok = false;
    std::size_t to_end = cm.before ? idx_b : list->size();
    for (std::size_t q = p; q < to_end && ok; ++q)
      if (fragment_touches((*list)[q], s, cm.to)) ok = false;
    if (ok) {
      position = p;
      break;
    }
  }
  if (!position)
    return InsertError{InsertErrorKind::AdjacencyUnsatisfiable,
                       "no insertion point keeps " + render_coordination(cm) +
                           " adjacent to its anchors"};

  list->insert(list->begin() + static_cast<std::ptrdiff_t>(*position),
               Fragment{MsgNode{cm.name}});
  s.messages.push_back(MessageDecl{cm.name, cm.from, cm.to, true});

  if (!cm.before) {
    // The receive must end the to-lifeline's order: nothing after the new
    // occurrence anywhere in the tree may touch `to`.
    bool seen = false;
    bool to_after = false;
    for (const auto& name : message_walk_order(s.body)) {
      if (name == cm.name) {
        seen = true;
        continue;
      }
      if (!seen) continue;
      const MessageDecl* m = find_message(s, name);
      if (m == nullptr || m->is_coordination) continue;
      if (m->sender == cm.to || m->receiver == cm.to) {
        to_after = true;
        break;
      }
    }
    if (to_after)
      return InsertError{InsertErrorKind::AdjacencyUnsatisfiable,
                         "events at " + cm.to + " follow the appended " +
                             render_coordination(cm)};
  }
  renumber_decls(s);
  return std::nullopt;
}

bool erased_locals_match(const ScenarioAnalysis& original,
                         const ScenarioAnalysis& refined) {
  const Scenario& rs = refined.scenario();
  for (const auto& l : original.scenario().lifelines) {
    TraceSet erased;
    for (const auto& t : refined.local_traces(l.id)) {
      Trace kept;
      for (const auto& e : t) {
        const MessageDecl* m = find_message(rs, e.message);
        if (m == nullptr || !m->is_coordination) kept.push_back(e);
      }
      erased.push_back(std::move(kept));
    }
    normalize_trace_set(erased);
    if (erased != original.local_traces(l.id)) return false;
  }
  return true;
}

bool verify_refined(const ScenarioAnalysis& original, const Scenario& refined,
                    const Limits& limits) {
  ScenarioAnalysis ctx(refined, limits);
  if (ctx.valid_traces().empty()) return false;
  if (!erased_locals_match(original, ctx)) return false;
  if (!is_locally_controllable(ctx)) return false;
  if (!is_locally_observable(ctx)) return false;
  return true;
}

}  // namespace

std::vector<DeviationPoint> deviation_points(
    const ScenarioAnalysis& ctx, const std::vector<UnintendedTrace>& unintended,
    const TraceSet& uncheckable) {
  std::vector<DeviationPoint> points;

  for (const auto& u : unintended) {
    DeviationPoint p;
    p.kind = DeviationKind::Controllability;
    p.witness = u.trace;
    p.offending = u.trace.at(u.deviation_index);
    fill_missing(ctx, p);
    points.push_back(std::move(p));
  }

  for (const auto& t : uncheckable) {
    DeviationPoint p;
    p.kind = DeviationKind::Observability;
    p.witness = t;

    // First step that leaves the valid-prefix set, if any.
    std::size_t deviated_at = t.size();
    for (std::size_t k = 0; k < t.size(); ++k) {
      Trace head(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      if (!ctx.is_valid_prefix(head)) {
        deviated_at = k;
        break;
      }
    }
    if (deviated_at < t.size()) {
      p.offending = t[deviated_at];
      p.witness = Trace(t.begin(),
                        t.begin() + static_cast<std::ptrdiff_t>(deviated_at) +
                            1);
      fill_missing(ctx, p);
      p.witness = t;
    } else {
      // The whole trace is a valid prefix that stops early: blame the
      // first lost send and record its never-delivered receive.
      p.premature_end = true;
      std::set<std::pair<std::string, int>> received;
      for (const auto& e : t)
        if (e.dir == Direction::Receive)
          received.insert({e.message, e.occurrence});
      for (const auto& e : t) {
        if (e.dir != Direction::Send) continue;
        if (received.count({e.message, e.occurrence})) continue;
        p.offending = e;
        const MessageDecl* m = find_message(ctx.scenario(), e.message);
        if (m != nullptr) {
          Event receive{Direction::Receive, e.message, e.occurrence,
                        m->receiver};
          p.missing.push_back(receive);
          p.maximal_missing.push_back(receive);
        }
        break;
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<CoordinationMessage> candidate_coordinations(
    const Scenario& s, const std::vector<DeviationPoint>& points) {
  std::vector<CoordinationMessage> tier1;
  auto push_unique = [](std::vector<CoordinationMessage>& pool,
                        CoordinationMessage cm) {
    if (std::find(pool.begin(), pool.end(), cm) == pool.end())
      pool.push_back(std::move(cm));
  };

  for (const auto& p : points) {
    if (p.premature_end) {
      if (p.missing.empty()) continue;
      const Event& lost = p.offending;  // !m@A
      const Event& receive = p.missing.front();
      // Acknowledgment: receiver confirms back to the sender, landing
      // right after the sender's own send (next event on A, or its end).
      CoordinationMessage cm;
      cm.from = receive.lifeline;
      cm.after = at_occurrence_one(receive);
      cm.to = lost.lifeline;
      cm.before = std::nullopt;
      bool seen = false;
      for (const auto& ev : anchor_events(s)) {
        if (ev.message == lost.message && ev.dir == Direction::Send) {
          seen = true;
          continue;
        }
        if (seen && ev.lifeline == lost.lifeline) {
          cm.before = ev;
          break;
        }
      }
      if (cm.from != cm.to) push_unique(tier1, std::move(cm));
      continue;
    }
    const Event& e = p.offending;
    Event delayed = e;
    if (e.dir == Direction::Receive) {
      const MessageDecl* m = find_message(s, e.message);
      if (m == nullptr) continue;
      delayed = Event{Direction::Send, e.message, e.occurrence, m->sender};
    }
    for (const auto& f : p.maximal_missing) {
      if (f.lifeline == delayed.lifeline) continue;
      CoordinationMessage cm;
      cm.from = f.lifeline;
      cm.after = at_occurrence_one(f);
      cm.to = delayed.lifeline;
      cm.before = at_occurrence_one(delayed);
      push_unique(tier1, std::move(cm));
    }
  }

  auto shortlex_rendered = [](const CoordinationMessage& a,
                              const CoordinationMessage& b) {
    return shortlex_str_less(render_coordination(a), render_coordination(b));
  };
  std::sort(tier1.begin(), tier1.end(), shortlex_rendered);

  // Exhaustive fallback: every insertable anchor pair across distinct
  // lifelines, including append-at-end targets. Distinct pairs often pin
  // the identical tree position; verification only sees the refined tree,
  // so such duplicates are dropped (first rendered form wins).
  std::vector<CoordinationMessage> tier2;
  std::vector<Scenario> tier2_refined;
  std::vector<Scenario> tier1_refined;
  auto refined_by = [&s](const CoordinationMessage& cm)
      -> std::optional<Scenario> {
    Scenario scratch = s;
    CoordinationMessage named = cm;
    named.name = "Ctrl1";
    if (insert_one(scratch, named).has_value()) return std::nullopt;
    return scratch;
  };
  for (const auto& cm : tier1)
    if (auto refined = refined_by(cm)) tier1_refined.push_back(*refined);

  std::vector<CoordinationMessage> raw;
  const auto anchors = anchor_events(s);
  for (const auto& after : anchors) {
    for (const auto& before : anchors) {
      if (before.lifeline == after.lifeline) continue;
      raw.push_back(CoordinationMessage{"", after.lifeline, after,
                                        before.lifeline, before});
    }
    for (const auto& l : s.lifelines) {
      if (l.id == after.lifeline) continue;
      raw.push_back(CoordinationMessage{"", after.lifeline, after, l.id,
                                        std::nullopt});
    }
  }
  std::sort(raw.begin(), raw.end(), shortlex_rendered);
  for (const auto& cm : raw) {
    if (std::find(tier1.begin(), tier1.end(), cm) != tier1.end()) continue;
    auto refined = refined_by(cm);
    if (!refined) continue;
    if (std::find(tier1_refined.begin(), tier1_refined.end(), *refined) !=
        tier1_refined.end())
      continue;
    if (std::find(tier2_refined.begin(), tier2_refined.end(), *refined) !=
        tier2_refined.end())
      continue;
    tier2_refined.push_back(std::move(*refined));
    tier2.push_back(cm);
  }

  std::vector<CoordinationMessage> pool = std::move(tier1);
  pool.insert(pool.end(), tier2.begin(), tier2.end());
  return pool;
}

InsertResult insert(const Scenario& s,
                    const std::vector<CoordinationMessage>& coords) {
  Scenario out = s;
  for (const auto& cm : coords) {
    assert(!cm.name.empty());
    if (auto err = insert_one(out, cm)) return *err;
  }
  assert(validate_scenario(out).empty());
  return out;
}

bool verify_candidate_set(const Scenario& s,
                          const std::vector<CoordinationMessage>& coords,
                          const Limits& limits) {
  std::vector<CoordinationMessage> named = coords;
  for (std::size_t i = 0; i < named.size(); ++i)
    if (named[i].name.empty()) named[i].name = "Ctrl" + std::to_string(i + 1);
  InsertResult result = insert(s, named);
  if (std::holds_alternative<InsertError>(result)) return false;
  ScenarioAnalysis original(s, limits);
  return verify_refined(original, std::get<Scenario>(result), limits);
}

namespace {

// Lexicographic enumeration of k-subsets of [0, n).
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SynthesisResult synthesize_minimal_coordination(const Scenario& s,
                                                const Limits& limits,
                                                int max_coord) {
  ScenarioAnalysis ctx(s, limits);
  auto unintended = unintended_traces(ctx);
  auto uncheckable = locally_uncheckable_traces(ctx);
  if (unintended.empty() && uncheckable.empty())
    return SynthesisResult{SynthesisResult::Status::AlreadySatisfied,
                           std::nullopt, max_coord};

  for (const auto& m : s.messages)
    if (m.is_coordination)
      throw std::invalid_argument(
          "synthesis requires a coordination-free scenario");

  auto points = deviation_points(ctx, unintended, uncheckable);
  auto pool = candidate_coordinations(s, points);

  for (int k = 1; k <= max_coord && static_cast<std::size_t>(k) <= pool.size();
       ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    do {
      std::vector<CoordinationMessage> chosen;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        CoordinationMessage cm = pool[idx[i]];
        cm.name = "Ctrl" + std::to_string(i + 1);
        chosen.push_back(std::move(cm));
      }
      InsertResult result = insert(s, chosen);
      if (std::holds_alternative<InsertError>(result)) continue;
      const Scenario& refined = std::get<Scenario>(result);
      if (verify_refined(ctx, refined, limits))
        return SynthesisResult{SynthesisResult::Status::Synthesized,
                               RefinedScenario{refined, chosen}, max_coord};
    } while (next_combination(idx, pool.size()));
  }
  return SynthesisResult{SynthesisResult::Status::NotFound, std::nullopt,
                         max_coord};
}

}  // namespace dco
