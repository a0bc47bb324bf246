#include "dco/xmi.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <map>
#include <set>
#include <sstream>

namespace dco {

namespace {

using boost::property_tree::ptree;

std::string attr(const ptree& node, const std::string& name) {
  if (auto child = node.get_child_optional("<xmlattr>." + name))
    return child->get_value<std::string>();
  return {};
}

// xmi:type with the uml: prefix stripped; falls back to the tag name for
// documents that use typed tags directly (<uml:Interaction ...>).
std::string element_kind(const std::string& tag, const ptree& node) {
  std::string type = attr(node, "xmi:type");
  if (type.empty()) type = tag;
  auto colon = type.find(':');
  if (colon != std::string::npos) type = type.substr(colon + 1);
  return type;
}

std::string describe(const std::string& tag, const ptree& node) {
  std::string id = attr(node, "xmi:id");
  return id.empty() ? tag : id;
}

struct MessageInfo {
  std::string xmi_id;
  std::string name;
  std::string sort;
  std::string send_event;
  std::string receive_event;
};

struct OccurrenceInfo {
  std::string covered;  // lifeline xmi:id
  std::string message;  // message xmi:id
};

class Importer {
 public:
  explicit Importer(int loop_cap) : loop_cap_(loop_cap) {}

  ImportResult run(const std::string& xml_text) {
    ptree doc;
    try {
      std::istringstream in(xml_text);
      boost::property_tree::read_xml(in, doc);
    } catch (const boost::property_tree::xml_parser_error& e) {
      errors_.push_back(ImportError{"document", std::string("malformed XML: ") +
                                                    e.message()});
      return finish();
    }

    const ptree* interaction = find_interaction(doc);
    if (interaction == nullptr) {
      errors_.push_back(
          ImportError{"document", "no uml:Interaction element found"});
      return finish();
    }

    scenario_ = make_scenario(attr(*interaction, "name"));
    if (scenario_.name.empty()) scenario_.name = "imported";

    collect_lifelines(*interaction);
    collect_messages(*interaction);

    std::vector<Fragment> body;
    walk_fragments(*interaction, body);
    scenario_.body = Fragment{SeqNode{std::move(body)}};

    for (const auto& [id, idx] : patch_targets_) {
      auto sender = send_lifeline_.find(id);
      auto receiver = receive_lifeline_.find(id);
      if (sender != send_lifeline_.end())
        scenario_.messages[idx].sender = sender->second;
      if (receiver != receive_lifeline_.end())
        scenario_.messages[idx].receiver = receiver->second;
    }

    check_message_ends();
    if (errors_.empty())
      for (const auto& d : validate_scenario(scenario_))
        errors_.push_back(ImportError{scenario_.name, d});
    return finish();
  }

 private:
  ImportResult finish() {
    ImportResult result;
    if (errors_.empty()) result.scenario = std::move(scenario_);
    result.errors = std::move(errors_);
    result.warnings = std::move(warnings_);
    return result;
  }

  const ptree* find_interaction(const ptree& node) {
    for (const auto& [tag, child] : node) {
      if (tag == "<xmlattr>") continue;
      if (element_kind(tag, child) == "Interaction") return &child;
      if (const ptree* found = find_interaction(child)) return found;
    }
    return nullptr;
  }

  void collect_lifelines(const ptree& interaction) {
    for (const auto& [tag, child] : interaction) {
      if (tag != "lifeline") continue;
      std::string id = attr(child, "xmi:id");
      std::string name = attr(child, "name");
      if (name.empty()) name = id;
      lifeline_by_id_[id] = name;
      scenario_.lifelines.push_back(Lifeline{name, ""});
    }
  }

  void collect_messages(const ptree& interaction) {
    for (const auto& [tag, child] : interaction) {
      if (tag != "message") continue;
      MessageInfo info;
      info.xmi_id = attr(child, "xmi:id");
      info.name = attr(child, "name");
      info.sort = attr(child, "messageSort");
      info.send_event = attr(child, "sendEvent");
      info.receive_event = attr(child, "receiveEvent");
      if (info.sort != "asynchCall" && info.sort != "asynchSignal") {
        errors_.push_back(ImportError{
            describe(tag, child),
            "synchronous message '" + info.name +
                "' is not supported; remodel it as asynchCall or "
                "asynchSignal"});
      }
      messages_[info.xmi_id] = info;
    }
  }

  void check_message_ends() {
    for (const auto& [id, info] : messages_) {
      bool send_seen = occurrence_seen_.count(info.send_event) != 0;
      bool receive_seen = occurrence_seen_.count(info.receive_event) != 0;
      if (info.send_event.empty() || info.receive_event.empty() ||
          !send_seen || !receive_seen)
        errors_.push_back(ImportError{
            id, "message '" + info.name +
                    "' lacks a send or receive occurrence"});
    }
  }

  void walk_fragments(const ptree& scope, std::vector<Fragment>& out) {
    for (const auto& [tag, child] : scope) {
      if (tag == "<xmlattr>" || tag == "lifeline" || tag == "message" ||
          tag == "guard")
        continue;
      if (tag != "fragment" && tag != "operand") {
        // Unknown children of an interaction/operand (ownedComment and
        // similar) are outside the walked structure; report them only if
        // they claim to be interaction fragments.
        continue;
      }
      std::string kind = element_kind(tag, child);
      if (kind == "MessageOccurrenceSpecification") {
        handle_occurrence(tag, child, out);
      } else if (kind == "CombinedFragment") {
        handle_combined(tag, child, out);
      } else if (kind == "ExecutionOccurrenceSpecification" ||
                 kind == "BehaviorExecutionSpecification" ||
                 kind == "ActionExecutionSpecification") {
        warnings_.push_back("ignoring execution specification " +
                            describe(tag, child));
      } else {
        errors_.push_back(ImportError{
            describe(tag, child),
            "unsupported element kind " + kind});
      }
    }
  }

  void handle_occurrence(const std::string& tag, const ptree& node,
                         std::vector<Fragment>& out) {
    OccurrenceInfo occ;
    occ.covered = attr(node, "covered");
    if (occ.covered.empty())
      if (auto covered = node.get_child_optional("covered"))
        occ.covered = attr(*covered, "xmi:idref");
    occ.message = attr(node, "message");
    std::string id = attr(node, "xmi:id");
    occurrence_seen_.insert(id);

    auto it = messages_.find(occ.message);
    if (it == messages_.end()) {
      errors_.push_back(ImportError{
          describe(tag, node), "occurrence references unknown message"});
      return;
    }
    const MessageInfo& info = it->second;
    auto lifeline = lifeline_by_id_.find(occ.covered);
    if (lifeline == lifeline_by_id_.end()) {
      errors_.push_back(ImportError{
          describe(tag, node), "occurrence covers unknown lifeline"});
      return;
    }
    if (id == info.send_event) {
      // The send occurrence fixes the message's position; the receive end
      // only completes the pair.
      send_lifeline_[occ.message] = lifeline->second;
      emit_message(info, out);
    } else if (id == info.receive_event) {
      receive_lifeline_[occ.message] = lifeline->second;
    } else {
      errors_.push_back(ImportError{
          describe(tag, node),
          "occurrence is neither send nor receive end of its message"});
    }
  }

  void emit_message(const MessageInfo& info, std::vector<Fragment>& out) {
    out.push_back(Fragment{MsgNode{info.name}});
    // Sender/receiver get patched once both ends were walked.
    scenario_.messages.push_back(MessageDecl{info.name, "", "", false});
    patch_targets_[info.xmi_id] = scenario_.messages.size() - 1;
  }

  void handle_combined(const std::string& tag, const ptree& node,
                       std::vector<Fragment>& out) {
    std::string op = attr(node, "interactionOperator");
    if (op.empty()) op = "alt";
    if (op != "alt" && op != "opt" && op != "loop") {
      errors_.push_back(ImportError{
          describe(tag, node), "unsupported combined fragment '" + op + "'"});
      return;
    }

    std::vector<std::vector<Fragment>> operands;
    std::vector<const ptree*> operand_nodes;
    for (const auto& [child_tag, child] : node) {
      if (child_tag != "operand") continue;
      operand_nodes.push_back(&child);
      std::vector<Fragment> body;
      walk_fragments(child, body);
      operands.push_back(std::move(body));
    }
    if (operands.empty()) {
      errors_.push_back(
          ImportError{describe(tag, node), "combined fragment has no operand"});
      return;
    }

    if (op == "loop") {
      unsigned lo = 0;
      unsigned hi = static_cast<unsigned>(loop_cap_);
      if (auto guard = operand_nodes.front()->get_child_optional("guard")) {
        if (auto minint = guard->get_child_optional("minint"))
          lo = minint->get<unsigned>("<xmlattr>.value", 0);
        if (auto maxint = guard->get_child_optional("maxint"))
          hi = maxint->get<unsigned>("<xmlattr>.value", hi);
      }
      out.push_back(Fragment{LoopNode{lo, hi, std::move(operands.front())}});
      if (operands.size() > 1)
        errors_.push_back(ImportError{describe(tag, node),
                                      "loop with more than one operand"});
      return;
    }
    if (op == "opt") {
      AltNode alt;
      alt.operands.push_back(std::move(operands.front()));
      alt.operands.emplace_back();
      out.push_back(Fragment{std::move(alt)});
      if (operands.size() > 1)
        errors_.push_back(ImportError{describe(tag, node),
                                      "opt with more than one operand"});
      return;
    }
    AltNode alt;
    alt.operands = std::move(operands);
    out.push_back(Fragment{std::move(alt)});
  }

  int loop_cap_;
  Scenario scenario_ = make_scenario("");
  std::vector<ImportError> errors_;
  std::vector<std::string> warnings_;
  std::map<std::string, std::string> lifeline_by_id_;
  std::map<std::string, MessageInfo> messages_;
  std::map<std::string, std::string> send_lifeline_;
  std::map<std::string, std::string> receive_lifeline_;
  std::map<std::string, std::size_t> patch_targets_;
  std::set<std::string> occurrence_seen_;
};

}  // namespace

ImportResult import_xmi(const std::string& xml_text, int loop_bound_cap) {
  Importer importer(loop_bound_cap);
  return importer.run(xml_text);
}

}  // namespace dco
