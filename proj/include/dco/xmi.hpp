#ifndef DCO_XMI_HPP_
#define DCO_XMI_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dco/model.hpp"

namespace dco {

struct ImportError {
  std::string element;  // xmi:id or tag of the offending element
  std::string message;
};

struct ImportResult {
  std::optional<Scenario> scenario;
  std::vector<ImportError> errors;
  std::vector<std::string> warnings;

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

/// Imports the supported UML2/XMI interaction subset: Interaction,
/// Lifeline, asynchronous Message with both occurrence ends,
/// MessageOccurrenceSpecification, CombinedFragment alt/opt/loop with
/// loop bounds on the operand guard (minint/maxint; absent bounds default
/// to (0, loop_bound_cap)). Execution specifications and time constraints
/// are skipped with a warning; anything else outside the subset is an
/// error naming the element. Synchronous messages are rejected with a
/// hint to remodel them as asynchronous ones.
ImportResult import_xmi(const std::string& xml_text, int loop_bound_cap = 2);

}  // namespace dco

#endif  // DCO_XMI_HPP_
