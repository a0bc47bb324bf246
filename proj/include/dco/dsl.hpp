#ifndef DCO_DSL_HPP_
#define DCO_DSL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dco/model.hpp"

namespace dco {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  SourceSpan span;
  std::string message;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<ParseError> errors;

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

/// Parses the canonical `.dco` text format:
///
///   scenario <ident>
///   lifeline <id> ["<display name>"]
///   [coord] <name>: <id> -> <id>
///   alt { ... } else { ... }
///   opt { ... }
///   loop(<min>,<max>) { ... }
///
/// `#` starts a comment. Accepts LF and CRLF. A successful parse always
/// satisfies validate_scenario() == {}.
ParseResult parse_scenario(const std::string& text);

/// Canonical rendering; parse_scenario(render_scenario(s)) == s for every
/// valid s. Emits LF line endings and renders a two-operand alt with an
/// empty second operand as `opt`.
std::string render_scenario(const Scenario& s);

}  // namespace dco

#endif  // DCO_DSL_HPP_
