#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlp/error.hpp"
#include "wlp/expression.hpp"
#include "wlp/lattice.hpp"

namespace wlp {

/// Byte range [begin, end) in the source, with the 1-based line and column of begin.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { kError, kWarning };

struct ParseDiagnostic {
  Severity severity;
  std::string message;
  SourceSpan span;
};

struct ParsedSystem {
  /// Present when there are no error diagnostics.
  std::optional<Expression> expression;
  /// Number of components: the largest variable index used.
  std::size_t arity = 0;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return expression.has_value(); }
};

/// Parses the structure language
///
///   expr   := term ( "|" term )*
///   term   := factor ( "&" factor )*
///   factor := "x" index | number | "min(" expr ("," expr)+ ")"
///           | "max(" expr ("," expr)+ ")" | "(" expr ")"
///
/// where "&" (series, meet) binds tighter than "|" (parallel, join) and
/// numbers may be written as decimal floats or [+-]inf. Text after "#" up
/// to the end of the line is ignored. Constants must lie in `domain`.
ParsedSystem parse_system(std::string_view source, const LatticeDomain& domain);

/// Canonical text for an expression; parse_system reads it back to a
/// structurally identical tree.
std::string format_expression(const Expression& expr);

/// "line:column: error: message" followed by the source line and a caret marker.
std::string format_diagnostic(const ParseDiagnostic& diagnostic, std::string_view source);

/// Thrown by parse_system_or_throw; carries every diagnostic.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::vector<ParseDiagnostic> diagnostics)
      : Error(msg), diagnostics_(std::move(diagnostics)) {}
  const std::vector<ParseDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

ParsedSystem parse_system_or_throw(std::string_view source, const LatticeDomain& domain);

}  // namespace wlp
