#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "valint/dsl/ast.hpp"
#include "valint/error.hpp"

namespace valint::dsl {

struct Diagnostic {
  ErrorCode code = ErrorCode::kSyntax;
  Span span;
  std::string message;

  /// "error[E001] line 3, col 5: message"
  std::string format() const;
};

struct ParseResult {
  Script script;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Total: malformed input yields E001 diagnostics, recovery resumes after
/// the next ';'.
ParseResult parse(std::string_view source);

/// Names that scripts may not bind.
bool is_reserved(const std::string& name);

}  // namespace valint::dsl
