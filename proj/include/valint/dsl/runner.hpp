#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "valint/dsl/ast.hpp"
#include "valint/dsl/parser.hpp"

namespace valint::dsl {

struct Options {
  /// Rank of Gamma when a script does not say otherwise.
  int rank = 1;
  /// Default precision for residue fields and valued fields.
  int prec = 8;
  /// Enumeration limit for pullbacks and refinements; 0 keeps the library default.
  std::uint64_t depth_limit = 0;
  /// Seed for `check random` statements.
  std::uint64_t seed = 0;
};

struct RunResult {
  std::string transcript;
  std::vector<Diagnostic> diagnostics;
  int exit_code = 0;
};

/// Static checks: unbound and forward references (E002), rebinding and
/// reserved names (E003).
std::vector<Diagnostic> resolve(const Script& script);

/// Executes a script that parsed and resolved cleanly.
RunResult run(const Script& script, const Options& options = {});

/// parse, resolve, run. Diagnostics from any stage end up in the transcript.
RunResult run_source(std::string_view source, const Options& options = {});

/// Canonical rendering of a script, or its syntax diagnostics.
RunResult format_source(std::string_view source);

}  // namespace valint::dsl
