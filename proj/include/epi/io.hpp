#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epi/exactla.hpp"

namespace epi {

/// Thrown by parse_input with a 1-based position and a human-readable
/// message; the CLI prints it as file:line:col and exits with code 2.
struct ParseError {
  int line = 0;
  int col = 0;
  std::string message;
};

enum class CheckMode { Fundamental, Essential, Both };
const char* to_string(CheckMode m);
std::optional<CheckMode> parse_check_mode(const std::string& s);

struct InputInstance {
  std::string name;
  std::vector<Correspondence> corrs;
  int line = 0;  // line of the `instance` directive (or first pair)
};

/// A parsed input file: one or more instances plus document-level defaults.
/// Command-line flags override the document, the document overrides the
/// built-in defaults (mode=both, witness off, early exit off).
struct InputDocument {
  std::vector<InputInstance> instances;
  std::optional<CheckMode> mode;
  std::optional<bool> witness;
  std::optional<bool> early_exit_rank4;
};

InputDocument parse_input(std::istream& in);

struct CliOverrides {
  std::optional<CheckMode> mode;
  std::optional<bool> witness;
  std::optional<bool> early_exit_rank4;
  bool json = false;
  /// Timing fields are the one permitted source of output nondeterminism;
  /// golden tests switch them off.
  bool include_timing = true;
};

/// Runs the selected checks on every instance and renders the full report
/// (text or JSON, per overrides). Deterministic for fixed input and options
/// apart from the timing fields.
std::string run_checks(const InputDocument& doc, const CliOverrides& o);

/// Renders correspondences in the input format (used by the generator).
std::string format_input(const std::vector<Correspondence>& corrs,
                         const std::string& header_comment);

/// Decimal string with `digits` fractional digits, rounded down (dir < 0) or
/// up (dir > 0). Exact rationals print exactly when they terminate within
/// `digits` places (both roundings coincide).
std::string to_decimal(const Rational& q, unsigned digits, int dir);

}  // namespace epi
