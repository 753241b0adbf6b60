#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "arbfree/scalar.hpp"

namespace arbfree {

enum class Subcommand { Check, Measure, Price, Cone, Counterexample };
enum class OutputFormat { Auto, Json, Csv, Text };

struct RunConfig {
  Subcommand subcommand = Subcommand::Check;
  /// Market files for check/measure/price; K (and optionally a test cone)
  /// for cone; unused for counterexample.
  std::vector<std::filesystem::path> inputs;
  double tolerance = kPositivityThreshold;
  Mode mode = Mode::Float;
  std::optional<std::filesystem::path> output_path;
  /// Auto is CSV for counterexample and JSON otherwise.
  OutputFormat format = OutputFormat::Auto;
  std::optional<std::filesystem::path> claim_path;
  std::size_t n = 0;
  std::size_t sample_budget = 10000;
  std::uint64_t seed = 0;
};

inline constexpr int kExitFree = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitArbitrage = 2;

/// Executes one subcommand. Reports go to `out` (or the output file), errors
/// to `err` as {"error": code, "detail": ...}. Returns 0 when every input is
/// arbitrage-free, 2 when some input has arbitrage or no measure, 1 on any
/// error. Multiple market inputs are processed concurrently.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and calls run().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace arbfree
