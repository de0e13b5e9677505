#pragma once

// Command implementations behind the `realrays` executable.  Each command
// takes its input document as text and returns the output document, the
// diagnostics for the error stream, and the process exit code:
//   0  success (count converged)
//   1  input, schema or I/O error
//   2  the refinement did not converge (iteration cap or grid cap)

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "realrays/sphere.hpp"

namespace realrays::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

enum class Mode { Exact, Rounded };

struct RunConfig {
  Mode mode = Mode::Exact;
  int bits = 53;
  int max_iterations = 24;
  int workers = 1;
  std::uint64_t grid_cap = kDefaultGridCap;
  bool trace = false;
};

/// Throws std::invalid_argument when the configuration is unusable.
void validate(const RunConfig& config);

struct CommandOutput {
  int exit_code = kExitOk;
  std::string document;
  std::string diagnostics;
};

CommandOutput cmd_count(const RunConfig& config, std::string_view input);

CommandOutput cmd_refine(const RunConfig& config, std::string_view input, std::span<const double> start,
                         int max_steps = 12, double beta_tol = 1e-13);

CommandOutput cmd_kappa(const RunConfig& config, std::string_view input, int level);

/// Levels tried by each rounded run beyond the level where exact mode halted.
inline constexpr int kSweepExtraLevels = 3;

CommandOutput cmd_sweep(const RunConfig& config, std::string_view input, const std::vector<int>& bits);

/// "0.6,0.8" -> {0.6, 0.8}.  Throws std::invalid_argument.
std::vector<double> parse_point(std::string_view text);
/// "53,24,12" -> {53, 24, 12}; "" -> {}.  Throws std::invalid_argument.
std::vector<int> parse_bits(std::string_view text);

/// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace realrays::cli
