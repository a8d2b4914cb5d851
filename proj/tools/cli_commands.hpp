#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "run_config.hpp"

namespace catstress::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitConfig = 2;

inline constexpr const char* kReportVersion = "1.0";

struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  int threads = 1;
  std::uint64_t seed = 0;
  std::optional<int> cutoff;
  std::optional<double> corrupt_frequency;
};

/// Orthonormality, on-shell residual and slice-independence table.
int cmd_validate_modes(const RunConfig& config, const GlobalOptions& options, std::ostream& log);
/// Kuo-Ford estimator over every pair of (point, component) slots.
int cmd_delta(const RunConfig& config, const GlobalOptions& options, std::ostream& log);
/// Central moments for each configured order and component.
int cmd_moments(const RunConfig& config, const GlobalOptions& options, std::ostream& log);
/// Closed forms against the truncated Fock oracle.
int cmd_oracle_compare(const RunConfig& config, const GlobalOptions& options, std::ostream& log);
/// delta and moments over the sweep plus a per-state summary table.
int cmd_sweep(const RunConfig& config, const GlobalOptions& options, std::ostream& log);

/// Parses arguments, loads the config and dispatches. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace catstress::cli
