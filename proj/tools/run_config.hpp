#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "catstress/error.hpp"
#include "catstress/moments.hpp"

namespace catstress::cli {

/// Raised for anything wrong with the configuration file or its values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BasisConfig {
  int dimension = 1;
  double length = 6.283185307179586;
  double mass = 1.0;
  double coupling = 0.0;
  int max_index = 1;
  /// Explicit integer labels; replaces max_index when present.
  std::optional<std::vector<std::vector<int>>> modes;

  BasisPtr build() const;
};

enum class CatKind { none, equal, phase, explicit_coefficients };

struct StateConfig {
  std::string type = "coherent";
  std::vector<Complex> alpha;
  std::optional<Complex> a, b;
  std::optional<double> theta;
};

struct SweepConfig {
  /// |alpha|^2 values; alpha keeps the configured direction.
  std::vector<double> alpha_squared;
  std::vector<double> thetas;
};

struct OracleConfig {
  bool enabled = false;
  int cutoff = 40;
  int polynomials = 20;
  int max_degree = 4;
  double tolerance = 1e-7;
};

struct ValidateConfig {
  double corrupt_frequency = 0.0;
  double tolerance = 1e-12;
};

struct RunConfig {
  BasisConfig basis;
  StateConfig state;
  SweepConfig sweep;
  std::vector<SpacetimePoint> points;
  std::vector<Component> components;
  std::vector<int> moment_orders{2};
  bool symmetrized = false;
  IndexPlacement placement = IndexPlacement::lower;
  OracleConfig oracle;
  ValidateConfig validate;
  std::filesystem::path output_directory = "out";

  /// The parsed document, used for the config hash.
  nlohmann::json source;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// One concrete state of a run with the parameters that produced it.
struct StateCase {
  std::size_t index = 0;
  State state;
  double alpha_squared = 0.0;
  std::optional<double> theta;
  double epsilon = 0.0;  // <alpha|-alpha> for cats, 0 for coherent states
};

/// The configured state, or one state per sweep entry (|alpha|^2 x theta).
std::vector<StateCase> expand_states(const RunConfig& config, const BasisPtr& basis);

}  // namespace catstress::cli
