#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbs/apparatus.hpp"
#include "qbs/montecarlo.hpp"

namespace qbs::cli {

enum class Mode { Fringe, Duality, SweepBeta, SweepAlpha, Mc };

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitIo = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fully resolved run description. Angles are in radians.
struct RunConfig {
  Mode mode = Mode::Fringe;
  DeviceSettings device;
  AncillaOutcome outcome = AncillaOutcome::B;
  int points = 360;
  double beta_start = 0.0;
  double beta_stop = std::numbers::pi / 2;
  double alpha_start = 0.0;
  double alpha_stop = std::numbers::pi / 2;
  int steps = 33;
  NoiseModel noise;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

/// Every user-settable field, unset unless given. Angles are in the user's unit.
struct ConfigLayer {
  std::optional<std::string> mode;  ///< must match the subcommand when given
  std::optional<double> alpha, beta, delta1, delta2;
  std::optional<std::string> outcome;
  std::optional<int> points;
  std::optional<double> beta_start, beta_stop, alpha_start, alpha_stop;
  std::optional<int> steps;
  std::optional<std::uint64_t> shots, seed;
  std::optional<double> dark_rate, contrast, jitter, efficiency;
  std::optional<std::string> out;
  std::optional<bool> degrees;
};

/// Parses a JSON config document. Unknown keys and wrong types raise ConfigError.
ConfigLayer parse_config_json(const std::string& text);

/// `top` wins field by field.
ConfigLayer overlay(const ConfigLayer& base, const ConfigLayer& top);

/// Parses a subcommand name such as "sweep-beta".
Mode parse_mode(const std::string& name);

/// Applies mode defaults, unit conversion and validation. Throws ConfigError.
RunConfig resolve(Mode mode, const ConfigLayer& layer);

std::string format_double(double x);

std::string fringe_csv(const RunConfig& cfg);
std::string duality_csv(const RunConfig& cfg);
std::string sweep_beta_csv(const RunConfig& cfg);
std::string sweep_alpha_csv(const RunConfig& cfg);

struct McOutput {
  std::string counts_csv;
  std::string estimates_csv;
};
McOutput mc_csv(const RunConfig& cfg);

/// Path of the estimates file written next to the counts file `out`.
std::string estimates_path(const std::string& out);

/// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbs::cli
