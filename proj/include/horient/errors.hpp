#pragma once

#include <stdexcept>
#include <string>

namespace horient {

/// Non-finite or otherwise unusable angle value.
struct InvalidAngleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Precondition violation on operation inputs (empty lists, bad sizes, ...).
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Model parameter shapes inconsistent with the configured architecture.
struct ModelConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad configuration value, unknown name, malformed config/scenario file.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Filesystem failure; message carries the path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Temporal gate queried with an empty window.
struct NoEstimateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
struct TrainingDivergedError : std::runtime_error {
  int epoch;
  explicit TrainingDivergedError(int epoch_)
      : std::runtime_error("training diverged at epoch " + std::to_string(epoch_)),
        epoch(epoch_) {}
};

}  // namespace horient
