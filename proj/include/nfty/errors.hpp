#pragma once

#include <stdexcept>
#include <string>

namespace nfty {

// Invalid or inconsistent configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data (traces, reply lists, serialized files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// An estimator could not produce a value from the given measurements.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Probe planning failed, e.g. required deployment knowledge is missing.
class PlanError : public std::runtime_error {
 public:
  explicit PlanError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nfty
