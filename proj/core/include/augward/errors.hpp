#pragma once

#include <stdexcept>
#include <string>

namespace augward {

// Error taxonomy mirrors the CLI exit codes: config/usage -> 1,
// bad input data -> 2, numeric failure -> 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace augward
