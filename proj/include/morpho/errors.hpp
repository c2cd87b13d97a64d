#pragma once

#include <stdexcept>
#include <string>

namespace morpho {

// Invalid configuration (bad bounds, malformed config file, unknown format).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse (dimension mismatch, stepping a finished episode).
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace morpho
