#pragma once

#include <stdexcept>
#include <string>

namespace locflow {

// Bad user input: malformed configs, out-of-range parameters, unknown names.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown: singular metric, non-finite field values, failed
// time step. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace locflow
