#pragma once

#include <stdexcept>
#include <string>

namespace psdda {

// Invalid user input (malformed graphs, delay specs, configs). The CLI maps
// this to exit code 1; any other exception is a runtime fault (exit code 2).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace psdda
