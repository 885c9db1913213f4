#pragma once

#include <stdexcept>
#include <string>

namespace specmux {

// A model parameter violates its domain invariant.
class InvalidParameter : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A request exceeds a physical or configured limit (e.g. more modes than the
// spectral bandwidth holds).
class ConstraintViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Configuration file does not match the schema. The message starts with the
// offending field path.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

}  // namespace specmux
