#pragma once

#include <stdexcept>
#include <string>

namespace nbe {

// Error taxonomy. Everything derives from std::runtime_error so callers can
// catch coarsely; the distinct types exist for tests and for exit-code mapping.

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ArgumentError : std::runtime_error {
  explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BracketError : std::runtime_error {
  explicit BracketError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InstanceError : std::runtime_error {
  explicit InstanceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LookupError : std::runtime_error {
  explicit LookupError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nbe
