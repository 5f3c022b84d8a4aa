#pragma once

#include <stdexcept>
#include <string>

namespace mclfem {

/// Base class of all library errors. `kind()` is a stable machine-readable tag
/// used by the CLI when it reports failures on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

class AssemblyError : public Error {
 public:
  explicit AssemblyError(const std::string& message) : Error("assembly", message) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("dimension", message) {}
};

class InadmissibleStateError : public Error {
 public:
  explicit InadmissibleStateError(const std::string& message)
      : Error("inadmissible_state", message) {}
};

class DegenerateEdgeError : public Error {
 public:
  explicit DegenerateEdgeError(const std::string& message)
      : Error("degenerate_edge", message) {}
};

class LimiterError : public Error {
 public:
  explicit LimiterError(const std::string& message) : Error("limiter", message) {}
};

class StageError : public Error {
 public:
  explicit StageError(const std::string& message) : Error("stage", message) {}
};

class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& message) : Error("integration", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace mclfem
