#pragma once

#include <stdexcept>
#include <string>

namespace llab {

// Process exit codes of the command-line tool.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  dimension_cap = 3,
  numerical = 4,
  selftest = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Distinct configuration failure kinds; all map to ExitCode::config.
enum class ConfigErrorKind {
  malformed_json,
  schema,
  unknown_key,
  ir_violation,
  nonpositive_beta,
  photon_cap,
  invalid_value,
};

const char* to_string(ConfigErrorKind kind);

class ConfigError : public Error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what)
      : Error(ExitCode::config, std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ConfigErrorKind kind() const { return kind_; }

 private:
  ConfigErrorKind kind_;
};

// Invalid arguments to a library routine (precondition violations).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ExitCode::config, what) {}
};

class DimensionCapError : public Error {
 public:
  explicit DimensionCapError(const std::string& what) : Error(ExitCode::dimension_cap, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ExitCode::numerical, what) {}
};

}  // namespace llab
