#pragma once

#include <stdexcept>
#include <string>

namespace iormon {

// Root of every error raised by the library. Each subclass names the stage
// that rejected the input so callers can map it to an exit status.
class MonitorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public MonitorError {
 public:
  using MonitorError::MonitorError;
};

class ConfigError : public MonitorError {
 public:
  using MonitorError::MonitorError;
};

// Raised when a decision arrives with an id not greater than every id seen so far.
class StreamOrderError : public MonitorError {
 public:
  using MonitorError::MonitorError;
};

// A numeric value fell outside the declared column bounds of a grid.
class RangeError : public MonitorError {
 public:
  using MonitorError::MonitorError;
};

class IngestError : public MonitorError {
 public:
  IngestError(const std::string& what, std::size_t line)
      : MonitorError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GeneratorError : public MonitorError {
 public:
  using MonitorError::MonitorError;
};

}  // namespace iormon
