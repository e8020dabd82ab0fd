#pragma once

#include <stdexcept>
#include <string>

namespace mvlabel {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  Ok = 0,
  Config = 1,
  Data = 2,
  Compute = 3,
  Transport = 4,
};

/// Base of every error raised by the library. Each subclass knows which
/// exit-code family it belongs to so the CLI can map failures uniformly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual ExitCode exit_code() const noexcept { return ExitCode::Compute; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Config; }
};

/// A prior pipeline stage has not produced the artifact a later stage needs.
class StageDependencyError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Config; }
};

class SchemaError : public Error {
 public:
  SchemaError(std::string column, const std::string& message);
  explicit SchemaError(const std::string& message) : Error(message) {}
  [[nodiscard]] const std::string& column() const noexcept { return column_; }
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Data; }

 private:
  std::string column_;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Data; }
};

class InsufficientRowsError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Data; }
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Transport; }
};

class FixtureMissingError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Transport; }
};

/// The LLM response could not be turned into exactly k labels. Carries the raw text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string raw);
  [[nodiscard]] const std::string& raw() const noexcept { return raw_; }
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Data; }

 private:
  std::string raw_;
};

/// Wraps a failure with the pipeline stage (and view, when known) it happened in.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string view, const std::string& message, ExitCode code);
  [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
  [[nodiscard]] const std::string& view() const noexcept { return view_; }
  [[nodiscard]] ExitCode exit_code() const noexcept override { return code_; }

 private:
  std::string stage_;
  std::string view_;
  ExitCode code_;
};

}  // namespace mvlabel
