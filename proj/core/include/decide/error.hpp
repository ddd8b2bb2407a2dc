#pragma once

#include <stdexcept>
#include <string>

namespace decide {

/// Base class for every error the toolkit throws. The `module()` tag names
/// the pipeline stage that raised it so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed textual input (versions, specifiers, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid file content (CoNLL-U, KG, snapshot).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Persisted file written by an incompatible schema version.
class SchemaError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// The compatibility oracle could not be reached or refused the request.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// The compatibility oracle replied with something outside the wire protocol.
class ProtocolError : public OracleError {
 public:
  using OracleError::OracleError;
};

}  // namespace decide
