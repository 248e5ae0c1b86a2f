#pragma once

#include <stdexcept>
#include <string>

namespace ik {

/// Base of every error the toolkit raises. `module()` names the subsystem so
/// the CLI can prefix its one-line report.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure after the retry budget is spent.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error("teacher", what), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// The endpoint answered, but not with something we understand.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& what, std::string raw)
      : Error("teacher", what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// A model reply from which the expected scores could not be extracted.
class ParseError : public Error {
 public:
  ParseError(std::string module, const std::string& what, std::string raw)
      : Error(std::move(module), what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace ik
