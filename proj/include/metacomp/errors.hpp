#ifndef METACOMP_ERRORS_HPP
#define METACOMP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace metacomp {

/// Root of every exception the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A component was handed input it cannot work with (usually a
/// representation mismatch). Carries the component's name.
class ComponentError : public Error {
 public:
  ComponentError(std::string component, const std::string& message)
      : Error(component + ": " + message), component_(std::move(component)) {}

  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

/// A required Environment key was missing or held the wrong type.
class ConfigurationError : public Error {
 public:
  ConfigurationError(std::string key, const std::string& message)
      : Error(message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Text input rejected by a parser. `line` is 1-based; 0 means "not line
/// oriented" and `path` then carries a JSON path instead.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  ParseError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::size_t line_ = 0;
  std::string path_;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

class RegistrationError : public Error {
 public:
  using Error::Error;
};

/// A configuration referenced a component or framework the registry
/// does not know. Kept distinct from dependency violations.
class UnknownComponentError : public Error {
 public:
  using Error::Error;
};

/// JSON-RPC error object returned by a remote endpoint, surfaced verbatim.
class RemoteError : public Error {
 public:
  RemoteError(int code, const std::string& message) : Error(message), code_(code) {}

  int code() const noexcept { return code_; }

 private:
  int code_;
};

class RemoteUnavailableError : public Error {
 public:
  using Error::Error;
};

/// The host environment refused a resource, e.g. a port already bound.
class PortInUseError : public Error {
 public:
  using Error::Error;
};

}  // namespace metacomp

#endif  // METACOMP_ERRORS_HPP
