#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

/// An argument lies outside the domain of an operation (n = 0, q = 0,
/// table lookups past the declared bound, malformed grids).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller-asserted hypothesis failed its finite check (complete
/// multiplicativity, nonnegativity, purity, fairness).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed JSON input or experiment configuration.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An experiment or command name that is not registered.
class UnknownNameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An output path could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested cut or grid exceeds a hard resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlab
