#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qg {

// Base for everything the library throws on purpose. The CLI maps the
// subclasses onto exit codes (2 validation, 3 Dirichlet guard, 4 numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or input validation failure.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotSameClassError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotBranchPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// mu too close to zero for a spectral projection.
class RamificationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Graph-spec schema violations; carries every message found, not just the first.
class SchemaError : public DomainError {
 public:
  explicit SchemaError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Energy lies within the guard distance of a pole (edge Dirichlet eigenvalue,
/// or the Neumann-Dirichlet spectrum of a dangling edge).
class PoleError : public Error {
 public:
  PoleError(std::string where, double magnitude);
  const std::string& where() const { return where_; }
  double magnitude() const { return magnitude_; }

 private:
  std::string where_;
  double magnitude_;
};

/// Overflow, non-finite intermediates, failed continuation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qg
