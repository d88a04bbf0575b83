#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace choinet {

/// Malformed input: wrong dimensions, out-of-range parameters, non-Hermitian data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A type invariant failed; `invariant()` names it (e.g. "povm.completeness").
class ValidationError : public InvalidArgument {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : InvalidArgument(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class NotPsdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The A-marginal of a state is rank deficient, so the channel picture is undefined.
class SingularMarginalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A normalisation step hit a zero-trace operator.
class DegenerateTraceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Config parse failure; `field()` is a JSON-pointer style path to the bad field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& detail)
      : std::runtime_error(field + ": " + detail), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical self-check inside an experiment disagreed beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace choinet
