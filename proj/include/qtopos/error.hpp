#pragma once

#include <stdexcept>
#include <string>

namespace qtopos {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input failed a structural check; `field` names the offending location.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class CommutantViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OrthogonalityViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A finite enumeration (monoid closure, orbit, sieves, lattice) outgrew its cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string what, std::size_t cap)
      : Error(what + " exceeded cap " + std::to_string(cap)),
        what_(std::move(what)),
        cap_(cap) {}
  const std::string& kind() const noexcept { return what_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::string what_;
  std::size_t cap_;
};

class UnknownObject : public Error {
 public:
  using Error::Error;
};

class NotSubPresheaf : public Error {
 public:
  using Error::Error;
};

/// A global element or transformation failed a naturality square.
class NaturalityViolation : public Error {
 public:
  using Error::Error;
};

/// Internal consistency failure of a built site (composition not closed).
class InconsistentSite : public Error {
 public:
  using Error::Error;
};

}  // namespace qtopos
