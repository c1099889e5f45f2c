#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qasurv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: empty dataset, out-of-range argument, unknown name.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A covariate cannot support the requested transform: too few distinct
// values, constant column, or non-positive input to a log transform.
class DegenerateCovariateError : public Error {
 public:
  DegenerateCovariateError(std::string covariate, const std::string& message)
      : Error("covariate '" + covariate + "': " + message),
        covariate_(std::move(covariate)) {}

  const std::string& covariate() const noexcept { return covariate_; }

 private:
  std::string covariate_;
};

// Singular information matrix; the model coefficients are not estimable.
class NonIdentifiableError : public Error {
 public:
  using Error::Error;
};

// Operation requires a state the object is not in (e.g. summaries of a
// fit that did not converge, prediction without a baseline hazard).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Malformed input document. Carries the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error(message + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace qasurv
