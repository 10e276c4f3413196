#pragma once

#include <stdexcept>
#include <string>

namespace sandwich {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  Parse = 1,
  Validation,
  ParameterRange,
  DomainMismatch,
  Precondition,
  NotIdentifiable,
  Accuracy,
  Divergence,
  Mode,
  DomainTooSmall,
  DegenerateFit,
  OutOfDomain,
  GridTooLarge,
  EmptyInput,
  Unsupported,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Validation failures carry the name of the violated invariant
/// (e.g. "holder.alpha-range") so callers can report field-level messages.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& what)
      : Error(ErrorCode::Validation, invariant + ": " + what),
        invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Quadrature did not reach its target tolerance; `achieved` is the last
/// observed relative change between refinement levels.
class AccuracyError : public Error {
 public:
  AccuracyError(double achieved, double estimate)
      : Error(ErrorCode::Accuracy,
              "quadrature tolerance not reached; achieved relative bound " +
                  std::to_string(achieved)),
        achieved_(achieved),
        estimate_(estimate) {}

  double achieved() const noexcept { return achieved_; }
  double estimate() const noexcept { return estimate_; }

 private:
  double achieved_;
  double estimate_;
};

}  // namespace sandwich
