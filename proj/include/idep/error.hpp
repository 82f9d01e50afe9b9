#pragma once

#include <stdexcept>
#include <string>

namespace idep
{

/// Base of every error thrown by the library. `kind()` is a stable,
/// machine-readable name used in CLI error records.
class Error : public std::runtime_error
{
public:
  Error(std::string kind, const std::string &message)
    : std::runtime_error(message), kind_(std::move(kind))
  {}

  const std::string &kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define IDEP_DEFINE_ERROR(Name)                                          \
  class Name : public Error                                              \
  {                                                                      \
  public:                                                                \
    explicit Name(const std::string &message) : Error(#Name, message) {} \
  }

// geometry
IDEP_DEFINE_ERROR(ResolutionTooCoarse);
IDEP_DEFINE_ERROR(GeometryInvalid);
IDEP_DEFINE_ERROR(OutOfDomain);
IDEP_DEFINE_ERROR(InvalidArgument);

// solver
IDEP_DEFINE_ERROR(SingularSystem);

// dep physics
IDEP_DEFINE_ERROR(ZeroFrequency);
IDEP_DEFINE_ERROR(DegenerateDenominator);

// particle dynamics
IDEP_DEFINE_ERROR(StepUnderflow);

// io
IDEP_DEFINE_ERROR(IoError);

#undef IDEP_DEFINE_ERROR

class NotConverged : public Error
{
public:
  NotConverged(const std::string &message, unsigned iterations, double residual)
    : Error("NotConverged", message), iterations_(iterations), residual_(residual)
  {}

  unsigned iterations() const noexcept { return iterations_; }
  double   final_residual() const noexcept { return residual_; }

private:
  unsigned iterations_;
  double   residual_;
};

class ParseError : public Error
{
public:
  ParseError(int line, const std::string &message)
    : Error("ParseError",
            line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line)
  {}

  /// 1-based line number, 0 when the error is not tied to a line.
  int line() const noexcept { return line_; }

private:
  int line_;
};

class ValidationError : public Error
{
public:
  ValidationError(std::string field, const std::string &reason)
    : Error("ValidationError", field + ": " + reason), field_(std::move(field))
  {}

  const std::string &field() const noexcept { return field_; }

private:
  std::string field_;
};

} // namespace idep
