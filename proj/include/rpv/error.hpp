#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpv {

/// Base of every error raised by the library. The CLI maps any of these to
/// exit code 2 unless a subcommand turns a specific one into a verdict.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RPV_DECLARE_ERROR(Name)            \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

RPV_DECLARE_ERROR(NegativeDiscriminant);
RPV_DECLARE_ERROR(MixedQuadraticField);
RPV_DECLARE_ERROR(DivisionByZero);
RPV_DECLARE_ERROR(ContextMismatch);
RPV_DECLARE_ERROR(NotUnivariate);
RPV_DECLARE_ERROR(CompatibilityViolation);
RPV_DECLARE_ERROR(VariableClash);
RPV_DECLARE_ERROR(NeedsHigherIndeterminates);
RPV_DECLARE_ERROR(CoefficientOutsideField);
RPV_DECLARE_ERROR(ReducibleMinimalPolynomial);
RPV_DECLARE_ERROR(DegenerateStep);
RPV_DECLARE_ERROR(NotTriangular);
RPV_DECLARE_ERROR(NotIntegrable);
RPV_DECLARE_ERROR(UnsupportedStep);
RPV_DECLARE_ERROR(NonPositiveSample);
RPV_DECLARE_ERROR(DimensionMismatch);

#undef RPV_DECLARE_ERROR

/// Syntax error with a location inside the parsed text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::size_t line, std::size_t column,
             std::string expected, std::string message);

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
  std::string message_;
};

}  // namespace rpv
