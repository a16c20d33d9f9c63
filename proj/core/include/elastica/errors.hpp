#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace elastica {

class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}
  const char* what() const noexcept override { return message_.c_str(); }

 protected:
  std::string message_;
};

// Malformed input: DSL syntax, undeclared names, bad scene files.
class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(std::string detail, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownVariable : public InputError {
 public:
  UnknownVariable(std::string name, std::size_t position);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

// A quantity degenerated during evaluation. The message names the
// operation, the curve or variation parameter (when known) and the quantity.
class NumericalError : public Error {
 public:
  NumericalError(std::string kind, std::string operation, std::string quantity);

  const std::string& kind() const { return kind_; }
  const std::string& operation() const { return operation_; }
  const std::string& quantity() const { return quantity_; }
  std::optional<double> parameter_value() const { return param_value_; }
  const std::string& parameter_name() const { return param_name_; }

  // Attach the parameter location if none is recorded yet.
  void locate(const std::string& name, double value);

 private:
  void rebuild();
  std::string kind_, operation_, quantity_;
  std::string param_name_;
  std::optional<double> param_value_;
};

#define ELASTICA_NUMERICAL_ERROR(Name)                                   \
  class Name : public NumericalError {                                   \
   public:                                                               \
    Name(std::string operation, std::string quantity)                    \
        : NumericalError(#Name, std::move(operation), std::move(quantity)) {} \
  };

ELASTICA_NUMERICAL_ERROR(DomainError)
ELASTICA_NUMERICAL_ERROR(OutOfDomain)
ELASTICA_NUMERICAL_ERROR(DegenerateNormal)
ELASTICA_NUMERICAL_ERROR(MixedCausalType)
ELASTICA_NUMERICAL_ERROR(NullTangent)
ELASTICA_NUMERICAL_ERROR(DegenerateOsculating)
ELASTICA_NUMERICAL_ERROR(IndefiniteDenominator)
ELASTICA_NUMERICAL_ERROR(ConstraintViolation)
ELASTICA_NUMERICAL_ERROR(SingularTangentBasis)
ELASTICA_NUMERICAL_ERROR(WindowExceeded)
ELASTICA_NUMERICAL_ERROR(NullSpeed)
ELASTICA_NUMERICAL_ERROR(MaxIterations)

#undef ELASTICA_NUMERICAL_ERROR

}  // namespace elastica
