#include "elastica/errors.hpp"

#include <cstdio>

namespace elastica {

SyntaxError::SyntaxError(std::string detail, std::size_t position)
    : InputError("syntax error at position " + std::to_string(position) + ": " + detail),
      position_(position) {}

UnknownVariable::UnknownVariable(std::string name, std::size_t position)
    : InputError("unknown variable '" + name + "' at position " + std::to_string(position)),
      name_(std::move(name)) {}

NumericalError::NumericalError(std::string kind, std::string operation, std::string quantity)
    : Error(""), kind_(std::move(kind)), operation_(std::move(operation)),
      quantity_(std::move(quantity)) {
  rebuild();
}

void NumericalError::locate(const std::string& name, double value) {
  if (param_value_) return;
  param_name_ = name;
  param_value_ = value;
  rebuild();
}

void NumericalError::rebuild() {
  message_ = kind_ + " in " + operation_ + ": " + quantity_;
  if (param_value_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", *param_value_);
    message_ += " at " + param_name_ + "=" + buf;
  }
}

}  // namespace elastica
