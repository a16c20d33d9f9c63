#include "elastica/minkowski.hpp"

#include <stdexcept>

namespace elastica {

CausalCharacter causal_character(const MVec3& v, double tol) {
  if (v.x0 == 0.0 && v.x1 == 0.0 && v.x2 == 0.0) return CausalCharacter::Spacelike;
  const double q = inner(v, v);
  if (std::fabs(q) <= tol) return CausalCharacter::Null;
  return q > 0.0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

std::string to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Null: return "null";
  }
  return "?";
}

CaseSignature::CaseSignature(int eps1, int eps2, int eps3) : e1_(eps1), e2_(eps2), e3_(eps3) {
  auto unit = [](int e) { return e == 1 || e == -1; };
  if (!unit(eps1) || !unit(eps2) || !unit(eps3))
    throw std::invalid_argument("CaseSignature: entries must be +1 or -1");
  if ((eps1 < 0) + (eps2 < 0) + (eps3 < 0) != 1)
    throw std::invalid_argument("CaseSignature: exactly one entry must be -1, got " + to_string());
}

std::string CaseSignature::label() const {
  if (e3_ < 0) return "spacelike-surface";
  if (e1_ < 0) return "timelike-surface/timelike-arc";
  return "timelike-surface/spacelike-arc";
}

std::string CaseSignature::to_string() const {
  auto s = [](int e) { return e > 0 ? std::string("+1") : std::string("-1"); };
  return "(" + s(e1_) + "," + s(e2_) + "," + s(e3_) + ")";
}

}  // namespace elastica
