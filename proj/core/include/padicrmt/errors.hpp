#pragma once

#include <stdexcept>
#include <string>

namespace padicrmt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PADICRMT_ERROR(Name)                                  \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(what) {}   \
  }

PADICRMT_ERROR(MixedModulus);
PADICRMT_ERROR(NonUnitLeadingCoefficient);
PADICRMT_ERROR(InvalidParams);
PADICRMT_ERROR(RejectionExhausted);
PADICRMT_ERROR(SaturatedDeterminant);
PADICRMT_ERROR(PrecisionExhausted);
PADICRMT_ERROR(UnsupportedPrime);
PADICRMT_ERROR(DivergentParameters);
PADICRMT_ERROR(SingularConvention);
PADICRMT_ERROR(UnknownFormula);
PADICRMT_ERROR(UnknownExperiment);
PADICRMT_ERROR(PrecisionPolicyViolation);
PADICRMT_ERROR(BudgetExceeded);

#undef PADICRMT_ERROR

}  // namespace padicrmt
