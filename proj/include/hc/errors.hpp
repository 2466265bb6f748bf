#pragma once

#include <stdexcept>
#include <string>

namespace hc {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HC_DEFINE_ERROR(Name)                  \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  };

// Argument or state outside a function's domain.
HC_DEFINE_ERROR(DomainError)
HC_DEFINE_ERROR(EnergyOutOfRange)
HC_DEFINE_ERROR(InvalidPotential)
HC_DEFINE_ERROR(RangeError)
HC_DEFINE_ERROR(NonMonotonicTime)
HC_DEFINE_ERROR(QuadratureFailure)
HC_DEFINE_ERROR(OverdampedUnsupported)
HC_DEFINE_ERROR(DegenerateBound)
HC_DEFINE_ERROR(RegimeMismatch)
HC_DEFINE_ERROR(NoExitDetected)
HC_DEFINE_ERROR(StepSizeUnderflow)
HC_DEFINE_ERROR(ConfigError)

#undef HC_DEFINE_ERROR

}  // namespace hc
