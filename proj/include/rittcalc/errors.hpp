#pragma once

#include <stdexcept>
#include <string>

namespace rittcalc {

/// Broad failure classes; the CLI maps these onto exit codes.
enum class ErrorClass {
  config,     // bad input, violated precondition
  numerical,  // solver or quadrature could not deliver the requested accuracy
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

#define RITTCALC_DEFINE_ERROR(Name, Cls)                                          \
  class Name : public Error {                                                     \
   public:                                                                        \
    explicit Name(const std::string& what) : Error(ErrorClass::Cls, #Name ": " + what) {} \
  };

// linalg
RITTCALC_DEFINE_ERROR(SingularResolvent, numerical)
RITTCALC_DEFINE_ERROR(NoConvergence, numerical)
RITTCALC_DEFINE_ERROR(ShapeError, config)

// profile
RITTCALC_DEFINE_ERROR(SpectrumOutsideDisc, config)
RITTCALC_DEFINE_ERROR(EtaTooSmall, config)
RITTCALC_DEFINE_ERROR(Overflow, numerical)
RITTCALC_DEFINE_ERROR(SpectrumNotUnimodular, config)

// geometry / special / fcalc
RITTCALC_DEFINE_ERROR(BadParameters, config)
RITTCALC_DEFINE_ERROR(QuadratureStall, numerical)
RITTCALC_DEFINE_ERROR(DomainError, config)
RITTCALC_DEFINE_ERROR(SpectrumTouchesContour, numerical)

// sqfe
RITTCALC_DEFINE_ERROR(DegenerateC1, config)
RITTCALC_DEFINE_ERROR(Divergence, numerical)

// operators
RITTCALC_DEFINE_ERROR(PrecisionLoss, config)

// io
RITTCALC_DEFINE_ERROR(ParseError, config)

#undef RITTCALC_DEFINE_ERROR

}  // namespace rittcalc
