#pragma once

#include <stdexcept>
#include <string>

namespace nodehilb {

/// Base class of every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NODEHILB_ERROR(Name)              \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

NODEHILB_ERROR(UnknownVariable);
NODEHILB_ERROR(NegativeExponentNotLocalized);
NODEHILB_ERROR(ContextMismatch);
NODEHILB_ERROR(RelationViolated);
NODEHILB_ERROR(IndexOutOfRange);
NODEHILB_ERROR(NonSquare);
NODEHILB_ERROR(ZeroPolynomial);
NODEHILB_ERROR(NotInvariant);
NODEHILB_ERROR(RecursionDepthExceeded);
NODEHILB_ERROR(ForeignVariables);
NODEHILB_ERROR(ReductionDiverged);
NODEHILB_ERROR(CobasisNotClosed);
NODEHILB_ERROR(InvalidStratum);
NODEHILB_ERROR(ZeroRatio);
NODEHILB_ERROR(MultiplicityOverflow);
NODEHILB_ERROR(IdenticallyZero);
NODEHILB_ERROR(PreconditionFailed);
NODEHILB_ERROR(ParseError);
NODEHILB_ERROR(Timeout);
NODEHILB_ERROR(UsageError);
NODEHILB_ERROR(IoFailure);

#undef NODEHILB_ERROR

/// Raised by exact division; `witness` describes the obstruction (a nonzero
/// remainder, or a quotient that leaves the ring).
class NotDivisible : public Error {
 public:
  NotDivisible(const std::string& what, std::string witness)
      : Error(what + ": " + witness), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace nodehilb
