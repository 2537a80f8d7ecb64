#ifndef LSST_ERROR_H
#define LSST_ERROR_H

#include <stdexcept>
#include <string>

namespace lsst {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define LSST_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name, what) {}   \
  }

LSST_DEFINE_ERROR(UnboundVariable);
LSST_DEFINE_ERROR(LinearityViolation);
LSST_DEFINE_ERROR(TypeMismatch);
LSST_DEFINE_ERROR(StepBudgetExceeded);
LSST_DEFINE_ERROR(NotAStringTree);
LSST_DEFINE_ERROR(NotAnEncoding);
LSST_DEFINE_ERROR(ShapeExtractionFailed);
LSST_DEFINE_ERROR(DomainMismatch);
LSST_DEFINE_ERROR(IndexMismatch);
LSST_DEFINE_ERROR(MissingCapability);
LSST_DEFINE_ERROR(NotPrunable);
LSST_DEFINE_ERROR(NotContractible);
LSST_DEFINE_ERROR(LabelMismatch);
LSST_DEFINE_ERROR(NotPurelyLinear);
LSST_DEFINE_ERROR(HoleCountViolation);
LSST_DEFINE_ERROR(ParseError);
LSST_DEFINE_ERROR(ValidationError);
LSST_DEFINE_ERROR(UndefinedOutput);

#undef LSST_DEFINE_ERROR

}  // namespace lsst

#endif  // LSST_ERROR_H
