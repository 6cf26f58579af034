#pragma once

#include <stdexcept>
#include <string>

namespace tst {

/// Base for every error raised by the library. The concrete subclasses name
/// the failure so callers can dispatch on type.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define TST_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

TST_DEFINE_ERROR(InvalidParam);
TST_DEFINE_ERROR(NonConvergence);
TST_DEFINE_ERROR(OutOfRegime);
TST_DEFINE_ERROR(Unsupported);
TST_DEFINE_ERROR(VariantMismatch);
TST_DEFINE_ERROR(InvalidSize);
TST_DEFINE_ERROR(MissingKernelEntry);
TST_DEFINE_ERROR(CacheMismatch);
TST_DEFINE_ERROR(UnknownVariable);
TST_DEFINE_ERROR(TooLarge);
TST_DEFINE_ERROR(WidthTooLarge);
TST_DEFINE_ERROR(ComplexCouplingRejected);
TST_DEFINE_ERROR(NoCrossing);
TST_DEFINE_ERROR(ParseError);
TST_DEFINE_ERROR(ValidationError);

#undef TST_DEFINE_ERROR

} // namespace tst
