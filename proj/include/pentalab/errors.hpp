#pragma once

#include <stdexcept>
#include <string>

namespace pentalab {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Usage errors: malformed specs, mismatched sizes, bad parameters.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A configuration that is not generic enough for the requested operation.
/// Experiments react to these by drawing a fresh configuration.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

#define PENTALAB_DEFINE_ERROR(Name, Base)              \
  class Name : public Base {                           \
   public:                                             \
    explicit Name(const std::string& what = #Name)     \
        : Base(std::string(#Name ": ") + what) {}      \
  };

PENTALAB_DEFINE_ERROR(SingularMatrix, DegeneracyError)
PENTALAB_DEFINE_ERROR(ZeroVector, DegeneracyError)
PENTALAB_DEFINE_ERROR(DegenerateSpan, DegeneracyError)
PENTALAB_DEFINE_ERROR(DegenerateMeet, DegeneracyError)
PENTALAB_DEFINE_ERROR(DegenerateFrame, DegeneracyError)
PENTALAB_DEFINE_ERROR(DegenerateImage, DegeneracyError)
PENTALAB_DEFINE_ERROR(GenerationFailed, DegeneracyError)
PENTALAB_DEFINE_ERROR(AllSeedsDegenerate, DegeneracyError)
PENTALAB_DEFINE_ERROR(WindowExceeded, UsageError)
PENTALAB_DEFINE_ERROR(MonodromyMismatch, UsageError)
PENTALAB_DEFINE_ERROR(GcdObstruction, UsageError)
PENTALAB_DEFINE_ERROR(SignObstruction, DegeneracyError)
PENTALAB_DEFINE_ERROR(IllConditioned, DegeneracyError)
PENTALAB_DEFINE_ERROR(InsufficientData, UsageError)
PENTALAB_DEFINE_ERROR(ParseError, UsageError)

#undef PENTALAB_DEFINE_ERROR

}  // namespace pentalab
