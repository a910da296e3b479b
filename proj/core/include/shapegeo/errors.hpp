#pragma once

#include <stdexcept>
#include <string>

namespace shapegeo {

/// Failure categories raised by the library. The CLI maps `kind()` onto exit
/// codes, so every thrown error carries one.
enum class ErrorKind {
  InvalidArgument,
  NotImmersed,
  BaseMismatch,
  OutOfChart,
  SingularGram,
  NonConvergence,
  MissingVariation,
  StepCollapse,
  VanishingField,
  NotPeriodic,
  NonDecaying,
  DegenerateConfig,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SHAPEGEO_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what)                            \
        : Error(ErrorKind::Name, what) {}                             \
  };

SHAPEGEO_DEFINE_ERROR(InvalidArgument)
SHAPEGEO_DEFINE_ERROR(NotImmersed)
SHAPEGEO_DEFINE_ERROR(BaseMismatch)
SHAPEGEO_DEFINE_ERROR(OutOfChart)
SHAPEGEO_DEFINE_ERROR(SingularGram)
SHAPEGEO_DEFINE_ERROR(MissingVariation)
SHAPEGEO_DEFINE_ERROR(StepCollapse)
SHAPEGEO_DEFINE_ERROR(VanishingField)
SHAPEGEO_DEFINE_ERROR(NotPeriodic)
SHAPEGEO_DEFINE_ERROR(NonDecaying)
SHAPEGEO_DEFINE_ERROR(DegenerateConfig)

#undef SHAPEGEO_DEFINE_ERROR

}  // namespace shapegeo
