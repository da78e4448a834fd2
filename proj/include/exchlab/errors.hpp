#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exchlab {

/// Base class for every failure raised by the library. `name()` is the stable
/// identifier surfaced by the CLI and the Python bindings.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& what)
      : std::runtime_error(what), name_(name) {}

  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  /// Numerical failures map to exit code 3, everything else to 2.
  [[nodiscard]] virtual bool numerical() const noexcept { return false; }

 private:
  std::string name_;
};

#define EXCHLAB_DEFINE_ERROR(Type, numeric)                        \
  class Type : public Error {                                      \
   public:                                                         \
    explicit Type(const std::string& what) : Error(#Type, what) {} \
    [[nodiscard]] bool numerical() const noexcept override {       \
      return numeric;                                              \
    }                                                              \
  };

// fock
EXCHLAB_DEFINE_ERROR(NonIsometricMap, true)
EXCHLAB_DEFINE_ERROR(NotUnitary, true)
EXCHLAB_DEFINE_ERROR(EmptyPostSelection, true)
EXCHLAB_DEFINE_ERROR(StatisticsMismatch, false)
EXCHLAB_DEFINE_ERROR(ParseError, false)

// ramsey
EXCHLAB_DEFINE_ERROR(BadSeparation, false)
EXCHLAB_DEFINE_ERROR(DegenerateFit, true)
EXCHLAB_DEFINE_ERROR(NotDensityMatrix, false)

// zeeman / rotor
EXCHLAB_DEFINE_ERROR(IntegratorFailure, true)
EXCHLAB_DEFINE_ERROR(UnstableConfig, false)
EXCHLAB_DEFINE_ERROR(ConvergenceFailure, true)
EXCHLAB_DEFINE_ERROR(DegenerateGroundState, true)
EXCHLAB_DEFINE_ERROR(MethodDisagreement, true)
EXCHLAB_DEFINE_ERROR(MinimumTrackingFailure, true)

// cli
EXCHLAB_DEFINE_ERROR(ConfigInvalid, false)

#undef EXCHLAB_DEFINE_ERROR

}  // namespace exchlab
