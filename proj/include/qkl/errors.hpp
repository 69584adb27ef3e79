#pragma once

#include <stdexcept>
#include <string>

namespace qkl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define QKL_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(what) {}          \
    const char* kind() const noexcept override { return #Name; }     \
  };

QKL_DEFINE_ERROR(PoleError)
QKL_DEFINE_ERROR(DomainError)
QKL_DEFINE_ERROR(RangeError)
QKL_DEFINE_ERROR(DivergenceError)
QKL_DEFINE_ERROR(DenominatorPoleError)
QKL_DEFINE_ERROR(VWPoleError)
QKL_DEFINE_ERROR(RealityError)
QKL_DEFINE_ERROR(DegreeError)
QKL_DEFINE_ERROR(ParamError)
QKL_DEFINE_ERROR(HypothesisError)
QKL_DEFINE_ERROR(ConvergenceError)

#undef QKL_DEFINE_ERROR

/// Input errors (exit code 2) as opposed to numerical failures (exit code 3).
inline bool is_input_error(const Error& e) {
  return dynamic_cast<const HypothesisError*>(&e) || dynamic_cast<const ParamError*>(&e) ||
         dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DegreeError*>(&e) ||
         dynamic_cast<const RangeError*>(&e);
}

}  // namespace qkl
