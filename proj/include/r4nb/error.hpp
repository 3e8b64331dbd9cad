#pragma once

#include <stdexcept>
#include <string>

namespace r4nb {

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  NotARotation,
  NotAntisymmetric,
  DegeneratePotential,
  UnsupportedPotential,
  NoRoot,
  NoRealRoot,
  ZeroMomentum,
  InvalidRadicand,
  CollisionError,
  NotBalanced,
  InvalidCase,
  NoConvergence,
  InactiveBlock,
  NotAnEquilibrium,
  NotApplicable,
  DegenerateSpec,
};

const char* error_code_name(ErrorCode c);

// Exit-code class used by the command line tool: 2 for validation errors,
// 3 for numerical failures, 4 for domain errors.
int error_code_class(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace r4nb
