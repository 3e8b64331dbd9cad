#include "r4nb/potential.hpp"

#include <cmath>

namespace r4nb {

Potential Potential::homogeneous(double k, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    fail(ErrorCode::InvalidArgument, "homogeneous potential needs alpha > 0");
  return Potential(PotentialKind::Homogeneous, k, alpha);
}

Potential Potential::make(const std::string& kind, double k, double alpha) {
  if (!std::isfinite(k)) fail(ErrorCode::InvalidArgument, "potential parameter k must be finite");
  if (kind == "newtonian") return newtonian(k);
  if (kind == "jacobi") return jacobi(k);
  if (kind == "homogeneous") return homogeneous(k, alpha);
  if (kind == "harmonic") return harmonic(k);
  fail(ErrorCode::InvalidArgument, "unknown potential kind '" + kind + "'");
}

PotentialValue Potential::eval(double r) const {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "potential evaluated at r <= 0");
  return {value_t<double>(r), d1_t<double>(r), d2_t<double>(r)};
}

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotARotation: return "NotARotation";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::DegeneratePotential: return "DegeneratePotential";
    case ErrorCode::UnsupportedPotential: return "UnsupportedPotential";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoRealRoot: return "NoRealRoot";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::InvalidRadicand: return "InvalidRadicand";
    case ErrorCode::CollisionError: return "CollisionError";
    case ErrorCode::NotBalanced: return "NotBalanced";
    case ErrorCode::InvalidCase: return "InvalidCase";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InactiveBlock: return "InactiveBlock";
    case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
  }
  return "Unknown";
}

int error_code_class(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
      return 2;
    case ErrorCode::NoConvergence:
    case ErrorCode::CollisionError:
      return 3;
    default:
      return 4;
  }
}

}  // namespace r4nb
