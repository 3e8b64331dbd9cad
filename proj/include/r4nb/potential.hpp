#pragma once

#include <cmath>
#include <string>

#include "r4nb/error.hpp"

namespace r4nb {

enum class PotentialKind { Newtonian, Jacobi, Homogeneous, Harmonic };

struct PotentialValue {
  double value;
  double d1;
  double d2;
};

// Radial pair potential V(r). Four families:
//   newtonian    V(r) = -k/r
//   jacobi       V(r) = -k/r^2
//   homogeneous  V(r) = -k/r^alpha   (alpha > 0)
//   harmonic     V(r) = k r^2
// All are attractive for k > 0 (V' > 0, force directed inward).
class Potential {
public:
  static Potential newtonian(double k) { return Potential(PotentialKind::Newtonian, k, 1.0); }
  static Potential jacobi(double k) { return Potential(PotentialKind::Jacobi, k, 2.0); }
  static Potential homogeneous(double k, double alpha);
  static Potential harmonic(double k) { return Potential(PotentialKind::Harmonic, k, -2.0); }

  // kind given as the lowercase config-file name, e.g. "newtonian"
  static Potential make(const std::string& kind, double k, double alpha);

  PotentialKind kind() const { return kind_; }
  double k() const { return k_; }
  double alpha() const { return alpha_; }

  PotentialValue eval(double r) const;
  bool is_attractive() const { return k_ > 0.0; }

  // true when V(r) -> -inf as r -> 0 (every family here except harmonic)
  bool singular_at_origin() const { return kind_ != PotentialKind::Harmonic; }

  template <typename T> T value_t(T r) const {
    switch (kind_) {
      case PotentialKind::Newtonian: return -T(k_) / r;
      case PotentialKind::Jacobi: return -T(k_) / (r * r);
      case PotentialKind::Homogeneous: return -T(k_) * std::pow(r, -T(alpha_));
      case PotentialKind::Harmonic: return T(k_) * r * r;
    }
    return T(0);
  }

  template <typename T> T d1_t(T r) const {
    switch (kind_) {
      case PotentialKind::Newtonian: return T(k_) / (r * r);
      case PotentialKind::Jacobi: return T(2) * T(k_) / (r * r * r);
      case PotentialKind::Homogeneous:
        return T(alpha_) * T(k_) * std::pow(r, -T(alpha_) - T(1));
      case PotentialKind::Harmonic: return T(2) * T(k_) * r;
    }
    return T(0);
  }

  template <typename T> T d2_t(T r) const {
    switch (kind_) {
      case PotentialKind::Newtonian: return -T(2) * T(k_) / (r * r * r);
      case PotentialKind::Jacobi: return -T(6) * T(k_) / (r * r * r * r);
      case PotentialKind::Homogeneous:
        return -T(alpha_) * (T(alpha_) + T(1)) * T(k_) * std::pow(r, -T(alpha_) - T(2));
      case PotentialKind::Harmonic: return T(2) * T(k_);
    }
    return T(0);
  }

private:
  Potential(PotentialKind kind, double k, double alpha) : kind_(kind), k_(k), alpha_(alpha) {}

  PotentialKind kind_;
  double k_;
  double alpha_;
};

}  // namespace r4nb
