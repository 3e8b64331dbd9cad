#pragma once

// Three bodies in R^4, reduced by translations and by the two independent
// plane rotations down to six degrees of freedom. Provides the Jacobi
// split, the reduced chart (R_j, S_j, Phi_j) with conjugate momenta, the
// reduced Hamiltonian and its equations of motion, relative-equilibrium
// branch tests, the equilateral equilibrium family, and small propagation
// and root-search utilities on the reduced space.

#include <array>
#include <cmath>
#include <vector>

#include "r4nb/nbody.hpp"
#include "r4nb/potential.hpp"
#include "r4nb/vec4.hpp"

namespace r4nb {

struct ThreeBodyMasses {
  double m1 = 1.0, m2 = 1.0, m3 = 1.0;

  // reduced masses of the two Jacobi vectors
  double M1() const { return m1 * m2 / (m1 + m2); }
  double M2() const { return m3 * (m1 + m2) / (m1 + m2 + m3); }
  // barycentric weights of the first pair; alpha1 + alpha2 = 1
  double alpha1() const { return m2 / (m1 + m2); }
  double alpha2() const { return m1 / (m1 + m2); }
  double total() const { return m1 + m2 + m3; }
};

void validate_threebody_masses(const ThreeBodyMasses& m);

struct JacobiVectors {
  Vec4 u;  // q2 - q1
  Vec4 v;  // q3 relative to the barycenter of the first pair
  ThreeBodyMasses masses;
};

// Jacobi split of a 3-body configuration. The inverse places the centroid
// at the origin.
JacobiVectors to_jacobi(const Configuration& c);
Configuration from_jacobi(const JacobiVectors& jv);

// Reduced chart. R1, R2 are the norms of the projections of u onto the
// Oxy and Ozw planes, S1, S2 the same for v. Phi_j is the angle of the
// plane-j projection of u measured from minus that of v, which puts the
// mutual distances in the form
//   d12^2 = R1^2 + R2^2
//   d13^2 = sum_j S_j^2 + a1^2 R_j^2 - 2 a1 R_j S_j cos Phi_j
//   d23^2 = sum_j S_j^2 + a2^2 R_j^2 + 2 a2 R_j S_j cos Phi_j.
// P_Phi_j is the plane-j angular momentum of u; the one of v is mu_j -
// P_Phi_j, with (mu1, mu2) the conserved momentum pair of the internal
// motion. Zero radii are legal data (motion confined to one principal
// plane) but the energy and the vector field are only defined where every
// radius they divide by is positive.
struct ReducedThreeBodyState {
  double r1 = 1.0, r2 = 1.0;  // plane norms of u
  double s1 = 1.0, s2 = 1.0;  // plane norms of v
  double phi1 = 0.0, phi2 = 0.0;
  double p_r1 = 0.0, p_r2 = 0.0;
  double p_s1 = 0.0, p_s2 = 0.0;
  double p_phi1 = 0.0, p_phi2 = 0.0;
  double mu1 = 0.0, mu2 = 0.0;
};

void validate_reduced_state(const ReducedThreeBodyState& s);

// Packing order used throughout: (r1, r2, s1, s2, phi1, phi2) followed by
// the conjugate momenta in the same order.
std::array<double, 12> reduced_to_array(const ReducedThreeBodyState& s);
ReducedThreeBodyState reduced_from_array(const std::array<double, 12>& z, double mu1,
                                         double mu2);

struct MutualDistances {
  double d12, d13, d23;
};

// Throws CollisionError when any mutual distance is at or below coll_eps.
MutualDistances mutual_distances(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                                 double coll_eps = 1e-12);

// Chart transition from a full phase state. The internal dynamics only
// depends on u and v, so no recentering is assumed, but energies agree
// with the full system exactly when total linear momentum vanishes.
ReducedThreeBodyState reduce_threebody(const PhaseState& s);

// Inverse chart: rebuild a full state with centroid at the origin and zero
// total momentum. psi1, psi2 fix the absolute plane angles of v.
PhaseState threebody_full_state(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                                double psi1 = 0.0, double psi2 = 0.0);

// Reduced Hamiltonian
//   (P_R1^2 + P_Phi1^2/R1^2 + P_R2^2 + P_Phi2^2/R2^2) / (2 M1)
//   + (P_S1^2 + (mu1-P_Phi1)^2/S1^2 + P_S2^2 + (mu2-P_Phi2)^2/S2^2) / (2 M2)
//   + V(d12) + V(d13) + V(d23).
double reduced_energy_3b(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                         const Potential& V, double coll_eps = 1e-12);

// Same energy over any scalar type, for high-precision differentiation.
// z follows the packing order above; no collision or domain checks.
template <typename T>
T reduced_energy_3b_t(const std::array<T, 12>& z, T mu1, T mu2, const ThreeBodyMasses& m,
                      const Potential& V) {
  using std::cos;
  using std::sqrt;
  const T r1 = z[0], r2 = z[1], s1 = z[2], s2 = z[3];
  const T c1 = cos(z[4]), c2 = cos(z[5]);
  const T p_r1 = z[6], p_r2 = z[7], p_s1 = z[8], p_s2 = z[9];
  const T p_phi1 = z[10], p_phi2 = z[11];
  const T a1 = T(m.alpha1()), a2 = T(m.alpha2());
  const T q1 = mu1 - p_phi1, q2 = mu2 - p_phi2;

  const T d12 = sqrt(r1 * r1 + r2 * r2);
  const T d13 = sqrt(s1 * s1 + a1 * a1 * r1 * r1 - T(2) * a1 * r1 * s1 * c1 + s2 * s2 +
                     a1 * a1 * r2 * r2 - T(2) * a1 * r2 * s2 * c2);
  const T d23 = sqrt(s1 * s1 + a2 * a2 * r1 * r1 + T(2) * a2 * r1 * s1 * c1 + s2 * s2 +
                     a2 * a2 * r2 * r2 + T(2) * a2 * r2 * s2 * c2);

  const T kin_u = (p_r1 * p_r1 + p_phi1 * p_phi1 / (r1 * r1) + p_r2 * p_r2 +
                   p_phi2 * p_phi2 / (r2 * r2)) /
                  (T(2) * T(m.M1()));
  const T kin_v =
      (p_s1 * p_s1 + q1 * q1 / (s1 * s1) + p_s2 * p_s2 + q2 * q2 / (s2 * s2)) /
      (T(2) * T(m.M2()));
  return kin_u + kin_v + V.value_t(d12) + V.value_t(d13) + V.value_t(d23);
}

// Hamiltonian vector field in the packing order above. Requires all four
// radii positive; throws CollisionError on near-coincident bodies.
std::array<double, 12> eom_3b(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                              const Potential& V, double coll_eps = 1e-12);

// Branches of the relative-equilibrium conditions. Collinear when both
// sin Phi_j vanish; IsoscelesType when the mass-weighted balance
// m2 V'(d13)/d13 = m1 V'(d23)/d23 holds instead.
enum class REBranch { Collinear, IsoscelesType, Neither };
const char* re_branch_name(REBranch b);

REBranch re_branch(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                   const Potential& V, double tol = 1e-9);

// Equilateral equilibrium family for equal unit masses. With gamma =
// sqrt|mu2/mu1| and c1 = mu1/3 the radial scale r0 solves
//   3 r^4 V'(l(r)) / l(r) = c1^2,   l(r) = r sqrt(3 (1 + gamma^2)),
// found by bracketing on a log grid and Newton polishing. Returns the
// state (R, S) = (r0 sqrt3, gamma r0 sqrt3, 3 r0/2, 3 gamma r0/2),
// Phi_j = -pi/2, with P_Phi_j = mu_j/2 and vanishing radial momenta; all
// three mutual distances equal l(r0). For the scale-free inverse-square
// potential the equation degenerates: on the continuum c1^2 =
// 2k/(3(1+gamma^2)^2) every radius works (r0 = 1 is returned), off it the
// call throws DegeneratePotential.
ReducedThreeBodyState equilateral_equilibrium(double mu1, double mu2, const Potential& V);

// Damped Gauss-Newton search for a zero of the reduced vector field at the
// seed's fixed (mu1, mu2). Throws NoConvergence.
struct EquilibriumSearchOpts {
  double tol = 1e-11;  // absolute bound on the vector-field norm
  int max_iter = 200;
};
ReducedThreeBodyState find_equilibrium_3b(const ReducedThreeBodyState& seed,
                                          const ThreeBodyMasses& m, const Potential& V,
                                          const EquilibriumSearchOpts& opts = {});

struct Reduced3BSample {
  double t = 0.0;
  ReducedThreeBodyState state;
  double energy = 0.0;
};

struct Reduced3BTrajectory {
  std::vector<Reduced3BSample> samples;
  bool collided = false;
  double final_time = 0.0;
  long steps_completed = 0;
};

struct Reduced3BIntegrateOpts {
  double dt = 1e-3;
  long steps = 1000;
  long output_every = 1;
  double collision_threshold = 1e-6;
};

// Classical fourth-order Runge-Kutta on the reduced system. Stops with
// collided = true when a mutual distance or a chart radius falls below the
// collision threshold.
Reduced3BTrajectory integrate_reduced_3b(const ReducedThreeBodyState& s0,
                                         const ThreeBodyMasses& m, const Potential& V,
                                         const Reduced3BIntegrateOpts& opts);

}  // namespace r4nb
