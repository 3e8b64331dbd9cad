#pragma once

#include <vector>

#include "r4nb/geom4.hpp"
#include "r4nb/potential.hpp"
#include "r4nb/vec4.hpp"

namespace r4nb {

// State of the central-force problem after quotienting out both plane
// rotations: two radii with conjugate momenta, plus the conserved momentum
// pair entering through centrifugal terms.
struct ReducedCentralState {
  double r1, r2;
  double p_r1, p_r2;
  double mu1, mu2;
};

// The same reduced system in polar coordinates r1 = R cos(phi),
// r2 = R sin(phi).
struct PolarReducedState {
  double R;
  double phi;  // in (0, pi/2) away from the principal planes
  double P_R;
  double P_phi;
};

double reduced_energy(const ReducedCentralState& s, const Potential& V);

// Amended potential mu1^2/(2 r1^2) + mu2^2/(2 r2^2) + V(sqrt(r1^2 + r2^2)).
double effective_potential(double mu1, double mu2, double r1, double r2, const Potential& V);
bool hill_allowed(double h, double mu1, double mu2, double r1, double r2, const Potential& V);

// Smallest radius sqrt(r1^2+r2^2) compatible with energy h: the first root of
// (|mu1|+|mu2|)^2/(2R^2) + V(R) = h (the minimum of the amended potential over
// the sphere of radius R). Returns 0 when the centrifugal barrier is absent.
double hill_min_radius(double h, double mu1, double mu2, const Potential& V);

// Angular rates recovered from the reduced motion: (mu1/r1^2, mu2/r2^2).
std::pair<double, double> reconstruction_rates(const ReducedCentralState& s);

PolarReducedState to_polar_reduced(const ReducedCentralState& s);
ReducedCentralState from_polar_reduced(const PolarReducedState& p, double mu1, double mu2);

// Angles of the proportional-motion manifolds: tan(phi) = sqrt(mu2/mu1),
// restricted to (0, pi/2). Throws ZeroMomentum / NoRealRoot.
std::vector<double> proportional_phi(double mu1, double mu2);

// All positive roots of R^3 V'(R) = (mu1 + mu2)^2 on a logarithmic scan range,
// bisected and polished by Newton to 1e-12 relative. Jacobi potentials are
// degenerate for this equation and are rejected.
std::vector<double> radial_equilibrium(const Potential& V, double mu1, double mu2);

// (||p||^2 - k/||q||) q - (q.p) p
Vec4 lrl_vector(const Vec4& q, const Vec4& p, double k);

struct KeplerOrbitParams {
  double p;     // semi-latus rectum (mu1^2 + mu2^2)/k
  double eps;   // eccentricity
  bool hyperbolic;
};

KeplerOrbitParams kepler_orbit_params(double h, double mu1, double mu2, double k);

// True iff the conserved momentum pair vanishes exactly. Only meaningful for
// potentials less singular than the centrifugal barrier.
bool is_collision_possible(double mu1, double mu2, const Potential& V);

struct IntegrateOpts {
  double dt = 1e-3;
  long steps = 1000;
  long output_every = 1;
  double collision_threshold = 1e-6;
};

struct CentralSample {
  double t;
  Vec4 q, p;
  double energy;
  double mu1, mu2;
  double area_xy, area_zw;
};

struct CentralTrajectory {
  std::vector<CentralSample> samples;
  bool collided = false;
  double final_time = 0.0;
  long steps_completed = 0;
};

// Leapfrog integration of the Cartesian Hamiltonian 1/2 |p|^2 + V(|q|).
// Stops early (collided = true) when |q| falls under the threshold.
CentralTrajectory integrate_central(const Vec4& q0, const Vec4& p0, const Potential& V,
                                    const IntegrateOpts& opts);

}  // namespace r4nb
