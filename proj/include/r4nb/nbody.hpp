#pragma once

// General n-body problem in R^4: pair potential energy and gradient,
// Hamiltonian, total momentum map, centre-of-mass handling, and a
// fixed-step leapfrog propagator.

#include <utility>
#include <vector>

#include "r4nb/potential.hpp"
#include "r4nb/vec4.hpp"

namespace r4nb {

struct Configuration {
  std::vector<Vec4> positions;
  std::vector<double> masses;

  std::size_t size() const { return positions.size(); }
};

struct PhaseState {
  Configuration config;
  std::vector<Vec4> momenta;
};

// Throws InvalidArgument unless sizes match, n >= 1, masses positive, and
// all entries are finite.
void validate_configuration(const Configuration& c);
void validate_phase_state(const PhaseState& s);

// Sum over unordered pairs of V(|q_j - q_k|); each term picks up a factor
// m_j m_k when mass_weighted is set. Pair distances at or below coll_eps
// raise CollisionError.
double potential_energy(const Configuration& c, const Potential& V,
                        bool mass_weighted = false, double coll_eps = 1e-12);

// Per-body gradient of the pair potential, same weighting convention.
std::vector<Vec4> grad_U(const Configuration& c, const Potential& V,
                         bool mass_weighted = false, double coll_eps = 1e-12);

double kinetic_energy(const PhaseState& s);

double total_energy(const PhaseState& s, const Potential& V,
                    bool mass_weighted = false);

// Angular momentum (mu1, mu2) in the two coordinate planes, summed over
// bodies.
std::pair<double, double> momentum_map_total(const PhaseState& s);

Vec4 mass_centroid(const Configuration& c);

// Shift the mass-weighted centroid to the origin.
Configuration recenter(const Configuration& c);

struct NBodyIntegrateOpts {
  double dt = 1e-3;
  long steps = 1000;
  long output_every = 1;
  double collision_threshold = 1e-6;
  bool mass_weighted = false;
};

struct NBodySample {
  double t = 0.0;
  std::vector<Vec4> positions;
  std::vector<Vec4> momenta;
  double energy = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  Vec4 centroid{0, 0, 0, 0};
};

struct NBodyTrajectory {
  std::vector<NBodySample> samples;
  bool collided = false;
  double final_time = 0.0;
  long steps_completed = 0;
};

// Stoermer-Verlet (kick-drift-kick) with a fixed pair summation order.
// Stops with collided=true when any pair distance drops below the
// collision threshold.
NBodyTrajectory integrate(const PhaseState& s0, const Potential& V,
                          const NBodyIntegrateOpts& opts);

}  // namespace r4nb
