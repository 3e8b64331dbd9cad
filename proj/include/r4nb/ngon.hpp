#pragma once

// Regular n-gons in R^4 built from a pair of rotation blocks, their
// planar / skew classification, the discretely reduced two degree of
// freedom Hamiltonian, and the RE radii equations.

#include <utility>

#include "r4nb/nbody.hpp"
#include "r4nb/potential.hpp"

namespace r4nb {

// Vertex i sits at double-polar angles theta_j + 2 pi a_j i / b_j with the
// common radii (r1, r2). A block with r_j = 0 is inactive and its integer
// data is ignored.
struct NGonSpec {
  int a1 = 1;
  int b1 = 3;
  int a2 = 1;
  int b2 = 3;
  double r1 = 1.0;
  double r2 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

// InvalidArgument unless the integer data on active blocks is positive with
// b >= 2, radii are finite and nonnegative, and at least one block is active.
void validate_ngon_spec(const NGonSpec& spec);

// number of vertices: lcm of the b_j over active blocks
int ngon_order(const NGonSpec& spec);

enum class NGonTag { PlanarPrincipal, PlanarGeneral, TypeI, TypeII };

const char* ngon_tag_name(NGonTag tag);

struct NGonClass {
  NGonTag tag = NGonTag::PlanarPrincipal;
  int n = 0;
  // distinct vertex counts of the two plane projections
  int proj1 = 0;
  int proj2 = 0;
};

// All n vertices with unit masses; DegenerateSpec if two coincide (only
// possible when gcd(a_j, b_j) > 1).
Configuration build_ngon(const NGonSpec& spec);

NGonClass classify_ngon(const NGonSpec& spec);

// Both projections are n-gons (b1 = b2 = n): can a relabelling make both
// convex at once? NotApplicable when min(b1, b2) < n.
bool is_synchronised(const NGonSpec& spec);

// Distance between vertex i and vertex i+k:
// 2 sqrt(r1^2 sin^2(k a1 pi / b1) + r2^2 sin^2(k a2 pi / b2))
double pair_distance(const NGonSpec& spec, int k);

// Reduced Hamiltonian on the fixed-point set of the cyclic symmetry:
// (n/2)(p_r1^2 + c1^2/r1^2 + p_r2^2 + c2^2/r2^2) + (n/2) sum_k V(2 s_k).
// The radii arguments are the dynamical values; the spec only supplies the
// block data. Inactive spec blocks require r = 0 and c = 0.
double reduced_ngon_energy(double r1, double p_r1, double r2, double p_r2,
                           double c1, double c2, const NGonSpec& spec,
                           const Potential& V);

// Radii making the n-gon a relative equilibrium for the given per-body
// angular momenta: c_j^2 / r_j^4 = sum_k [V'(2 s_k)/s_k] sin^2(k a_j pi/b_j).
// Damped Newton seeded from the homogeneous closed form; planar similar
// specs are solved along the ray r2 = sqrt|c2/c1| r1.
std::pair<double, double> solve_re_radii(const NGonSpec& spec, double c1,
                                         double c2, const Potential& V);

// Symmetric full phase state: every body carries the common radial momenta
// and per-body angular momenta (c1, c2), so the total momentum map is
// (n c1, n c2).
PhaseState ngon_full_state(const NGonSpec& spec, double p_r1, double p_r2,
                           double c1, double c2);

}  // namespace r4nb
