#pragma once

// Relative equilibria of the n-body problem in R^4: augmented potential,
// RE residual, balanced-configuration solver, central-configuration test,
// and the collinear case analysis.

#include <utility>
#include <vector>

#include "r4nb/geom4.hpp"
#include "r4nb/nbody.hpp"

namespace r4nb {

struct REResult {
  GroupVelocity omega{0.0, 0.0};
  // isotropy can leave a rotation rate free; flagged, never reported as 0
  bool omega1_undetermined = false;
  bool omega2_undetermined = false;
  double residual_norm = 0.0;
  bool central = false;
  double lambda = 0.0;  // meaningful when central
};

struct CollinearSpec {
  Vec4 q0{0, 0, 0, 0};
  std::vector<double> lambdas;
};

enum class CollinearCase { OxyPlane, OzwPlane, Mixed };

const char* collinear_case_name(CollinearCase c);

struct CollinearClassification {
  CollinearCase tag = CollinearCase::OxyPlane;
  double omega_used = 0.0;
  std::vector<double> residuals;  // per body, scalar condition defect
  double max_residual = 0.0;
  // for the mixed case: the scaled principal-plane projections must obey
  // the same scalar condition; their worst defect is recorded here
  double projection_max_residual = 0.0;
};

// U(q) - 1/2 sum_j m_j |hat(omega) q_j|^2
double augmented_potential(const Configuration& c, const GroupVelocity& omega,
                           const Potential& V, bool mass_weighted = false);

// Per-body defect grad_j U + m_j hat(omega)^2 q_j; zero exactly at a
// relative equilibrium with that group velocity.
std::vector<Vec4> re_residual(const Configuration& c, const GroupVelocity& omega,
                              const Potential& V, bool mass_weighted = false);

double re_residual_norm(const Configuration& c, const GroupVelocity& omega,
                        const Potential& V, bool mass_weighted = false);

// Least-squares rotation rates (omega1^2, omega2^2) decoupled per plane.
// Throws NotBalanced when the best rates leave a residual above tol or a
// squared rate comes out negative. tol < 0 picks 1e-9 scaled by the
// configuration diameter.
REResult solve_balanced_omega(const Configuration& c, const Potential& V,
                              bool mass_weighted = false, double tol = -1.0);

// Least-squares multiplier test for grad U = -lambda M q.
std::pair<bool, double> is_central(const Configuration& c, const Potential& V,
                                   bool mass_weighted = false, double tol = -1.0);

// Rotate a configuration so the given antisymmetric velocity matrix becomes
// block diagonal; returns the aligned bodies and the normal form used.
std::pair<Configuration, LieNormalForm> align_to_principal_axes(
    const Configuration& c, const Mat4& xi);

// Case analysis for collinear arrangements q_j = lambda_j q0. Evaluates the
// scalar balance condition per body and classifies by the plane of q0;
// mixed-plane data requires omega1 = omega2 (InvalidCase otherwise).
CollinearClassification collinear_re_classify(const CollinearSpec& spec,
                                              const GroupVelocity& omega,
                                              const Potential& V,
                                              const std::vector<double>& masses);

}  // namespace r4nb
