#pragma once

// Spectral analysis of the equal-mass equilateral relative equilibria:
// finite-difference Hessian of the reduced Hamiltonian with closed-form
// sub-block cross-checks, the 2x2 angular coupling matrix and its spectrum,
// the 6x6 coupling determinant, and the kernel / nilpotent structure of the
// linearized reduced flow.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>

#include "r4nb/potential.hpp"
#include "r4nb/threebody.hpp"

namespace r4nb {

// D2H in the packing order (r1, r2, s1, s2, phi1, phi2, then momenta).
// `full`, `fd_kinetic` and `fd_potential` are Richardson-refined central
// differences of the energy, of its kinetic part and of its potential part;
// the 2x2 members are the closed forms they are tested against.
struct HessianBlocks {
  Eigen::MatrixXd full;          // 12x12, symmetric
  Eigen::MatrixXd fd_kinetic;    // 12x12
  Eigen::MatrixXd fd_potential;  // 12x12
  Eigen::Matrix<double, 6, 6> A;  // position-position block of full
  Eigen::Matrix<double, 6, 6> B;  // position-momentum block
  Eigen::Matrix<double, 6, 6> D;  // momentum-momentum block
  // kinetic closed forms: diag 3 P_j^2/(M R_j^4) over both planes, the
  // mixed R/P_Phi and S/P_Phi couplings, and the momentum metric
  Eigen::Matrix2d a1, a2, b1, b2, d1, d2, d3;
  // angular block of D2V at the equilateral point: a r0 [[1,g^2],[g^2,g^4]]
  Eigen::Matrix2d a_block;
  double a_coeff = 0.0;
  double gamma = 0.0;
  double r0 = 0.0;
};

// Requires an equilibrium of the reduced vector field (norm below 1e-8),
// throws NotAnEquilibrium otherwise. The closed-form a_block member is
// meaningful on the equal-mass equilateral family, where gamma and r0 are
// read off the state geometry.
HessianBlocks hessian(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                      const Potential& V);

// a = 3 sqrt3 / (8 (1+g^2)^{3/2}) (l V''(l) - V'(l)); DomainError for l <= 0.
double a_coefficient(const Potential& V, double l, double gamma);

// Eigenpairs of a [[1,g^2],[g^2,g^4]]: always (0, (-g^2, 1)) and
// (a (1+g^4), (1, g^2)).
struct AMatrixSpectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Eigen::Vector2d u1;
  Eigen::Vector2d u2;
};
AMatrixSpectrum a_matrix_spectrum(double a, double gamma);

// The 6x6 coupling matrix over the (R, S, P_Phi) directions,
//   [[A_RR, A_RS, b1], [A_SR, A_SS, b2], [b1, b2, d3]],
// taken from the finite-difference Hessian, and its determinant.
std::pair<Eigen::Matrix<double, 6, 6>, double> f_matrix(const HessianBlocks& blocks);

// M = J D2H with J = [[0, I6], [-I6, 0]].
Eigen::MatrixXd linearize(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                          const Potential& V);

enum class StabilityVerdict { Unstable, Indeterminate };
const char* stability_verdict_name(StabilityVerdict v);

struct SpectralReport {
  std::array<std::complex<double>, 12> eigenvalues;
  int dim_ker_m = 0;
  int dim_ker_m2 = 0;
  double det_f = 0.0;
  double max_real_part = 0.0;
  bool f_nonsingular = false;
  bool nilpotent = false;
  bool spectrally_unstable = false;
  StabilityVerdict verdict = StabilityVerdict::Indeterminate;
};

// Kernel dimensions via singular values under 1e-8 of the largest one;
// nilpotent when ker(M^2) strictly contains ker(M). Unstable when an
// eigenvalue real part exceeds 1e-6 of the spectral radius (a hyperbolic
// quartet), or when the kernel carries a nilpotent part while F is
// nonsingular (drift); Indeterminate otherwise. F nonsingularity is judged
// on its singular values when they are supplied, on det_f != 0 otherwise.
SpectralReport spectral_report(const Eigen::MatrixXd& M, double det_f,
                               double f_sigma_min = 0.0, double f_sigma_max = 0.0);

// Convenience pipeline: hessian, F matrix, linearization and report for one
// equilibrium state.
SpectralReport stability_analysis(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                                  const Potential& V);

// Unit vector spanning ker(M^2) modulo ker(M), for seeding drift tests.
Eigen::VectorXd nilpotent_direction(const Eigen::MatrixXd& M);

}  // namespace r4nb
