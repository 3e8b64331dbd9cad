#pragma once

#include <Eigen/Dense>

#include "r4nb/vec4.hpp"

namespace r4nb {

using Mat4 = Eigen::Matrix4d;

// Angular velocity of the two commuting plane rotations (x-y and z-w).
struct GroupVelocity {
  double omega1 = 0.0;
  double omega2 = 0.0;
};

struct RotationNormalForm {
  double theta1;  // in (-pi, pi], theta1 <= theta2
  double theta2;
  Mat4 Q;         // special orthogonal; R = Q * S(theta1, theta2) * Q^T
};

struct LieNormalForm {
  GroupVelocity omega;  // |omega1| <= |omega2|
  Mat4 Q;               // special orthogonal; xi = Q * hat(omega) * Q^T
};

enum class OrbitType { FullTorus, SO2zw, SO2xy, Trivial };

const char* orbit_type_name(OrbitType t);

// Double-polar chart: (x,y) = r1 (cos t1, sin t1), (z,w) = r2 (cos t2, sin t2).
// Conjugate momenta follow the usual polar rules per plane; p_theta equals the
// plane's angular momentum x p_y - y p_x.
struct DoublePolar {
  double r1 = 0.0, theta1 = 0.0;
  double r2 = 0.0, theta2 = 0.0;
  double p_r1 = 0.0, p_theta1 = 0.0;
  double p_r2 = 0.0, p_theta2 = 0.0;
  bool has_momenta = false;
  // set to false when the corresponding radius is below tolerance; the angle
  // is then 0 by convention
  bool angle1_defined = true;
  bool angle2_defined = true;
};

Mat4 hat(const GroupVelocity& omega);

// Closed-form exponential of hat(omega): block rotations by omega1, omega2.
Mat4 exp_hat(const GroupVelocity& omega);

// S(theta1, theta2) is the same block-rotation matrix evaluated at angles.
inline Mat4 s_matrix(double theta1, double theta2) { return exp_hat({theta1, theta2}); }

// Factor R in SO(4) as Q S(theta1, theta2) Q^T with theta1 <= theta2 and
// det Q = +1. The residual sign ambiguity (negating both angles) is resolved
// toward the lexicographically greatest ascending pair, so conjugates of
// S(a, b) with 0 <= a <= b recover (a, b) exactly.
// Throws NotARotation when R fails orthogonality or orientation checks.
RotationNormalForm rotation_normal_form(const Mat4& R, double tol = 1e-8);

// Factor antisymmetric xi as Q hat(omega) Q^T, |omega1| <= |omega2|, same
// sign convention as above. Throws NotAntisymmetric.
LieNormalForm lie_normal_form(const Mat4& xi, double tol = 1e-8);

// d/dt|_0 of exp(t hat(omega)) q: (-w1 y, w1 x, -w2 w, w2 z).
Vec4 infinitesimal_action(const GroupVelocity& omega, const Vec4& q);

OrbitType isotropy_type(const Vec4& q, double tol = 1e-12);

DoublePolar to_double_polar(const Vec4& q, double tol = 1e-12);
DoublePolar to_double_polar(const Vec4& q, const Vec4& p, double tol = 1e-12);
void from_double_polar(const DoublePolar& dp, Vec4& q_out, Vec4& p_out);
Vec4 from_double_polar(const DoublePolar& dp);

// Angular momentum of the two planes: (x p_y - y p_x, z p_w - w p_z).
std::pair<double, double> momentum_map_single(const Vec4& q, const Vec4& p);

}  // namespace r4nb
