#include "r4nb/geom4.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "r4nb/error.hpp"

namespace r4nb {

namespace {

constexpr double kPi = std::numbers::pi;

// The invariant-plane split is ill-conditioned when the two rotation angles
// nearly coincide (eigenvector error ~ eps/gap), so the factorization runs in
// extended precision and tries several plane constructions, keeping whichever
// reassembles the input best.
using LD = long double;
using Mat4L = Eigen::Matrix<LD, 4, 4>;
using Vec4L = Eigen::Matrix<LD, 4, 1>;
using PlaneL = Eigen::Matrix<LD, 4, 2>;

constexpr LD kPiL = std::numbers::pi_v<LD>;

// wrap to (-pi, pi]
LD wrap_angle(LD a) {
  a = std::remainder(a, 2.0L * kPiL);
  if (a <= -kPiL) a = kPiL;
  return a;
}

struct Split {
  PlaneL a;
  PlaneL b;
};

// Unit vector orthogonal to span{v1, v2}, seeded from the standard basis
// vector with the largest residual.
Vec4L complement_seed(const Vec4L& v1, const Vec4L& v2) {
  Vec4L best = Vec4L::Zero();
  LD best_norm = -1.0L;
  for (int i = 0; i < 4; ++i) {
    Vec4L c = Vec4L::Unit(i);
    c -= v1 * v1.dot(c) + v2 * v2.dot(c);
    LD n = c.norm();
    if (n > best_norm) {
      best_norm = n;
      best = c;
    }
  }
  return best / best_norm;
}

// Plane pair from the eigenvectors of a symmetric matrix whose spectrum is
// two double eigenvalues; skipped when the clusters are too close to trust.
void add_eigen_split(const Mat4L& sym, std::vector<Split>& out) {
  Eigen::SelfAdjointEigenSolver<Mat4L> es(sym);
  const auto& ev = es.eigenvalues();
  LD scale = std::max({std::abs(ev[0]), std::abs(ev[3]), LD(1e-300)});
  if (ev[2] - ev[1] <= 256 * std::numeric_limits<LD>::epsilon() * scale) return;
  Split s;
  s.a = es.eigenvectors().template leftCols<2>();
  s.b = es.eigenvectors().template rightCols<2>();
  out.push_back(s);
}

// Isoclinic construction: when K^2 is (close to) a negative scalar, any unit
// vector spans an invariant plane together with its K-image.
Split isoclinic_split(const Mat4L& K) {
  Vec4L v1 = Vec4L::Unit(0);
  Vec4L k1 = K * v1;
  LD s = k1.norm();
  Split sp;
  if (s < 1e-300) {
    sp.a << Vec4L::Unit(0), Vec4L::Unit(1);
    sp.b << Vec4L::Unit(2), Vec4L::Unit(3);
    return sp;
  }
  Vec4L v2 = k1 / s;
  Vec4L v3 = complement_seed(v1, v2);
  Vec4L v4 = K * v3;
  v4 -= v1 * v1.dot(v4) + v2 * v2.dot(v4) + v3 * v3.dot(v4);
  LD n4 = v4.norm();
  if (n4 < 1e-300) {
    // K degenerate on the complement; finish with any orthonormal vector
    v4 = complement_seed(v3, (v3 + v1).normalized());
    v4 -= v1 * v1.dot(v4) + v2 * v2.dot(v4) + v3 * v3.dot(v4);
    n4 = v4.norm();
  }
  v4 /= n4;
  sp.a << v1, v2;
  sp.b << v3, v4;
  return sp;
}

Mat4L block_form(LD t1, LD t2, bool group) {
  Mat4L m = Mat4L::Zero();
  if (group) {
    m(0, 0) = std::cos(t1); m(0, 1) = -std::sin(t1);
    m(1, 0) = std::sin(t1); m(1, 1) = std::cos(t1);
    m(2, 2) = std::cos(t2); m(2, 3) = -std::sin(t2);
    m(3, 2) = std::sin(t2); m(3, 3) = std::cos(t2);
  } else {
    m(0, 1) = -t1; m(1, 0) = t1;
    m(2, 3) = -t2; m(3, 2) = t2;
  }
  return m;
}

struct FormL {
  LD t1 = 0, t2 = 0;
  Mat4L Q;
  LD resid = std::numeric_limits<LD>::infinity();
};

// Det-fix, canonical ordering, assembly and scoring for one plane split.
// `group` selects rotation semantics (angles measured by atan2, wrapped,
// ordered t1 <= t2) versus Lie-algebra semantics (rates measured linearly,
// ordered |w1| <= |w2|). Ties in the admissible set resolve to the
// lexicographically greatest pair.
FormL score_split(const Mat4L& target, Split sp, bool group) {
  auto measure = [&](const PlaneL& p) -> LD {
    Vec4L im = target * p.col(0);
    if (group) return std::atan2(p.col(1).dot(im), p.col(0).dot(im));
    return p.col(1).dot(im);
  };
  LD a = measure(sp.a);
  LD b = measure(sp.b);

  Mat4L q0;
  q0 << sp.a, sp.b;
  if (q0.determinant() < 0.0L) {
    sp.a.col(1) *= -1.0L;
    a = -a;
  }

  struct Move {
    LD t1, t2;
    bool swap, flip;
  };
  auto norm = [&](LD t) { return group ? wrap_angle(t) : t; };
  const std::array<Move, 4> cands = {{{norm(a), norm(b), false, false},
                                      {norm(b), norm(a), true, false},
                                      {norm(-a), norm(-b), false, true},
                                      {norm(-b), norm(-a), true, true}}};
  const Move* best = nullptr;
  for (const auto& c : cands) {
    bool ordered = group ? (c.t1 <= c.t2) : (std::abs(c.t1) <= std::abs(c.t2));
    if (!ordered) continue;
    if (!best || c.t1 > best->t1 || (c.t1 == best->t1 && c.t2 > best->t2)) best = &c;
  }

  PlaneL pa = sp.a, pb = sp.b;
  if (best->flip) {
    pa.col(1) *= -1.0L;
    pb.col(1) *= -1.0L;
  }
  if (best->swap) std::swap(pa, pb);

  FormL f;
  f.t1 = best->t1;
  f.t2 = best->t2;
  f.Q << pa, pb;
  f.resid = (f.Q * block_form(f.t1, f.t2, group) * f.Q.transpose() - target)
                .cwiseAbs()
                .maxCoeff();
  return f;
}

FormL best_form(const Mat4L& target, const Mat4L& sym, const Mat4L& skew, bool group) {
  std::vector<Split> splits;
  add_eigen_split(sym, splits);
  add_eigen_split(skew * skew, splits);
  splits.push_back(isoclinic_split(skew));

  FormL best;
  for (const auto& sp : splits) {
    FormL f = score_split(target, sp, group);
    if (f.resid < best.resid) best = f;
  }
  return best;
}

}  // namespace

Mat4 hat(const GroupVelocity& omega) {
  Mat4 m = Mat4::Zero();
  m(0, 1) = -omega.omega1;
  m(1, 0) = omega.omega1;
  m(2, 3) = -omega.omega2;
  m(3, 2) = omega.omega2;
  return m;
}

Mat4 exp_hat(const GroupVelocity& omega) {
  Mat4 m = Mat4::Zero();
  double c1 = std::cos(omega.omega1), s1 = std::sin(omega.omega1);
  double c2 = std::cos(omega.omega2), s2 = std::sin(omega.omega2);
  m(0, 0) = c1; m(0, 1) = -s1;
  m(1, 0) = s1; m(1, 1) = c1;
  m(2, 2) = c2; m(2, 3) = -s2;
  m(3, 2) = s2; m(3, 3) = c2;
  return m;
}

RotationNormalForm rotation_normal_form(const Mat4& R, double tol) {
  Mat4 gram = R.transpose() * R - Mat4::Identity();
  if (gram.cwiseAbs().maxCoeff() > tol)
    fail(ErrorCode::NotARotation, "matrix is not orthogonal within tolerance");
  if (R.determinant() < 0.0)
    fail(ErrorCode::NotARotation, "matrix is orientation-reversing");

  if ((R - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-13)
    return {0.0, 0.0, Mat4::Identity()};
  if ((R + Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-13)
    return {kPi, kPi, Mat4::Identity()};

  Mat4L Rl = R.cast<LD>();
  Mat4L M = 0.5L * (Rl + Rl.transpose());
  Mat4L K = 0.5L * (Rl - Rl.transpose());
  FormL f = best_form(Rl, M, K, true);
  return {static_cast<double>(f.t1), static_cast<double>(f.t2), f.Q.cast<double>()};
}

LieNormalForm lie_normal_form(const Mat4& xi, double tol) {
  if ((xi + xi.transpose()).cwiseAbs().maxCoeff() > tol)
    fail(ErrorCode::NotAntisymmetric, "matrix is not antisymmetric within tolerance");

  if (xi.cwiseAbs().maxCoeff() < 1e-300) return {{0.0, 0.0}, Mat4::Identity()};

  Mat4L X = (0.5L * (xi.cast<LD>() - xi.transpose().cast<LD>()));
  Mat4L A = -X * X;  // symmetric, eigenvalues omega_j^2 twice each
  FormL f = best_form(X, A, X, false);
  return {{static_cast<double>(f.t1), static_cast<double>(f.t2)}, f.Q.cast<double>()};
}

Vec4 infinitesimal_action(const GroupVelocity& omega, const Vec4& q) {
  return {-omega.omega1 * q.y, omega.omega1 * q.x, -omega.omega2 * q.w, omega.omega2 * q.z};
}

OrbitType isotropy_type(const Vec4& q, double tol) {
  bool xy = std::max(std::abs(q.x), std::abs(q.y)) > tol;
  bool zw = std::max(std::abs(q.z), std::abs(q.w)) > tol;
  if (!xy && !zw) return OrbitType::FullTorus;
  if (xy && !zw) return OrbitType::SO2zw;  // stabilized by rotations of the z-w plane
  if (!xy && zw) return OrbitType::SO2xy;
  return OrbitType::Trivial;
}

const char* orbit_type_name(OrbitType t) {
  switch (t) {
    case OrbitType::FullTorus: return "FullTorus";
    case OrbitType::SO2zw: return "SO2zw";
    case OrbitType::SO2xy: return "SO2xy";
    case OrbitType::Trivial: return "Trivial";
  }
  return "Unknown";
}

DoublePolar to_double_polar(const Vec4& q, double tol) {
  DoublePolar dp;
  dp.r1 = std::hypot(q.x, q.y);
  dp.r2 = std::hypot(q.z, q.w);
  dp.angle1_defined = dp.r1 > tol;
  dp.angle2_defined = dp.r2 > tol;
  dp.theta1 = dp.angle1_defined ? std::atan2(q.y, q.x) : 0.0;
  dp.theta2 = dp.angle2_defined ? std::atan2(q.w, q.z) : 0.0;
  return dp;
}

DoublePolar to_double_polar(const Vec4& q, const Vec4& p, double tol) {
  DoublePolar dp = to_double_polar(q, tol);
  dp.has_momenta = true;
  dp.p_theta1 = q.x * p.y - q.y * p.x;
  dp.p_theta2 = q.z * p.w - q.w * p.z;
  dp.p_r1 = dp.angle1_defined ? (q.x * p.x + q.y * p.y) / dp.r1 : std::hypot(p.x, p.y);
  dp.p_r2 = dp.angle2_defined ? (q.z * p.z + q.w * p.w) / dp.r2 : std::hypot(p.z, p.w);
  return dp;
}

void from_double_polar(const DoublePolar& dp, Vec4& q_out, Vec4& p_out) {
  if (dp.r1 < 0.0 || dp.r2 < 0.0)
    fail(ErrorCode::DomainError, "double-polar radii must be nonnegative");
  double c1 = std::cos(dp.theta1), s1 = std::sin(dp.theta1);
  double c2 = std::cos(dp.theta2), s2 = std::sin(dp.theta2);
  q_out = {dp.r1 * c1, dp.r1 * s1, dp.r2 * c2, dp.r2 * s2};
  if (!dp.has_momenta) {
    p_out = {0.0, 0.0, 0.0, 0.0};
    return;
  }
  auto plane = [](double r, double c, double s, double pr, double pt, double& px, double& py) {
    if (r == 0.0) {
      if (std::abs(pt) > 0.0)
        fail(ErrorCode::DomainError, "angular momentum must vanish at zero radius");
      px = pr * c;
      py = pr * s;
      return;
    }
    px = pr * c - pt * s / r;
    py = pr * s + pt * c / r;
  };
  plane(dp.r1, c1, s1, dp.p_r1, dp.p_theta1, p_out.x, p_out.y);
  plane(dp.r2, c2, s2, dp.p_r2, dp.p_theta2, p_out.z, p_out.w);
}

Vec4 from_double_polar(const DoublePolar& dp) {
  Vec4 q, p;
  from_double_polar(dp, q, p);
  return q;
}

std::pair<double, double> momentum_map_single(const Vec4& q, const Vec4& p) {
  return {q.x * p.y - q.y * p.x, q.z * p.w - q.w * p.z};
}

}  // namespace r4nb
