#include "r4nb/rel_equilibria.hpp"

#include <cmath>
#include <limits>

#include "r4nb/error.hpp"

namespace r4nb {

namespace {

double configuration_diameter(const Configuration& c) {
  double d = 0.0;
  for (std::size_t j = 0; j + 1 < c.positions.size(); ++j)
    for (std::size_t k = j + 1; k < c.positions.size(); ++k)
      d = std::max(d, (c.positions[j] - c.positions[k]).norm());
  return d;
}

double auto_tol(const Configuration& c, double tol) {
  if (tol > 0.0) return tol;
  return 1e-9 * std::max(1.0, configuration_diameter(c));
}

// hat(omega)^2 q = (-w1^2 x, -w1^2 y, -w2^2 z, -w2^2 w)
Vec4 omega_sq_apply(const GroupVelocity& w, const Vec4& q) {
  return {-w.omega1 * w.omega1 * q.x, -w.omega1 * w.omega1 * q.y,
          -w.omega2 * w.omega2 * q.z, -w.omega2 * w.omega2 * q.w};
}

}  // namespace

const char* collinear_case_name(CollinearCase c) {
  switch (c) {
    case CollinearCase::OxyPlane: return "OxyPlane";
    case CollinearCase::OzwPlane: return "OzwPlane";
    case CollinearCase::Mixed: return "Mixed";
  }
  return "?";
}

double augmented_potential(const Configuration& c, const GroupVelocity& omega,
                           const Potential& V, bool mass_weighted) {
  double u = potential_energy(c, V, mass_weighted);
  double w1sq = omega.omega1 * omega.omega1;
  double w2sq = omega.omega2 * omega.omega2;
  for (std::size_t j = 0; j < c.positions.size(); ++j) {
    const Vec4& q = c.positions[j];
    u -= 0.5 * c.masses[j] *
         (w1sq * (q.x * q.x + q.y * q.y) + w2sq * (q.z * q.z + q.w * q.w));
  }
  return u;
}

std::vector<Vec4> re_residual(const Configuration& c, const GroupVelocity& omega,
                              const Potential& V, bool mass_weighted) {
  std::vector<Vec4> res = grad_U(c, V, mass_weighted);
  for (std::size_t j = 0; j < res.size(); ++j)
    res[j] += omega_sq_apply(omega, c.positions[j]) * c.masses[j];
  return res;
}

double re_residual_norm(const Configuration& c, const GroupVelocity& omega,
                        const Potential& V, bool mass_weighted) {
  double m = 0.0;
  for (const Vec4& v : re_residual(c, omega, V, mass_weighted))
    m = std::max(m, v.norm());
  return m;
}

REResult solve_balanced_omega(const Configuration& c, const Potential& V,
                              bool mass_weighted, double tol) {
  tol = auto_tol(c, tol);
  auto grad = grad_U(c, V, mass_weighted);

  // per plane, grad_j U = m_j s q_j in least squares with s = omega^2
  double num1 = 0, den1 = 0, num2 = 0, den2 = 0;
  for (std::size_t j = 0; j < c.positions.size(); ++j) {
    const Vec4& q = c.positions[j];
    double m = c.masses[j];
    num1 += m * (grad[j].x * q.x + grad[j].y * q.y);
    den1 += m * m * (q.x * q.x + q.y * q.y);
    num2 += m * (grad[j].z * q.z + grad[j].w * q.w);
    den2 += m * m * (q.z * q.z + q.w * q.w);
  }
  double den_scale = den1 + den2;

  REResult out;
  double s1 = 0.0, s2 = 0.0;
  if (den1 <= 1e-20 * den_scale) {
    out.omega1_undetermined = true;
  } else {
    s1 = num1 / den1;
    if (s1 < -tol)
      fail(ErrorCode::NotBalanced, "negative squared rate in plane 1");
    s1 = std::max(s1, 0.0);
    out.omega.omega1 = std::sqrt(s1);
  }
  if (den2 <= 1e-20 * den_scale) {
    out.omega2_undetermined = true;
  } else {
    s2 = num2 / den2;
    if (s2 < -tol)
      fail(ErrorCode::NotBalanced, "negative squared rate in plane 2");
    s2 = std::max(s2, 0.0);
    out.omega.omega2 = std::sqrt(s2);
  }

  out.residual_norm = re_residual_norm(c, out.omega, V, mass_weighted);
  if (out.residual_norm >= tol)
    fail(ErrorCode::NotBalanced,
         "least-squares residual " + std::to_string(out.residual_norm) +
             " exceeds tolerance");

  if (out.omega1_undetermined || out.omega2_undetermined) {
    // the free rate can always be matched to the fixed one
    out.central = true;
    out.lambda = out.omega1_undetermined ? -s2 : -s1;
  } else {
    out.central = std::abs(s1 - s2) < tol;
    out.lambda = -0.5 * (s1 + s2);
  }
  return out;
}

std::pair<bool, double> is_central(const Configuration& c, const Potential& V,
                                   bool mass_weighted, double tol) {
  tol = auto_tol(c, tol);
  auto grad = grad_U(c, V, mass_weighted);
  double num = 0, den = 0;
  for (std::size_t j = 0; j < c.positions.size(); ++j) {
    double m = c.masses[j];
    num += m * grad[j].dot(c.positions[j]);
    den += m * m * c.positions[j].squared_norm();
  }
  double lambda = den > 0.0 ? -num / den : 0.0;
  double resid = 0.0;
  for (std::size_t j = 0; j < c.positions.size(); ++j) {
    Vec4 r = grad[j] + c.positions[j] * (lambda * c.masses[j]);
    resid = std::max(resid, r.norm());
  }
  return {resid < tol, lambda};
}

std::pair<Configuration, LieNormalForm> align_to_principal_axes(
    const Configuration& c, const Mat4& xi) {
  validate_configuration(c);
  LieNormalForm nf = lie_normal_form(xi);
  Configuration out = c;
  for (Vec4& q : out.positions)
    q = Vec4::from(nf.Q.transpose() * q.eigen());
  return {out, nf};
}

CollinearClassification collinear_re_classify(const CollinearSpec& spec,
                                              const GroupVelocity& omega,
                                              const Potential& V,
                                              const std::vector<double>& masses) {
  const std::size_t n = spec.lambdas.size();
  double r0 = spec.q0.norm();
  if (!(r0 > 0.0)) fail(ErrorCode::InvalidArgument, "q0 must be nonzero");
  if (n < 2) fail(ErrorCode::InvalidArgument, "need at least two bodies");
  if (masses.size() != n)
    fail(ErrorCode::InvalidArgument, "masses and lambdas disagree in length");
  for (double m : masses)
    if (!(m > 0.0)) fail(ErrorCode::InvalidArgument, "masses must be positive");
  double lam_scale = 0.0;
  for (double l : spec.lambdas) lam_scale = std::max(lam_scale, std::abs(l));
  for (std::size_t j = 0; j < n; ++j) {
    if (spec.lambdas[j] == 0.0)
      fail(ErrorCode::InvalidArgument, "lambdas must be nonzero");
    for (std::size_t k = j + 1; k < n; ++k)
      if (std::abs(spec.lambdas[j] - spec.lambdas[k]) <= 1e-12 * lam_scale)
        fail(ErrorCode::InvalidArgument, "lambdas must be distinct");
  }

  double rxy = std::hypot(spec.q0.x, spec.q0.y);
  double rzw = std::hypot(spec.q0.z, spec.q0.w);

  CollinearClassification out;
  if (rzw <= 1e-12 * r0) {
    out.tag = CollinearCase::OxyPlane;
    out.omega_used = omega.omega1;
  } else if (rxy <= 1e-12 * r0) {
    out.tag = CollinearCase::OzwPlane;
    out.omega_used = omega.omega2;
  } else {
    double wscale = std::max({1.0, std::abs(omega.omega1), std::abs(omega.omega2)});
    if (std::abs(omega.omega1 - omega.omega2) > 1e-12 * wscale)
      fail(ErrorCode::InvalidCase,
           "mixed-plane axis requires equal rotation rates");
    out.tag = CollinearCase::Mixed;
    out.omega_used = omega.omega1;
  }

  auto scalar_residuals = [&](double norm_q0) {
    std::vector<double> res(n);
    double w2 = out.omega_used * out.omega_used;
    for (std::size_t j = 0; j < n; ++j) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        double gap = std::abs(spec.lambdas[i] - spec.lambdas[j]) * norm_q0;
        double sgn = spec.lambdas[j] > spec.lambdas[i] ? 1.0 : -1.0;
        lhs += V.eval(gap).d1 * sgn;
      }
      res[j] = lhs - w2 * masses[j] * spec.lambdas[j] * norm_q0;
    }
    return res;
  };

  out.residuals = scalar_residuals(r0);
  for (double r : out.residuals)
    out.max_residual = std::max(out.max_residual, std::abs(r));

  if (out.tag == CollinearCase::Mixed) {
    // the projections rescaled to |q0| must satisfy the same condition
    Vec4 pxy{spec.q0.x, spec.q0.y, 0, 0};
    Vec4 pzw{0, 0, spec.q0.z, spec.q0.w};
    for (const Vec4& proj : {pxy, pzw}) {
      Vec4 scaled = proj * (r0 / proj.norm());
      for (double rr : scalar_residuals(scaled.norm()))
        out.projection_max_residual =
            std::max(out.projection_max_residual, std::abs(rr));
    }
  }
  return out;
}

}  // namespace r4nb
