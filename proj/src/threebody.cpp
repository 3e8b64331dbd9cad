#include "r4nb/threebody.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "r4nb/error.hpp"
#include "r4nb/roots.hpp"

namespace r4nb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Polar split of one plane projection of a (position, momentum) pair. The
// angle of the zero vector is taken as 0; its radial momentum is 0 as well,
// which is only consistent when the motion stays out of that plane.
struct PlanePolar {
  double r = 0.0;
  double angle = 0.0;
  double p_r = 0.0;
  double p_ang = 0.0;
};

PlanePolar plane_polar(double qx, double qy, double px, double py) {
  PlanePolar out;
  out.r = std::hypot(qx, qy);
  out.p_ang = qx * py - qy * px;
  if (out.r > 0.0) {
    out.angle = std::atan2(qy, qx);
    out.p_r = (qx * px + qy * py) / out.r;
  }
  return out;
}

// p^2 / r^2 with the principal-plane limit: a zero radius is admissible
// only when the conjugate angular momentum vanishes with it.
double angular_term(double p, double r) {
  if (r > 0.0) return (p / r) * (p / r);
  if (p == 0.0) return 0.0;
  fail(ErrorCode::DomainError, "angular momentum about a collapsed plane radius");
}

double field_norm(const std::array<double, 12>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

}  // namespace

void validate_threebody_masses(const ThreeBodyMasses& m) {
  for (double v : {m.m1, m.m2, m.m3})
    if (!std::isfinite(v) || v <= 0.0)
      fail(ErrorCode::InvalidArgument, "masses must be positive and finite");
}

JacobiVectors to_jacobi(const Configuration& c) {
  validate_configuration(c);
  if (c.size() != 3) fail(ErrorCode::InvalidArgument, "Jacobi split needs exactly three bodies");
  JacobiVectors jv;
  jv.masses = ThreeBodyMasses{c.masses[0], c.masses[1], c.masses[2]};
  const double pair = jv.masses.m1 + jv.masses.m2;
  jv.u = c.positions[1] - c.positions[0];
  jv.v = c.positions[2] -
         (c.positions[0] * jv.masses.m1 + c.positions[1] * jv.masses.m2) / pair;
  return jv;
}

Configuration from_jacobi(const JacobiVectors& jv) {
  validate_threebody_masses(jv.masses);
  const ThreeBodyMasses& m = jv.masses;
  const double mt = m.total();
  Configuration c;
  c.masses = {m.m1, m.m2, m.m3};
  const Vec4 pair_center = jv.v * (-m.m3 / mt);
  c.positions = {pair_center - jv.u * m.alpha1(), pair_center + jv.u * m.alpha2(),
                 jv.v * ((m.m1 + m.m2) / mt)};
  return c;
}

void validate_reduced_state(const ReducedThreeBodyState& s) {
  const double fields[] = {s.r1,   s.r2,   s.s1,     s.s2,     s.phi1,   s.phi2, s.p_r1,
                           s.p_r2, s.p_s1, s.p_s2,   s.p_phi1, s.p_phi2, s.mu1,  s.mu2};
  for (double v : fields)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite reduced state entry");
  if (s.r1 < 0.0 || s.r2 < 0.0 || s.s1 < 0.0 || s.s2 < 0.0)
    fail(ErrorCode::InvalidArgument, "chart radii must be nonnegative");
}

std::array<double, 12> reduced_to_array(const ReducedThreeBodyState& s) {
  return {s.r1,   s.r2,   s.s1,   s.s2,   s.phi1,   s.phi2,
          s.p_r1, s.p_r2, s.p_s1, s.p_s2, s.p_phi1, s.p_phi2};
}

ReducedThreeBodyState reduced_from_array(const std::array<double, 12>& z, double mu1,
                                         double mu2) {
  ReducedThreeBodyState s;
  s.r1 = z[0];
  s.r2 = z[1];
  s.s1 = z[2];
  s.s2 = z[3];
  s.phi1 = z[4];
  s.phi2 = z[5];
  s.p_r1 = z[6];
  s.p_r2 = z[7];
  s.p_s1 = z[8];
  s.p_s2 = z[9];
  s.p_phi1 = z[10];
  s.p_phi2 = z[11];
  s.mu1 = mu1;
  s.mu2 = mu2;
  return s;
}

MutualDistances mutual_distances(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                                 double coll_eps) {
  validate_reduced_state(s);
  validate_threebody_masses(m);
  const double a1 = m.alpha1(), a2 = m.alpha2();
  const double c1 = std::cos(s.phi1), c2 = std::cos(s.phi2);
  MutualDistances d;
  d.d12 = std::sqrt(s.r1 * s.r1 + s.r2 * s.r2);
  d.d13 = std::sqrt(s.s1 * s.s1 + a1 * a1 * s.r1 * s.r1 - 2.0 * a1 * s.r1 * s.s1 * c1 +
                    s.s2 * s.s2 + a1 * a1 * s.r2 * s.r2 - 2.0 * a1 * s.r2 * s.s2 * c2);
  d.d23 = std::sqrt(s.s1 * s.s1 + a2 * a2 * s.r1 * s.r1 + 2.0 * a2 * s.r1 * s.s1 * c1 +
                    s.s2 * s.s2 + a2 * a2 * s.r2 * s.r2 + 2.0 * a2 * s.r2 * s.s2 * c2);
  if (!(d.d12 > coll_eps) || !(d.d13 > coll_eps) || !(d.d23 > coll_eps))
    fail(ErrorCode::CollisionError, "mutual distance at or below the collision threshold");
  return d;
}

ReducedThreeBodyState reduce_threebody(const PhaseState& st) {
  validate_phase_state(st);
  if (st.config.size() != 3)
    fail(ErrorCode::InvalidArgument, "reduction needs exactly three bodies");
  const JacobiVectors jv = to_jacobi(st.config);
  const ThreeBodyMasses& m = jv.masses;
  const Vec4 &p1 = st.momenta[0], &p2 = st.momenta[1], &p3 = st.momenta[2];

  const Vec4 p_u = (p2 * m.m1 - p1 * m.m2) / (m.m1 + m.m2);
  const Vec4 p_v = (p3 / m.m3 - (p1 + p2) / (m.m1 + m.m2)) * m.M2();

  const PlanePolar u1 = plane_polar(jv.u.x, jv.u.y, p_u.x, p_u.y);
  const PlanePolar u2 = plane_polar(jv.u.z, jv.u.w, p_u.z, p_u.w);
  const PlanePolar v1 = plane_polar(jv.v.x, jv.v.y, p_v.x, p_v.y);
  const PlanePolar v2 = plane_polar(jv.v.z, jv.v.w, p_v.z, p_v.w);

  ReducedThreeBodyState out;
  out.r1 = u1.r;
  out.r2 = u2.r;
  out.s1 = v1.r;
  out.s2 = v2.r;
  out.phi1 = wrap_angle(u1.angle - v1.angle + kPi);
  out.phi2 = wrap_angle(u2.angle - v2.angle + kPi);
  out.p_r1 = u1.p_r;
  out.p_r2 = u2.p_r;
  out.p_s1 = v1.p_r;
  out.p_s2 = v2.p_r;
  out.p_phi1 = u1.p_ang;
  out.p_phi2 = u2.p_ang;
  out.mu1 = u1.p_ang + v1.p_ang;
  out.mu2 = u2.p_ang + v2.p_ang;
  return out;
}

PhaseState threebody_full_state(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                                double psi1, double psi2) {
  validate_reduced_state(s);
  validate_threebody_masses(m);

  // one plane of (q, p) from polar data; {qx, qy, px, py}
  auto embed = [](double r, double ang, double p_r, double p_ang) -> std::array<double, 4> {
    if (r == 0.0) {
      if (p_r != 0.0 || p_ang != 0.0)
        fail(ErrorCode::DomainError, "momentum in a plane with zero radius");
      return {0.0, 0.0, 0.0, 0.0};
    }
    const double c = std::cos(ang), sn = std::sin(ang);
    return {r * c, r * sn, p_r * c - p_ang / r * sn, p_r * sn + p_ang / r * c};
  };

  const auto U1 = embed(s.r1, s.phi1 + psi1 - kPi, s.p_r1, s.p_phi1);
  const auto U2 = embed(s.r2, s.phi2 + psi2 - kPi, s.p_r2, s.p_phi2);
  const auto V1 = embed(s.s1, psi1, s.p_s1, s.mu1 - s.p_phi1);
  const auto V2 = embed(s.s2, psi2, s.p_s2, s.mu2 - s.p_phi2);

  JacobiVectors jv;
  jv.masses = m;
  jv.u = {U1[0], U1[1], U2[0], U2[1]};
  jv.v = {V1[0], V1[1], V2[0], V2[1]};
  const Vec4 p_u = {U1[2], U1[3], U2[2], U2[3]};
  const Vec4 p_v = {V1[2], V1[3], V2[2], V2[3]};

  PhaseState out;
  out.config = from_jacobi(jv);
  out.momenta = {p_u * -1.0 - p_v * m.alpha2(), p_u - p_v * m.alpha1(), p_v};
  return out;
}

double reduced_energy_3b(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                         const Potential& V, double coll_eps) {
  const MutualDistances d = mutual_distances(s, m, coll_eps);
  const double kin_u = (s.p_r1 * s.p_r1 + s.p_r2 * s.p_r2 + angular_term(s.p_phi1, s.r1) +
                        angular_term(s.p_phi2, s.r2)) /
                       (2.0 * m.M1());
  const double kin_v =
      (s.p_s1 * s.p_s1 + s.p_s2 * s.p_s2 + angular_term(s.mu1 - s.p_phi1, s.s1) +
       angular_term(s.mu2 - s.p_phi2, s.s2)) /
      (2.0 * m.M2());
  return kin_u + kin_v + V.eval(d.d12).value + V.eval(d.d13).value + V.eval(d.d23).value;
}

std::array<double, 12> eom_3b(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                              const Potential& V, double coll_eps) {
  if (!(s.r1 > 0.0 && s.r2 > 0.0 && s.s1 > 0.0 && s.s2 > 0.0))
    fail(ErrorCode::DomainError, "vector field needs positive chart radii");
  const MutualDistances d = mutual_distances(s, m, coll_eps);
  const double M1 = m.M1(), M2 = m.M2(), a1 = m.alpha1(), a2 = m.alpha2();
  const double w12 = V.eval(d.d12).d1 / d.d12;
  const double w13 = V.eval(d.d13).d1 / d.d13;
  const double w23 = V.eval(d.d23).d1 / d.d23;
  const double c1 = std::cos(s.phi1), sn1 = std::sin(s.phi1);
  const double c2 = std::cos(s.phi2), sn2 = std::sin(s.phi2);
  const double q1 = s.mu1 - s.p_phi1, q2 = s.mu2 - s.p_phi2;

  std::array<double, 12> zdot;
  zdot[0] = s.p_r1 / M1;
  zdot[1] = s.p_r2 / M1;
  zdot[2] = s.p_s1 / M2;
  zdot[3] = s.p_s2 / M2;
  zdot[4] = s.p_phi1 / (M1 * s.r1 * s.r1) - q1 / (M2 * s.s1 * s.s1);
  zdot[5] = s.p_phi2 / (M1 * s.r2 * s.r2) - q2 / (M2 * s.s2 * s.s2);
  zdot[6] = s.p_phi1 * s.p_phi1 / (M1 * s.r1 * s.r1 * s.r1) - w12 * s.r1 -
            w13 * (a1 * a1 * s.r1 - a1 * s.s1 * c1) - w23 * (a2 * a2 * s.r1 + a2 * s.s1 * c1);
  zdot[7] = s.p_phi2 * s.p_phi2 / (M1 * s.r2 * s.r2 * s.r2) - w12 * s.r2 -
            w13 * (a1 * a1 * s.r2 - a1 * s.s2 * c2) - w23 * (a2 * a2 * s.r2 + a2 * s.s2 * c2);
  zdot[8] = q1 * q1 / (M2 * s.s1 * s.s1 * s.s1) - w13 * (s.s1 - a1 * s.r1 * c1) -
            w23 * (s.s1 + a2 * s.r1 * c1);
  zdot[9] = q2 * q2 / (M2 * s.s2 * s.s2 * s.s2) - w13 * (s.s2 - a1 * s.r2 * c2) -
            w23 * (s.s2 + a2 * s.r2 * c2);
  zdot[10] = (w23 * a2 - w13 * a1) * s.r1 * s.s1 * sn1;
  zdot[11] = (w23 * a2 - w13 * a1) * s.r2 * s.s2 * sn2;
  return zdot;
}

const char* re_branch_name(REBranch b) {
  switch (b) {
    case REBranch::Collinear: return "collinear";
    case REBranch::IsoscelesType: return "isosceles";
    case REBranch::Neither: return "neither";
  }
  return "?";
}

REBranch re_branch(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                   const Potential& V, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (std::abs(std::sin(s.phi1)) <= tol && std::abs(std::sin(s.phi2)) <= tol)
    return REBranch::Collinear;
  const MutualDistances d = mutual_distances(s, m);
  const double lhs = m.m2 * V.eval(d.d13).d1 / d.d13;
  const double rhs = m.m1 * V.eval(d.d23).d1 / d.d23;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (std::abs(lhs - rhs) <= tol * std::max(scale, 1e-300)) return REBranch::IsoscelesType;
  return REBranch::Neither;
}

ReducedThreeBodyState equilateral_equilibrium(double mu1, double mu2, const Potential& V) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2) || mu1 == 0.0)
    fail(ErrorCode::InvalidArgument, "mu1 must be nonzero");
  if (!V.is_attractive())
    fail(ErrorCode::InvalidArgument, "equilateral equilibria need an attractive potential");

  const double gamma = std::sqrt(std::abs(mu2 / mu1));
  const double c1sq = (mu1 / 3.0) * (mu1 / 3.0);
  const double beta = std::sqrt(3.0 * (1.0 + gamma * gamma));

  double r0;
  if (V.kind() == PotentialKind::Jacobi) {
    // Scale free: 3 r^3 V'(beta r)/beta is the constant 6k/beta^4, so either
    // every radius is an equilibrium or none is.
    const double level = 6.0 * V.k() / (beta * beta * beta * beta);
    if (std::abs(level - c1sq) > 1e-12 * std::max(level, c1sq))
      fail(ErrorCode::DegeneratePotential,
           "inverse-square potential only admits equilateral equilibria on its momentum curve");
    r0 = 1.0;
  } else {
    auto g = [&](double r) { return 3.0 / beta * r * r * r * V.eval(beta * r).d1 - c1sq; };
    const auto brackets = roots::scan_log(g, 1e-8, 1e8, 801);
    if (brackets.empty())
      fail(ErrorCode::NoRoot, "no equilateral radius found on the scan range");
    const double mid = roots::bisect(g, brackets.front().first, brackets.front().second);
    auto dg = [&](double r) {
      const PotentialValue pv = V.eval(beta * r);
      return 3.0 / beta * (3.0 * r * r * pv.d1 + beta * r * r * r * pv.d2);
    };
    r0 = roots::newton_polish(g, dg, mid, 1e-15);
  }

  const double sq3 = std::sqrt(3.0);
  ReducedThreeBodyState s;
  s.r1 = sq3 * r0;
  s.r2 = gamma * sq3 * r0;
  s.s1 = 1.5 * r0;
  s.s2 = gamma * 1.5 * r0;
  s.phi1 = -0.5 * kPi;
  s.phi2 = -0.5 * kPi;
  s.p_r1 = s.p_r2 = s.p_s1 = s.p_s2 = 0.0;
  s.p_phi1 = 0.5 * mu1;
  s.p_phi2 = 0.5 * mu2;
  s.mu1 = mu1;
  s.mu2 = mu2;
  return s;
}

ReducedThreeBodyState find_equilibrium_3b(const ReducedThreeBodyState& seed,
                                          const ThreeBodyMasses& m, const Potential& V,
                                          const EquilibriumSearchOpts& opts) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1)
    fail(ErrorCode::InvalidArgument, "bad equilibrium search options");
  std::array<double, 12> z = reduced_to_array(seed);
  auto field = [&](const std::array<double, 12>& zz) {
    return eom_3b(reduced_from_array(zz, seed.mu1, seed.mu2), m, V);
  };

  // Levenberg-Marquardt. Equilibria come in one-parameter families, so the
  // Jacobian is rank deficient at every solution and a plain Newton step
  // can be arbitrarily large; the damping keeps iterates inside the basin
  // of the seed. The residual also decays along escape channels where the
  // third body drifts off to infinity, so runaway radii are cut off early
  // instead of being chased to the iteration cap.
  const double escape =
      100.0 * std::max({1.0, seed.r1, seed.r2, seed.s1, seed.s2});
  double lm = 1e-4;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (std::max({z[0], z[1], z[2], z[3]}) > escape)
      fail(ErrorCode::NoConvergence, "equilibrium search iterates escaping");
    const auto g = field(z);
    const double gn = field_norm(g);
    if (gn <= opts.tol) return reduced_from_array(z, seed.mu1, seed.mu2);

    Eigen::MatrixXd J(12, 12);
    Eigen::VectorXd G(12);
    for (int col = 0; col < 12; ++col) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[col]));
      auto zp = z, zm = z;
      zp[col] += h;
      zm[col] -= h;
      const auto gp = field(zp), gm = field(zm);
      for (int row = 0; row < 12; ++row) J(row, col) = (gp[row] - gm[row]) / (2.0 * h);
    }
    for (int row = 0; row < 12; ++row) G(row) = g[row];

    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd b = J.transpose() * G;
    const double dmax = A.diagonal().maxCoeff();
    const Eigen::VectorXd dscale =
        A.diagonal().cwiseMax(1e-12 * std::max(dmax, 1e-300));

    bool accepted = false;
    for (int attempt = 0; attempt < 25 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = A;
      damped.diagonal() += lm * dscale;
      const Eigen::VectorXd step = damped.ldlt().solve(b);
      std::array<double, 12> zn = z;
      for (int i = 0; i < 12; ++i) zn[i] -= step(i);
      if (zn[0] > 0.0 && zn[1] > 0.0 && zn[2] > 0.0 && zn[3] > 0.0) {
        try {
          if (field_norm(field(zn)) < gn) {
            z = zn;
            accepted = true;
            lm = std::max(lm * 0.3, 1e-14);
            break;
          }
        } catch (const Error&) {
        }
      }
      lm *= 8.0;
    }
    if (!accepted) fail(ErrorCode::NoConvergence, "equilibrium search stalled");
  }
  if (field_norm(field(z)) <= opts.tol) return reduced_from_array(z, seed.mu1, seed.mu2);
  fail(ErrorCode::NoConvergence, "equilibrium search hit the iteration cap");
}

Reduced3BTrajectory integrate_reduced_3b(const ReducedThreeBodyState& s0,
                                         const ThreeBodyMasses& m, const Potential& V,
                                         const Reduced3BIntegrateOpts& opts) {
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt) || opts.steps < 0 || opts.output_every < 1 ||
      !(opts.collision_threshold >= 0.0))
    fail(ErrorCode::InvalidArgument, "bad integration options");
  validate_reduced_state(s0);
  validate_threebody_masses(m);

  Reduced3BTrajectory out;
  std::array<double, 12> z = reduced_to_array(s0);

  auto current = [&]() { return reduced_from_array(z, s0.mu1, s0.mu2); };
  auto rate = [&](const std::array<double, 12>& zz) {
    return eom_3b(reduced_from_array(zz, s0.mu1, s0.mu2), m, V);
  };
  auto emit = [&](double t) {
    Reduced3BSample smp;
    smp.t = t;
    smp.state = current();
    smp.energy = std::numeric_limits<double>::quiet_NaN();
    try {
      smp.energy = reduced_energy_3b(smp.state, m, V, 0.0);
    } catch (const Error&) {
    }
    out.samples.push_back(smp);
  };
  // smallest of the chart radii and the mutual distances; the chart itself
  // breaks down when a plane radius collapses
  auto closeness = [&]() {
    double lo = std::min(std::min(z[0], z[1]), std::min(z[2], z[3]));
    try {
      const MutualDistances d = mutual_distances(current(), m, 0.0);
      lo = std::min(lo, std::min(d.d12, std::min(d.d13, d.d23)));
    } catch (const Error&) {
      lo = 0.0;
    }
    return lo;
  };

  emit(0.0);
  double t = 0.0;
  for (long k = 1; k <= opts.steps; ++k) {
    const double h = opts.dt;
    std::array<double, 12> zs;
    try {
      const auto k1 = rate(z);
      for (int i = 0; i < 12; ++i) zs[i] = z[i] + 0.5 * h * k1[i];
      const auto k2 = rate(zs);
      for (int i = 0; i < 12; ++i) zs[i] = z[i] + 0.5 * h * k2[i];
      const auto k3 = rate(zs);
      for (int i = 0; i < 12; ++i) zs[i] = z[i] + h * k3[i];
      const auto k4 = rate(zs);
      for (int i = 0; i < 12; ++i)
        z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } catch (const Error&) {
      out.collided = true;
      emit(t);
      break;
    }
    t = k * opts.dt;
    out.steps_completed = k;
    if (closeness() <= opts.collision_threshold) {
      out.collided = true;
      emit(t);
      break;
    }
    if (k % opts.output_every == 0 || k == opts.steps) emit(t);
  }
  out.final_time = t;
  return out;
}

}  // namespace r4nb
