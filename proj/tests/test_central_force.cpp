// Reduced central-force problem: energies, manifolds, radial equilibria,
// Kepler diagnostics, and leapfrog trajectories with their conservation laws.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "r4nb/central_force.hpp"
#include "r4nb/error.hpp"

using namespace r4nb;

namespace {
constexpr double kPi = std::numbers::pi;

double traj_min_radius(const CentralTrajectory& tr) {
  double m = 1e300;
  for (const auto& s : tr.samples) m = std::min(m, s.q.norm());
  return m;
}
}  // namespace

TEST_CASE("reduced energy frozen examples") {
  auto newt = Potential::newtonian(1.0);
  ReducedCentralState s{1.0, 1.0, 0.0, 0.0, 1.0, 1.0};
  CHECK(reduced_energy(s, newt) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-14));

  auto harm = Potential::harmonic(1.0);
  ReducedCentralState s2{1.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(reduced_energy(s2, harm) == doctest::Approx(2.0).epsilon(1e-14));

  // zero momentum: only the bare potential remains
  auto any = Potential::newtonian(2.0);
  ReducedCentralState s3{0.3, 0.4, 0.0, 0.0, 0.0, 0.0};
  CHECK(reduced_energy(s3, any) == doctest::Approx(any.eval(0.5).value).epsilon(1e-14));

  CHECK_THROWS_AS(reduced_energy({0.0, 1, 0, 0, 0, 0}, newt), Error);
}

TEST_CASE("effective potential and hill test") {
  auto newt = Potential::newtonian(1.0);
  double v = effective_potential(1.0, 1.0, 1.0, 1.0, newt);
  CHECK(v == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(hill_allowed(0.5, 1.0, 1.0, 1.0, 1.0, newt));
  CHECK_FALSE(hill_allowed(0.0, 1.0, 1.0, 1.0, 1.0, newt));
  CHECK(effective_potential(0.0, 0.0, 3.0, 4.0, newt) ==
        doctest::Approx(newt.eval(5.0).value).epsilon(1e-14));
}

TEST_CASE("hill minimum radius matches the closed form for gravity") {
  auto newt = Potential::newtonian(1.0);
  // W(R) = B/R^2 - 1/R with B = (|mu1|+|mu2|)^2/2; smallest root of W = h is
  // 2B / (1 + sqrt(1 + 4 B h))
  for (double h : {-0.2, -0.05, 0.0, 0.3}) {
    double mu1 = 0.7, mu2 = -0.2;
    double b = 0.5 * std::pow(std::abs(mu1) + std::abs(mu2), 2);
    double expect = 2.0 * b / (1.0 + std::sqrt(1.0 + 4.0 * b * h));
    CHECK(hill_min_radius(h, mu1, mu2, newt) == doctest::Approx(expect).epsilon(1e-9));
  }
  CHECK(hill_min_radius(-0.1, 0.0, 0.0, newt) == 0.0);
}

TEST_CASE("reconstruction rates") {
  CHECK(reconstruction_rates({1, 1, 0, 0, 1, 1}) == std::pair{1.0, 1.0});
  auto [a, b] = reconstruction_rates({1, 2, 0, 0, 0, 5});
  CHECK(a == 0.0);
  CHECK(b == doctest::Approx(1.25).epsilon(1e-15));
  auto [c, d] = reconstruction_rates({2, 3, 1, -1, 0, 0});
  CHECK(c == 0.0);
  CHECK(d == 0.0);
}

TEST_CASE("polar reduced chart round trip") {
  ReducedCentralState s{0.8, 1.7, -0.3, 0.45, 1.0, -2.0};
  PolarReducedState p = to_polar_reduced(s);
  CHECK(p.R == doctest::Approx(std::hypot(0.8, 1.7)).epsilon(1e-14));
  CHECK(p.phi > 0.0);
  CHECK(p.phi < kPi / 2);
  ReducedCentralState back = from_polar_reduced(p, s.mu1, s.mu2);
  CHECK(back.r1 == doctest::Approx(s.r1).epsilon(1e-13));
  CHECK(back.r2 == doctest::Approx(s.r2).epsilon(1e-13));
  CHECK(back.p_r1 == doctest::Approx(s.p_r1).epsilon(1e-12));
  CHECK(back.p_r2 == doctest::Approx(s.p_r2).epsilon(1e-12));
}

TEST_CASE("proportional manifold angles") {
  CHECK(proportional_phi(1.0, 1.0).at(0) == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(proportional_phi(1.0, 4.0).at(0) == doctest::Approx(std::atan(2.0)).epsilon(1e-14));
  CHECK(proportional_phi(4.0, 1.0).at(0) == doctest::Approx(std::atan(0.5)).epsilon(1e-14));
  try {
    proportional_phi(0.0, 0.0);
    FAIL("expected ZeroMomentum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMomentum);
  }
  try {
    proportional_phi(1.0, -1.0);
    FAIL("expected NoRealRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoRealRoot);
  }
}

TEST_CASE("radial equilibria") {
  auto newt = Potential::newtonian(1.0);
  auto roots = radial_equilibrium(newt, 1.0, 1.0);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - 4.0) < 4.0 * 1e-12);

  auto harm = Potential::harmonic(0.5);
  auto hr = radial_equilibrium(harm, 0.25, 0.75);
  REQUIRE(hr.size() == 1);
  CHECK(std::abs(hr[0] - 1.0) < 1e-12);

  try {
    radial_equilibrium(Potential::jacobi(1.0), 1.0, 1.0);
    FAIL("expected DegeneratePotential");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePotential);
  }

  try {
    radial_equilibrium(newt, 0.0, 0.0);
    FAIL("expected NoRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoRoot);
  }
}

TEST_CASE("eccentricity vector") {
  Vec4 a = lrl_vector({1, 0, 0, 0}, {0, 1, 0, 0}, 1.0);
  CHECK(a.norm() < 1e-15);

  Vec4 b = lrl_vector({2, 0, 0, 0}, {0, 0, 0, 0}, 1.0);
  CHECK(b.x == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(b.y) + std::abs(b.z) + std::abs(b.w) == 0.0);

  // equivariance under the torus action
  Vec4 q{0.4, -1.2, 0.7, 0.1}, p{0.3, 0.5, -0.2, 0.9};
  Mat4 r = exp_hat({0.8, -2.1});
  Vec4 lhs = lrl_vector(Vec4::from(r * q.eigen()), Vec4::from(r * p.eigen()), 1.3);
  Eigen::Vector4d rhs = r * lrl_vector(q, p, 1.3).eigen();
  CHECK((lhs.eigen() - rhs).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(lrl_vector({0, 0, 0, 0}, {1, 0, 0, 0}, 1.0), Error);
}

TEST_CASE("kepler orbit parameters") {
  auto [p1, e1, hyp1] = kepler_orbit_params(-0.5, 1.0, 0.0, 1.0);
  CHECK(p1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e1 == doctest::Approx(0.0).epsilon(1e-7));
  CHECK_FALSE(hyp1);

  auto [p2, e2, hyp2] = kepler_orbit_params(-0.125, 1.0, 0.0, 1.0);
  CHECK(p2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e2 == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK_FALSE(hyp2);

  auto [p3, e3, hyp3] = kepler_orbit_params(-0.3, 0.0, 0.0, 1.0);
  CHECK(p3 == 0.0);
  CHECK(e3 == doctest::Approx(1.0));
  CHECK(hyp3);

  CHECK(kepler_orbit_params(1.0, 1.0, 0.0, 1.0).hyperbolic);

  try {
    kepler_orbit_params(-1.0, 1.0, 0.0, 1.0);
    FAIL("expected InvalidRadicand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRadicand);
  }
}

TEST_CASE("collision criterion uses exact zeros") {
  auto newt = Potential::newtonian(1.0);
  CHECK(is_collision_possible(0.0, 0.0, newt));
  CHECK_FALSE(is_collision_possible(1.0, 0.0, newt));
  CHECK_FALSE(is_collision_possible(1e-9, 0.0, newt));
  CHECK(is_collision_possible(0.0, 0.0, Potential::homogeneous(1.0, 1.5)));
  for (auto bad : {Potential::jacobi(1.0), Potential::harmonic(1.0),
                   Potential::homogeneous(1.0, 2.5)}) {
    try {
      is_collision_possible(0.0, 0.0, bad);
      FAIL("expected UnsupportedPotential");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedPotential);
    }
  }
}

TEST_CASE("circular kepler orbit keeps its radius") {
  auto newt = Potential::newtonian(1.0);
  IntegrateOpts opts;
  opts.dt = 5e-5;
  opts.steps = static_cast<long>(std::ceil(2 * kPi / opts.dt));
  opts.output_every = 100;
  auto tr = integrate_central({1, 0, 0, 0}, {0, 1, 0, 0}, newt, opts);
  CHECK_FALSE(tr.collided);
  for (const auto& s : tr.samples) CHECK(std::abs(s.q.norm() - 1.0) < 1e-8);
}

TEST_CASE("harmonic trajectories match the decoupled oscillator") {
  // V = k|q|^2 gives q_i'' = -2k q_i in every coordinate
  double k = 1.0, w = std::sqrt(2.0 * k);
  Vec4 q0{0.6, -0.2, 0.8, 0.4}, p0{0.1, 0.5, -0.7, 0.2};
  IntegrateOpts opts;
  opts.dt = 1e-4;
  opts.steps = 50000;
  opts.output_every = 5000;
  auto tr = integrate_central(q0, p0, Potential::harmonic(k), opts);
  for (const auto& s : tr.samples) {
    double c = std::cos(w * s.t), sn = std::sin(w * s.t);
    for (int i = 0; i < 4; ++i) {
      double exact = q0[i] * c + p0[i] * sn / w;
      CHECK(std::abs(s.q[i] - exact) < 1e-6);
    }
  }
}

TEST_CASE("energy and momentum conservation along leapfrog runs") {
  auto newt = Potential::newtonian(1.0);
  IntegrateOpts opts;
  opts.dt = 1e-3;
  opts.steps = 100000;
  opts.output_every = 1000;
  Vec4 q0{1.0, 0.0, 0.3, 0.4}, p0{0.05, 0.8, -0.3, 0.25};
  auto tr = integrate_central(q0, p0, newt, opts);
  REQUIRE_FALSE(tr.collided);
  double h0 = tr.samples.front().energy;
  for (const auto& s : tr.samples) {
    CHECK(std::abs(s.energy - h0) / std::abs(h0) < 1e-6);
    CHECK(std::abs(s.mu1 - tr.samples.front().mu1) < 1e-9);
    CHECK(std::abs(s.mu2 - tr.samples.front().mu2) < 1e-9);
  }
}

TEST_CASE("area law: both areal velocities constant with ratio mu1/mu2") {
  auto newt = Potential::newtonian(1.0);
  IntegrateOpts opts;
  opts.dt = 1e-3;
  opts.steps = 20000;
  opts.output_every = 500;
  Vec4 q0{0.9, 0.1, -0.4, 0.6}, p0{-0.2, 0.7, 0.4, 0.3};
  auto tr = integrate_central(q0, p0, newt, opts);
  double a0 = tr.samples.front().area_xy, b0 = tr.samples.front().area_zw;
  double mu1 = tr.samples.front().mu1, mu2 = tr.samples.front().mu2;
  REQUIRE(mu2 != 0.0);
  for (const auto& s : tr.samples) {
    CHECK(std::abs(s.area_xy - a0) < 1e-6 * std::abs(a0));
    CHECK(std::abs(s.area_zw - b0) < 1e-6 * std::abs(b0));
    CHECK(s.area_xy / s.area_zw == doctest::Approx(mu1 / mu2).epsilon(1e-6));
  }
}

TEST_CASE("proportional manifold stays invariant") {
  auto newt = Potential::newtonian(1.0);
  double mu1 = 1.0, mu2 = 0.5;
  double phi = proportional_phi(mu1, mu2).at(0);

  // build Cartesian data with P_phi = 0 on the manifold
  PolarReducedState pol{1.4, phi, 0.1, 0.0};
  ReducedCentralState red = from_polar_reduced(pol, mu1, mu2);
  DoublePolar dp;
  dp.r1 = red.r1;
  dp.r2 = red.r2;
  dp.theta1 = 0.3;
  dp.theta2 = -1.1;
  dp.p_r1 = red.p_r1;
  dp.p_r2 = red.p_r2;
  dp.p_theta1 = mu1;
  dp.p_theta2 = mu2;
  dp.has_momenta = true;
  Vec4 q0, p0;
  from_double_polar(dp, q0, p0);

  IntegrateOpts opts;
  opts.dt = 1e-5;
  opts.steps = 20000;
  opts.output_every = 200;
  auto tr = integrate_central(q0, p0, newt, opts);
  for (const auto& s : tr.samples) {
    auto sdp = to_double_polar(s.q, s.p);
    double p_phi = sdp.r1 * sdp.p_r2 - sdp.r2 * sdp.p_r1;
    CHECK(std::abs(p_phi) < 1e-8);
  }
}

TEST_CASE("eccentricity vector is conserved along gravity orbits") {
  auto newt = Potential::newtonian(1.0);
  Vec4 q0{1.0, 0.0, 0.2, -0.1}, p0{0.1, 0.9, 0.2, 0.3};
  IntegrateOpts opts;
  opts.dt = 1e-4;
  opts.steps = 100000;
  opts.output_every = 2000;
  auto tr = integrate_central(q0, p0, newt, opts);
  Vec4 a0 = lrl_vector(q0, p0, 1.0);
  for (const auto& s : tr.samples) {
    Vec4 a = lrl_vector(s.q, s.p, 1.0);
    CHECK((a - a0).norm() < 1e-6);
  }
}

TEST_CASE("collision dichotomy") {
  auto newt = Potential::newtonian(1.0);

  // nonzero momentum: the trajectory respects the centrifugal barrier
  Vec4 q0{1.0, 0.0, 0.0, 0.5}, p0{0.0, 0.9, -0.3, 0.1};
  IntegrateOpts opts;
  opts.dt = 1e-4;
  opts.steps = 200000;
  opts.output_every = 50;
  auto tr = integrate_central(q0, p0, newt, opts);
  REQUIRE_FALSE(tr.collided);
  double h = tr.samples.front().energy;
  auto [m1, m2] = momentum_map_single(q0, p0);
  double bound = hill_min_radius(h, m1, m2, newt);
  CHECK(bound > 0.0);
  CHECK(traj_min_radius(tr) >= bound * (1.0 - 1e-6));

  // zero momentum: radial infall reaches the collision threshold
  IntegrateOpts fall;
  fall.dt = 1e-5;
  fall.steps = 100000;
  fall.output_every = 1000;
  fall.collision_threshold = 1e-3;
  auto tf = integrate_central({0.5, 0, 0, 0}, {0, 0, 0, 0}, newt, fall);
  CHECK(tf.collided);
  CHECK(tf.final_time > 0.0);
  CHECK(tf.final_time < 0.5);
}

TEST_CASE("collision orbits are proportional motions") {
  auto newt = Potential::newtonian(1.0);
  Vec4 q0{0.3, 0.0, 0.4, 0.0};
  Vec4 p0 = q0 * -0.2;  // radial in both planes: mu = (0,0)
  IntegrateOpts opts;
  opts.dt = 1e-5;
  opts.steps = 200000;
  opts.output_every = 500;
  opts.collision_threshold = 1e-3;
  auto tr = integrate_central(q0, p0, newt, opts);
  CHECK(tr.collided);
  double ratio0 = 0.3 / 0.4;
  for (const auto& s : tr.samples) {
    double r1 = std::hypot(s.q.x, s.q.y), r2 = std::hypot(s.q.z, s.q.w);
    if (r2 > 1e-12) CHECK(std::abs(r1 / r2 - ratio0) < 1e-8);
  }
}

TEST_CASE("integration option validation") {
  auto newt = Potential::newtonian(1.0);
  IntegrateOpts bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(integrate_central({1, 0, 0, 0}, {0, 0, 0, 0}, newt, bad), Error);
}
