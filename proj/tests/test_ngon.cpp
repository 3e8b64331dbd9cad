// n-gon construction, the planar / skew trichotomy, discrete reduction
// consistency, and RE radii solving.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <numeric>

#include "r4nb/error.hpp"
#include "r4nb/ngon.hpp"
#include "r4nb/rel_equilibria.hpp"

using namespace r4nb;

namespace {
constexpr double kPi = std::numbers::pi;

NGonSpec make_spec(int a1, int b1, int a2, int b2, double r1, double r2) {
  NGonSpec s;
  s.a1 = a1;
  s.b1 = b1;
  s.a2 = a2;
  s.b2 = b2;
  s.r1 = r1;
  s.r2 = r2;
  return s;
}

// rank of the centered position matrix decides planarity by brute force
bool brute_force_planar(const Configuration& c) {
  Eigen::MatrixXd m(c.positions.size(), 4);
  for (std::size_t i = 0; i < c.positions.size(); ++i)
    m.row(i) = c.positions[i].eigen().transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(2) < 1e-10 * svd.singularValues()(0);
}

double re_equation_residual(const NGonSpec& spec, double r1, double r2,
                            double c1, double c2, const Potential& V) {
  int n = ngon_order(spec);
  double g1 = 0.0, g2 = 0.0;
  for (int k = 1; k < n; ++k) {
    double u1 = spec.r1 > 0 ? std::sin(k * spec.a1 * kPi / spec.b1) : 0.0;
    double u2 = spec.r2 > 0 ? std::sin(k * spec.a2 * kPi / spec.b2) : 0.0;
    double s = std::hypot(r1 * u1, r2 * u2);
    double phi = V.eval(2.0 * s).d1 / s;
    g1 += phi * u1 * u1;
    g2 += phi * u2 * u2;
  }
  double res = 0.0;
  if (c1 != 0.0) res = std::max(res, std::abs(c1 * c1 / std::pow(r1, 4) - g1));
  if (c2 != 0.0) res = std::max(res, std::abs(c2 * c2 / std::pow(r2, 4) - g2));
  return res;
}
}  // namespace

TEST_CASE("vertex construction") {
  SUBCASE("unit square in the first plane") {
    Configuration c = build_ngon(make_spec(1, 4, 1, 4, 1.0, 0.0));
    REQUIRE(c.positions.size() == 4);
    CHECK((c.positions[0] - Vec4{1, 0, 0, 0}).norm() < 1e-15);
    CHECK((c.positions[1] - Vec4{0, 1, 0, 0}).norm() < 1e-15);
    CHECK((c.positions[2] - Vec4{-1, 0, 0, 0}).norm() < 1e-14);
    CHECK((c.positions[3] - Vec4{0, -1, 0, 0}).norm() < 1e-14);
  }

  SUBCASE("square over digon") {
    Configuration c = build_ngon(make_spec(1, 4, 1, 2, 1.0, 1.0));
    REQUIRE(c.positions.size() == 4);
    // zw projection alternates between two antipodal points
    CHECK((c.positions[0] - Vec4{1, 0, 1, 0}).norm() < 1e-14);
    CHECK((c.positions[1] - Vec4{0, 1, -1, 0}).norm() < 1e-14);
    CHECK((c.positions[2] - Vec4{-1, 0, 1, 0}).norm() < 1e-13);
  }

  SUBCASE("pentagon over pentagram") {
    Configuration c = build_ngon(make_spec(1, 5, 2, 5, 1.0, 1.0));
    REQUIRE(c.positions.size() == 5);
    for (const Vec4& q : c.positions) {
      CHECK(std::hypot(q.x, q.y) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::hypot(q.z, q.w) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  SUBCASE("non-coprime data collapses vertices") {
    try {
      build_ngon(make_spec(2, 4, 1, 2, 1.0, 0.0));
      FAIL("expected DegenerateSpec");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateSpec);
    }
  }
}

TEST_CASE("classification") {
  CHECK(classify_ngon(make_spec(1, 5, 1, 5, 1.0, 2.0)).tag ==
        NGonTag::PlanarGeneral);
  CHECK(classify_ngon(make_spec(1, 5, 4, 5, 1.0, 2.0)).tag ==
        NGonTag::PlanarGeneral);
  CHECK(classify_ngon(make_spec(1, 5, 2, 5, 1.0, 1.0)).tag == NGonTag::TypeI);
  NGonClass c = classify_ngon(make_spec(1, 3, 1, 2, 1.0, 1.0));
  CHECK(c.tag == NGonTag::TypeII);
  CHECK(c.n == 6);
  CHECK(classify_ngon(make_spec(1, 7, 1, 7, 0.0, 1.0)).tag ==
        NGonTag::PlanarPrincipal);

  SUBCASE("agrees with the rank test on small cases") {
    for (int n = 3; n <= 8; ++n)
      for (int x1 = 1; x1 < n; ++x1)
        for (int x2 = 1; x2 < n; ++x2) {
          if (std::gcd(x1, n) != 1 || std::gcd(x2, n) != 1) continue;
          NGonSpec s = make_spec(x1, n, x2, n, 1.0, 0.8);
          NGonTag tag = classify_ngon(s).tag;
          bool planar = brute_force_planar(build_ngon(s));
          CHECK(planar == (tag == NGonTag::PlanarGeneral));
        }
    // mixed vertex counts are always skew
    for (auto [b1, b2] : {std::pair{2, 3}, {2, 4}, {3, 6}, {2, 8}, {4, 6}}) {
      NGonSpec s = make_spec(1, b1, 1, b2, 1.0, 0.8);
      CHECK(classify_ngon(s).tag == NGonTag::TypeII);
      CHECK_FALSE(brute_force_planar(build_ngon(s)));
      CHECK(classify_ngon(s).n == std::lcm(b1, b2));
    }
  }
}

TEST_CASE("synchronisation") {
  CHECK(is_synchronised(make_spec(1, 5, 1, 5, 1.0, 1.0)));
  CHECK(is_synchronised(make_spec(1, 5, 4, 5, 1.0, 1.0)));
  CHECK_FALSE(is_synchronised(make_spec(1, 5, 2, 5, 1.0, 1.0)));

  try {
    is_synchronised(make_spec(1, 3, 1, 2, 1.0, 1.0));
    FAIL("expected NotApplicable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotApplicable);
  }

  SUBCASE("the relabelling search matches the congruence rule") {
    for (int n = 3; n <= 12; ++n)
      for (int x1 = 1; x1 < n; ++x1)
        for (int x2 = 1; x2 < n; ++x2) {
          if (std::gcd(x1, n) != 1 || std::gcd(x2, n) != 1) continue;
          bool rule = (x1 - x2) % n == 0 || (x1 + x2) % n == 0;
          CHECK(is_synchronised(make_spec(x1, n, x2, n, 1.0, 1.0)) == rule);
        }
  }

  SUBCASE("large n uses the congruence rule") {
    CHECK(is_synchronised(make_spec(1, 13, 12, 13, 1.0, 1.0)));
    CHECK_FALSE(is_synchronised(make_spec(1, 13, 5, 13, 1.0, 1.0)));
  }
}

TEST_CASE("pair distances") {
  NGonSpec square = make_spec(1, 4, 1, 4, 1.0, 0.0);
  CHECK(pair_distance(square, 1) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(pair_distance(square, 2) == doctest::Approx(2.0).epsilon(1e-14));

  NGonSpec tri = make_spec(1, 3, 1, 3, 1.0, 1.0);
  CHECK(pair_distance(tri, 1) ==
        doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));

  NGonSpec sd = make_spec(1, 4, 1, 2, 1.0, 1.0);
  CHECK(pair_distance(sd, 2) == doctest::Approx(2.0).epsilon(1e-14));

  SUBCASE("matches the built configuration and its reversal symmetry") {
    for (NGonSpec s : {make_spec(1, 4, 1, 2, 1.1, 0.6),
                       make_spec(1, 5, 2, 5, 0.9, 1.4),
                       make_spec(2, 5, 1, 3, 1.0, 1.0)}) {
      Configuration c = build_ngon(s);
      int n = ngon_order(s);
      for (int k = 1; k < n; ++k) {
        double d = pair_distance(s, k);
        CHECK(d == doctest::Approx((c.positions[0] - c.positions[k]).norm())
                       .epsilon(1e-12));
        CHECK(d == doctest::Approx(pair_distance(s, n - k)).epsilon(1e-14));
      }
    }
  }

  CHECK_THROWS_AS(pair_distance(square, 0), Error);
  CHECK_THROWS_AS(pair_distance(square, 4), Error);
}

TEST_CASE("reduced energy") {
  auto newt = Potential::newtonian(1.0);

  SUBCASE("planar triangle closed form") {
    NGonSpec tri = make_spec(1, 3, 1, 3, 1.0, 0.0);
    double c1 = 0.7;
    double e = reduced_ngon_energy(1.0, 0.0, 0.0, 0.0, c1, 0.0, tri, newt);
    CHECK(e == doctest::Approx(1.5 * c1 * c1 - std::sqrt(3.0)).epsilon(1e-14));
  }

  SUBCASE("zero momentum leaves the shape potential") {
    NGonSpec sd = make_spec(1, 4, 1, 2, 1.0, 1.0);
    double e = reduced_ngon_energy(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, sd, newt);
    Configuration c = build_ngon(sd);
    CHECK(e == doctest::Approx(potential_energy(c, newt)).epsilon(1e-12));
  }

  SUBCASE("matches the full symmetric state") {
    NGonSpec sd = make_spec(1, 4, 1, 2, 1.1, 0.8);
    double red = reduced_ngon_energy(1.1, 0.3, 0.8, -0.2, 0.4, 0.25, sd, newt);
    PhaseState full = ngon_full_state(sd, 0.3, -0.2, 0.4, 0.25);
    CHECK(red == doctest::Approx(total_energy(full, newt)).epsilon(1e-10));
    auto [m1, m2] = momentum_map_total(full);
    CHECK(m1 == doctest::Approx(4 * 0.4).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(4 * 0.25).epsilon(1e-12));

    NGonSpec penta = make_spec(1, 5, 2, 5, 0.9, 1.3);
    double red5 =
        reduced_ngon_energy(0.9, -0.1, 1.3, 0.2, 0.6, -0.35, penta, newt);
    PhaseState full5 = ngon_full_state(penta, -0.1, 0.2, 0.6, -0.35);
    CHECK(red5 == doctest::Approx(total_energy(full5, newt)).epsilon(1e-10));

    NGonSpec flat = make_spec(1, 6, 1, 6, 1.2, 0.0);
    double redf = reduced_ngon_energy(1.2, 0.15, 0.0, 0.0, 0.5, 0.0, flat, newt);
    PhaseState fullf = ngon_full_state(flat, 0.15, 0.0, 0.5, 0.0);
    CHECK(redf == doctest::Approx(total_energy(fullf, newt)).epsilon(1e-10));
  }

  SUBCASE("domain checks") {
    NGonSpec flat = make_spec(1, 3, 1, 3, 1.0, 0.0);
    CHECK_THROWS_AS(
        reduced_ngon_energy(1.0, 0, 0.5, 0, 0.7, 0.0, flat, newt), Error);
    CHECK_THROWS_AS(
        reduced_ngon_energy(0.0, 0, 0.0, 0, 0.7, 0.0, flat, newt), Error);
  }
}

TEST_CASE("RE radii") {
  auto newt = Potential::newtonian(1.0);

  SUBCASE("planar triangle closed form") {
    NGonSpec tri = make_spec(1, 3, 1, 3, 1.0, 0.0);
    auto [r1, r2] = solve_re_radii(tri, 1.0, 0.0, newt);
    CHECK(r1 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r2 == 0.0);
    // the mirrored spec solves the same problem in the other block
    NGonSpec tri2 = make_spec(1, 3, 1, 3, 0.0, 1.0);
    auto [z, rr] = solve_re_radii(tri2, 0.0, 1.0, newt);
    CHECK(z == 0.0);
    CHECK(rr == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }

  SUBCASE("similar planar blocks keep the momentum ratio") {
    NGonSpec tri = make_spec(1, 3, 1, 3, 1.0, 1.0);
    auto [r1, r2] = solve_re_radii(tri, 1.0, 4.0, newt);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(re_equation_residual(tri, r1, r2, 1.0, 4.0, newt) < 1e-10);
  }

  SUBCASE("skew polygons satisfy both equations") {
    NGonSpec sd = make_spec(1, 4, 1, 2, 1.0, 1.0);
    auto [r1, r2] = solve_re_radii(sd, 0.5, 0.3, newt);
    CHECK(re_equation_residual(sd, r1, r2, 0.5, 0.3, newt) < 1e-10);

    NGonSpec penta = make_spec(1, 5, 2, 5, 1.0, 1.0);
    auto [p1, p2] = solve_re_radii(penta, 1.0, 0.7, newt);
    CHECK(re_equation_residual(penta, p1, p2, 1.0, 0.7, newt) < 1e-10);

    auto harm = Potential::harmonic(0.5);
    auto [h1, h2] = solve_re_radii(sd, 0.5, 0.3, harm);
    CHECK(re_equation_residual(sd, h1, h2, 0.5, 0.3, harm) < 1e-10);

    auto homo = Potential::homogeneous(1.0, 1.5);
    NGonSpec flat = make_spec(1, 6, 1, 6, 1.0, 0.0);
    auto [f1, f2] = solve_re_radii(flat, 0.8, 0.0, homo);
    CHECK(re_equation_residual(flat, f1, f2, 0.8, 0.0, homo) < 1e-10);
  }

  SUBCASE("solved radii give genuine relative equilibria") {
    NGonSpec sd = make_spec(1, 4, 1, 2, 1.0, 1.0);
    double c1 = 0.5, c2 = 0.3;
    auto [r1, r2] = solve_re_radii(sd, c1, c2, newt);
    NGonSpec solved = sd;
    solved.r1 = r1;
    solved.r2 = r2;
    Configuration c = build_ngon(solved);
    GroupVelocity w{c1 / (r1 * r1), c2 / (r2 * r2)};
    CHECK(re_residual_norm(c, w, newt) < 1e-9);
  }

  SUBCASE("momentum placement must follow the active blocks") {
    NGonSpec sd = make_spec(1, 4, 1, 2, 1.0, 1.0);
    try {
      solve_re_radii(sd, 0.5, 0.0, newt);
      FAIL("expected InactiveBlock");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InactiveBlock);
    }
    NGonSpec flat = make_spec(1, 3, 1, 3, 1.0, 0.0);
    try {
      solve_re_radii(flat, 0.5, 0.1, newt);
      FAIL("expected InactiveBlock");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InactiveBlock);
    }
  }

  SUBCASE("scale-free potential") {
    auto jac = Potential::jacobi(1.0);
    NGonSpec digon = make_spec(1, 2, 1, 2, 1.0, 0.0);
    // c^2 = k/4 puts the digon on the degenerate continuum: every radius
    // works and the solver settles at its seed
    auto [r1, r2] = solve_re_radii(digon, 0.5, 0.0, jac);
    CHECK(re_equation_residual(digon, r1, r2, 0.5, 0.0, jac) < 1e-12);
    CHECK_THROWS_AS(solve_re_radii(digon, 0.7, 0.0, jac), Error);
  }
}

TEST_CASE("propagated n-gon RE stays on the symmetric set") {
  auto newt = Potential::newtonian(1.0);
  NGonSpec sd = make_spec(1, 4, 1, 2, 1.0, 1.0);
  double c1 = 0.5, c2 = 0.3;
  auto [r1, r2] = solve_re_radii(sd, c1, c2, newt);
  NGonSpec solved = sd;
  solved.r1 = r1;
  solved.r2 = r2;
  PhaseState st = ngon_full_state(solved, 0.0, 0.0, c1, c2);

  NBodyIntegrateOpts opts;
  opts.dt = 5e-5;
  opts.steps = 40000;
  opts.output_every = 2000;
  auto tr = integrate(st, newt, opts);
  REQUIRE_FALSE(tr.collided);
  for (const auto& smp : tr.samples)
    for (const Vec4& q : smp.positions) {
      CHECK(std::abs(std::hypot(q.x, q.y) - r1) < 1e-8);
      CHECK(std::abs(std::hypot(q.z, q.w) - r2) < 1e-8);
    }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate_ngon_spec(make_spec(1, 3, 1, 3, 0.0, 0.0)), Error);
  CHECK_THROWS_AS(validate_ngon_spec(make_spec(1, 1, 1, 3, 1.0, 1.0)), Error);
  CHECK_THROWS_AS(validate_ngon_spec(make_spec(0, 3, 1, 3, 1.0, 0.0)), Error);
  CHECK_THROWS_AS(validate_ngon_spec(make_spec(1, 3, 1, 3, -1.0, 0.0)), Error);
  CHECK(ngon_order(make_spec(1, 3, 7, 9, 1.0, 0.0)) == 3);
  CHECK(ngon_order(make_spec(1, 3, 1, 2, 1.0, 1.0)) == 6);
}
