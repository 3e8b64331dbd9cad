// n-body energetics, gradients against finite differences, symmetry
// invariants, and leapfrog propagation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "r4nb/error.hpp"
#include "r4nb/nbody.hpp"

using namespace r4nb;

namespace {
constexpr double kPi = std::numbers::pi;

std::mt19937 rng(20240817);

Vec4 random_vec(double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

Configuration random_config(std::size_t n) {
  // spread bodies out so random draws never sit near a collision
  Configuration c;
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (std::size_t j = 0; j < n; ++j) {
    Vec4 base{3.0 * static_cast<double>(j), 0, 0, 0};
    c.positions.push_back(base + random_vec(0.6));
    c.masses.push_back(u(rng));
  }
  return c;
}

// squared shape distance after centring and normalising the scale
double shape_distance(const Configuration& a, const Configuration& b) {
  Configuration ca = recenter(a), cb = recenter(b);
  double sa = 0.0, sb = 0.0;
  for (const auto& q : ca.positions) sa += q.squared_norm();
  for (const auto& q : cb.positions) sb += q.squared_norm();
  sa = std::sqrt(sa);
  sb = std::sqrt(sb);
  double d = 0.0;
  for (std::size_t j = 0; j < ca.positions.size(); ++j)
    d += (ca.positions[j] / sa - cb.positions[j] / sb).squared_norm();
  return std::sqrt(d);
}
}  // namespace

TEST_CASE("pair potential energy") {
  auto newt = Potential::newtonian(1.0);
  Configuration two{{{0, 0, 0, 0}, {1, 0, 0, 0}}, {1.0, 1.0}};
  CHECK(potential_energy(two, newt) == doctest::Approx(-1.0).epsilon(1e-15));

  double l = 0.7;
  Configuration tri{{{0, 0, 0, 0},
                     {l, 0, 0, 0},
                     {0.5 * l, 0.5 * std::sqrt(3.0) * l, 0, 0}},
                    {1.0, 1.0, 1.0}};
  CHECK(potential_energy(tri, newt) == doctest::Approx(-3.0 / l).epsilon(1e-14));

  Configuration one{{{2, 3, 4, 5}}, {1.0}};
  CHECK(potential_energy(one, newt) == 0.0);

  Configuration weighted{{{0, 0, 0, 0}, {2, 0, 0, 0}}, {2.0, 3.0}};
  CHECK(potential_energy(weighted, newt, true) ==
        doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(potential_energy(weighted, newt, false) ==
        doctest::Approx(-0.5).epsilon(1e-15));

  Configuration coincident{{{0, 0, 0, 0}, {0, 0, 0, 0}}, {1.0, 1.0}};
  try {
    potential_energy(coincident, newt);
    FAIL("expected CollisionError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CollisionError);
  }
}

TEST_CASE("potential gradient") {
  auto newt = Potential::newtonian(1.0);
  Configuration two{{{0, 0, 0, 0}, {1, 0, 0, 0}}, {1.0, 1.0}};
  auto g = grad_U(two, newt);
  CHECK(g[1].x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g[1].y == 0.0);
  CHECK(g[0].x == doctest::Approx(-1.0).epsilon(1e-15));

  SUBCASE("third law makes the gradients sum to zero") {
    for (int rep = 0; rep < 10; ++rep) {
      Configuration c = random_config(4);
      Vec4 total{0, 0, 0, 0};
      for (const Vec4& v : grad_U(c, newt, rep % 2 == 0)) total += v;
      CHECK(total.norm() < 1e-13);
    }
  }

  SUBCASE("matches central finite differences") {
    for (bool weighted : {false, true}) {
      Configuration c = random_config(3);
      auto grad = grad_U(c, newt, weighted);
      double h = 1e-5;
      for (std::size_t j = 0; j < 3; ++j) {
        for (int i = 0; i < 4; ++i) {
          Configuration cp = c, cm = c;
          cp.positions[j][i] += h;
          cm.positions[j][i] -= h;
          double fd = (potential_energy(cp, newt, weighted) -
                       potential_energy(cm, newt, weighted)) /
                      (2 * h);
          CHECK(std::abs(grad[j][i] - fd) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("total energy") {
  auto newt = Potential::newtonian(1.0);
  Configuration c = random_config(3);
  PhaseState rest{c, std::vector<Vec4>(3, Vec4{0, 0, 0, 0})};
  CHECK(total_energy(rest, newt) ==
        doctest::Approx(potential_energy(c, newt)).epsilon(1e-15));

  PhaseState solo{{{{0, 0, 0, 0}}, {1.0}}, {{1, 0, 0, 0}}};
  CHECK(total_energy(solo, newt) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("total momentum map") {
  PhaseState rest{random_config(3), std::vector<Vec4>(3, Vec4{0, 0, 0, 0})};
  CHECK(momentum_map_total(rest) == std::pair{0.0, 0.0});

  PhaseState one{{{{1, 0, 0, 0}, {5, 0, 0, 0}}, {1.0, 1.0}},
                 {{0, 1, 0, 0}, {0, 0, 0, 0}}};
  auto [m1, m2] = momentum_map_total(one);
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m2 == 0.0);
}

TEST_CASE("recentering") {
  Configuration c{{{1, 0, 0, 0}, {3, 0, 0, 0}}, {1.0, 1.0}};
  Configuration rc = recenter(c);
  CHECK(rc.positions[0].x == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(rc.positions[1].x == doctest::Approx(1.0).epsilon(1e-15));

  Configuration c2 = random_config(5);
  CHECK(mass_centroid(recenter(c2)).norm() < 1e-14);
  Configuration cc = recenter(c2);
  Configuration ccc = recenter(cc);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK((cc.positions[j] - ccc.positions[j]).norm() < 1e-15);

  // the potential term only sees differences, so recentering leaves it alone
  auto newt = Potential::newtonian(1.0);
  CHECK(std::abs(potential_energy(cc, newt) - potential_energy(c2, newt)) <
        1e-13);
}

TEST_CASE("two-body circular orbit keeps its separation") {
  // unit masses at +-a on the x axis; the unweighted pair force 1/(2a)^2
  // balances m w^2 a when w^2 = 1/(4 a^3)
  auto newt = Potential::newtonian(1.0);
  double a = 0.5, w = std::sqrt(1.0 / (4.0 * a * a * a));
  PhaseState s{{{{a, 0, 0, 0}, {-a, 0, 0, 0}}, {1.0, 1.0}},
               {{0, w * a, 0, 0}, {0, -w * a, 0, 0}}};
  NBodyIntegrateOpts opts;
  opts.dt = 1e-4;
  opts.steps = static_cast<long>(std::ceil(2 * kPi / w / opts.dt));
  opts.output_every = 200;
  auto tr = integrate(s, newt, opts);
  REQUIRE_FALSE(tr.collided);
  for (const auto& smp : tr.samples) {
    double d = (smp.positions[0] - smp.positions[1]).norm();
    CHECK(std::abs(d - 2 * a) < 1e-6);
  }
}

TEST_CASE("conservation along a four-body run") {
  auto newt = Potential::newtonian(1.0);
  Configuration c = random_config(4);
  std::vector<Vec4> p;
  for (int j = 0; j < 4; ++j) p.push_back(random_vec(0.2));
  NBodyIntegrateOpts opts;
  opts.dt = 5e-4;
  opts.steps = 40000;
  opts.output_every = 1000;
  auto tr = integrate({c, p}, newt, opts);
  REQUIRE_FALSE(tr.collided);
  double h0 = tr.samples.front().energy;
  double mu10 = tr.samples.front().mu1, mu20 = tr.samples.front().mu2;
  double scale = std::max(1.0, std::abs(h0));
  for (const auto& smp : tr.samples) {
    CHECK(std::abs(smp.energy - h0) < 1e-6 * scale);
    CHECK(std::abs(smp.mu1 - mu10) < 1e-9);
    CHECK(std::abs(smp.mu2 - mu20) < 1e-9);
  }
}

TEST_CASE("a plane through the origin is invariant") {
  // data confined to the xy plane generates no zw forces at all
  auto newt = Potential::newtonian(1.0);
  Configuration c{{{1, 0.2, 0, 0}, {-0.8, 0.5, 0, 0}, {0.1, -1.1, 0, 0}},
                  {1.0, 2.0, 1.5}};
  std::vector<Vec4> p{{0.1, 0.4, 0, 0}, {-0.3, 0.2, 0, 0}, {0.2, -0.5, 0, 0}};
  NBodyIntegrateOpts opts;
  opts.dt = 1e-3;
  opts.steps = 5000;
  opts.output_every = 250;
  auto tr = integrate({c, p}, newt, opts);
  for (const auto& smp : tr.samples)
    for (const auto& q : smp.positions) {
      CHECK(std::abs(q.z) < 1e-10);
      CHECK(std::abs(q.w) < 1e-10);
    }
}

TEST_CASE("homothetic release of a square stays self-similar") {
  // a regular planar polygon of equal masses released at rest collapses
  // homothetically, so the normalised shape is frozen
  auto newt = Potential::newtonian(1.0);
  Configuration square{
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, -1, 0, 0}},
      {1.0, 1.0, 1.0, 1.0}};
  PhaseState s{square, std::vector<Vec4>(4, Vec4{0, 0, 0, 0})};
  NBodyIntegrateOpts opts;
  opts.dt = 1e-4;
  opts.steps = 5000;
  opts.output_every = 250;
  auto tr = integrate(s, newt, opts);
  REQUIRE_FALSE(tr.collided);
  bool shrank = false;
  for (const auto& smp : tr.samples) {
    Configuration now{smp.positions, square.masses};
    CHECK(shape_distance(now, square) < 1e-6);
    if (smp.positions[0].norm() < 0.95) shrank = true;
  }
  CHECK(shrank);
}

TEST_CASE("leapfrog is time reversible") {
  auto newt = Potential::newtonian(1.0);
  Configuration c = random_config(3);
  std::vector<Vec4> p;
  for (int j = 0; j < 3; ++j) p.push_back(random_vec(0.3));
  NBodyIntegrateOpts opts;
  opts.dt = 1e-3;
  opts.steps = 1000;
  opts.output_every = opts.steps;
  auto fwd = integrate({c, p}, newt, opts);
  REQUIRE_FALSE(fwd.collided);
  const auto& end = fwd.samples.back();
  std::vector<Vec4> back_p;
  for (const auto& v : end.momenta) back_p.push_back(-v);
  auto bwd = integrate({{end.positions, c.masses}, back_p}, newt, opts);
  const auto& ret = bwd.samples.back();
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK((ret.positions[j] - c.positions[j]).norm() < 1e-8);
    CHECK((ret.momenta[j] + p[j]).norm() < 1e-8);
  }
}

TEST_CASE("head-on infall stops at the collision threshold") {
  // relative coordinate obeys r'' = -2/r^2, so free fall from r=1 takes
  // pi/4 once integrated
  auto newt = Potential::newtonian(1.0);
  PhaseState s{{{{0.5, 0, 0, 0}, {-0.5, 0, 0, 0}}, {1.0, 1.0}},
               {{0, 0, 0, 0}, {0, 0, 0, 0}}};
  NBodyIntegrateOpts opts;
  opts.dt = 1e-5;
  opts.steps = 200000;
  opts.output_every = 5000;
  opts.collision_threshold = 1e-3;
  auto tr = integrate(s, newt, opts);
  CHECK(tr.collided);
  CHECK(tr.final_time > 0.7);
  CHECK(tr.final_time < 0.9);
}

TEST_CASE("input validation") {
  auto newt = Potential::newtonian(1.0);
  Configuration empty;
  CHECK_THROWS_AS(potential_energy(empty, newt), Error);
  Configuration bad_mass{{{0, 0, 0, 0}}, {-1.0}};
  CHECK_THROWS_AS(potential_energy(bad_mass, newt), Error);
  Configuration mismatch{{{0, 0, 0, 0}, {1, 0, 0, 0}}, {1.0}};
  CHECK_THROWS_AS(potential_energy(mismatch, newt), Error);
  PhaseState s{{{{0, 0, 0, 0}}, {1.0}}, {{0, 0, 0, 0}}};
  NBodyIntegrateOpts bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(integrate(s, newt, bad), Error);
}
