#include "r4nb/central_force.hpp"

#include <algorithm>
#include <cmath>

#include "r4nb/error.hpp"
#include "r4nb/roots.hpp"

namespace r4nb {

namespace {

void require_radii(double r1, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) fail(ErrorCode::DomainError, "radii must be positive");
}

}  // namespace

double reduced_energy(const ReducedCentralState& s, const Potential& V) {
  require_radii(s.r1, s.r2);
  double kinetic = 0.5 * (s.p_r1 * s.p_r1 + s.p_r2 * s.p_r2);
  return kinetic + effective_potential(s.mu1, s.mu2, s.r1, s.r2, V);
}

double effective_potential(double mu1, double mu2, double r1, double r2, const Potential& V) {
  require_radii(r1, r2);
  double centrifugal = 0.5 * (mu1 * mu1 / (r1 * r1) + mu2 * mu2 / (r2 * r2));
  return centrifugal + V.eval(std::hypot(r1, r2)).value;
}

bool hill_allowed(double h, double mu1, double mu2, double r1, double r2, const Potential& V) {
  return effective_potential(mu1, mu2, r1, r2, V) <= h;
}

double hill_min_radius(double h, double mu1, double mu2, const Potential& V) {
  double b = 0.5 * (std::abs(mu1) + std::abs(mu2)) * (std::abs(mu1) + std::abs(mu2));
  if (b == 0.0) return 0.0;
  auto w = [&](double r) { return b / (r * r) + V.value_t<double>(r) - h; };
  const double lo = 1e-8, hi = 1e8;
  if (w(lo) <= 0.0) return lo;
  auto brackets = roots::scan_log(w, lo, hi, 800);
  if (brackets.empty())
    fail(ErrorCode::NoRoot, "no radius attains the requested energy on the scan range");
  return roots::bisect(w, brackets.front().first, brackets.front().second);
}

std::pair<double, double> reconstruction_rates(const ReducedCentralState& s) {
  require_radii(s.r1, s.r2);
  return {s.mu1 / (s.r1 * s.r1), s.mu2 / (s.r2 * s.r2)};
}

PolarReducedState to_polar_reduced(const ReducedCentralState& s) {
  require_radii(s.r1, s.r2);
  PolarReducedState p;
  p.R = std::hypot(s.r1, s.r2);
  p.phi = std::atan2(s.r2, s.r1);
  p.P_R = (s.r1 * s.p_r1 + s.r2 * s.p_r2) / p.R;
  p.P_phi = s.r1 * s.p_r2 - s.r2 * s.p_r1;
  return p;
}

ReducedCentralState from_polar_reduced(const PolarReducedState& p, double mu1, double mu2) {
  if (!(p.R > 0.0)) fail(ErrorCode::DomainError, "radius must be positive");
  double c = std::cos(p.phi), s = std::sin(p.phi);
  ReducedCentralState out;
  out.r1 = p.R * c;
  out.r2 = p.R * s;
  out.p_r1 = p.P_R * c - p.P_phi * s / p.R;
  out.p_r2 = p.P_R * s + p.P_phi * c / p.R;
  out.mu1 = mu1;
  out.mu2 = mu2;
  return out;
}

std::vector<double> proportional_phi(double mu1, double mu2) {
  if (mu1 == 0.0 && mu2 == 0.0)
    fail(ErrorCode::ZeroMomentum, "proportional manifolds need a nonzero momentum pair");
  if (mu1 * mu2 <= 0.0)
    fail(ErrorCode::NoRealRoot, "no proportional angle exists in the open quadrant");
  return {std::atan(std::sqrt(mu2 / mu1))};
}

std::vector<double> radial_equilibrium(const Potential& V, double mu1, double mu2) {
  if (V.kind() == PotentialKind::Jacobi)
    fail(ErrorCode::DegeneratePotential,
         "R^3 V'(R) is constant for an inverse-square potential; no isolated root");
  if (!V.is_attractive()) fail(ErrorCode::DomainError, "potential must be attractive");

  const double target = (mu1 + mu2) * (mu1 + mu2);
  auto g = [&](double r) { return r * r * r * V.d1_t<double>(r) - target; };
  auto dg = [&](double r) {
    return 3.0 * r * r * V.d1_t<double>(r) + r * r * r * V.d2_t<double>(r);
  };

  auto brackets = roots::scan_log(g, 1e-4, 1e4, 400);
  if (brackets.empty())
    fail(ErrorCode::NoRoot, "no radial equilibrium on the scan range");

  std::vector<double> out;
  for (auto [a, b] : brackets) {
    double r = roots::bisect(g, a, b);
    r = roots::newton_polish(g, dg, r);
    if (out.empty() || std::abs(r - out.back()) > 1e-9 * r) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vec4 lrl_vector(const Vec4& q, const Vec4& p, double k) {
  double r = q.norm();
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "eccentricity vector undefined at the origin");
  return q * (p.squared_norm() - k / r) - p * q.dot(p);
}

KeplerOrbitParams kepler_orbit_params(double h, double mu1, double mu2, double k) {
  if (!(k > 0.0)) fail(ErrorCode::DomainError, "orbit parameters need an attractive coupling");
  double msq = mu1 * mu1 + mu2 * mu2;
  double radicand = 1.0 + 2.0 * h * msq / (k * k);
  if (radicand < 0.0)
    fail(ErrorCode::InvalidRadicand, "eccentricity radicand is negative");
  double eps = std::sqrt(radicand);
  return {msq / k, eps, eps >= 1.0};
}

bool is_collision_possible(double mu1, double mu2, const Potential& V) {
  bool supported = V.kind() == PotentialKind::Newtonian ||
                   (V.kind() == PotentialKind::Homogeneous && V.alpha() < 2.0);
  if (!supported)
    fail(ErrorCode::UnsupportedPotential,
         "collision criterion requires a potential weaker than the centrifugal barrier");
  return mu1 == 0.0 && mu2 == 0.0;
}

CentralTrajectory integrate_central(const Vec4& q0, const Vec4& p0, const Potential& V,
                                    const IntegrateOpts& opts) {
  if (!(opts.dt > 0.0) || opts.steps < 0 || opts.output_every < 1)
    fail(ErrorCode::InvalidArgument, "integration needs dt > 0, steps >= 0, output_every >= 1");

  CentralTrajectory out;
  Vec4 q = q0, p = p0;

  auto force = [&](const Vec4& pos) {
    double r = pos.norm();
    return pos * (-V.d1_t<double>(r) / r);
  };
  auto emit = [&](double t) {
    double r = q.norm();
    double en = 0.5 * p.squared_norm() + (r > 0.0 ? V.value_t<double>(r) : 0.0);
    auto [m1, m2] = momentum_map_single(q, p);
    out.samples.push_back({t, q, p, en, m1, m2,
                           0.5 * (q.x * p.y - q.y * p.x), 0.5 * (q.z * p.w - q.w * p.z)});
  };

  if (q.norm() < opts.collision_threshold) {
    out.collided = true;
    emit(0.0);
    return out;
  }

  emit(0.0);
  Vec4 f = force(q);
  for (long i = 1; i <= opts.steps; ++i) {
    p += f * (0.5 * opts.dt);
    q += p * opts.dt;
    double r = q.norm();
    if (r < opts.collision_threshold) {
      if (r > 0.0) {
        f = force(q);
        p += f * (0.5 * opts.dt);
      }
      out.collided = true;
      out.steps_completed = i;
      out.final_time = i * opts.dt;
      emit(out.final_time);
      return out;
    }
    f = force(q);
    p += f * (0.5 * opts.dt);
    out.steps_completed = i;
    out.final_time = i * opts.dt;
    if (i % opts.output_every == 0 || i == opts.steps) emit(out.final_time);
  }
  return out;
}

}  // namespace r4nb
