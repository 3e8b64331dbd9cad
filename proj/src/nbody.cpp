#include "r4nb/nbody.hpp"

#include <cmath>
#include <limits>

#include "r4nb/error.hpp"
#include "r4nb/geom4.hpp"

namespace r4nb {

namespace {

bool finite4(const Vec4& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z) &&
         std::isfinite(v.w);
}

double min_pair_distance(const std::vector<Vec4>& q) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < q.size(); ++j)
    for (std::size_t k = j + 1; k < q.size(); ++k)
      m = std::min(m, (q[j] - q[k]).norm());
  return m;
}

}  // namespace

void validate_configuration(const Configuration& c) {
  if (c.positions.empty())
    fail(ErrorCode::InvalidArgument, "configuration needs at least one body");
  if (c.masses.size() != c.positions.size())
    fail(ErrorCode::InvalidArgument, "masses and positions disagree in length");
  for (double m : c.masses)
    if (!(m > 0.0) || !std::isfinite(m))
      fail(ErrorCode::InvalidArgument, "masses must be positive and finite");
  for (const Vec4& q : c.positions)
    if (!finite4(q)) fail(ErrorCode::InvalidArgument, "non-finite position");
}

void validate_phase_state(const PhaseState& s) {
  validate_configuration(s.config);
  if (s.momenta.size() != s.config.positions.size())
    fail(ErrorCode::InvalidArgument, "momenta and positions disagree in length");
  for (const Vec4& p : s.momenta)
    if (!finite4(p)) fail(ErrorCode::InvalidArgument, "non-finite momentum");
}

double potential_energy(const Configuration& c, const Potential& V,
                        bool mass_weighted, double coll_eps) {
  validate_configuration(c);
  double u = 0.0;
  for (std::size_t j = 0; j + 1 < c.positions.size(); ++j) {
    for (std::size_t k = j + 1; k < c.positions.size(); ++k) {
      double d = (c.positions[j] - c.positions[k]).norm();
      if (d <= coll_eps)
        fail(ErrorCode::CollisionError, "bodies " + std::to_string(j) + " and " +
                                            std::to_string(k) + " coincide");
      double w = mass_weighted ? c.masses[j] * c.masses[k] : 1.0;
      u += w * V.eval(d).value;
    }
  }
  return u;
}

std::vector<Vec4> grad_U(const Configuration& c, const Potential& V,
                         bool mass_weighted, double coll_eps) {
  validate_configuration(c);
  std::vector<Vec4> g(c.positions.size(), Vec4{0, 0, 0, 0});
  for (std::size_t j = 0; j + 1 < c.positions.size(); ++j) {
    for (std::size_t k = j + 1; k < c.positions.size(); ++k) {
      Vec4 diff = c.positions[j] - c.positions[k];
      double d = diff.norm();
      if (d <= coll_eps)
        fail(ErrorCode::CollisionError, "bodies " + std::to_string(j) + " and " +
                                            std::to_string(k) + " coincide");
      double w = mass_weighted ? c.masses[j] * c.masses[k] : 1.0;
      Vec4 pull = diff * (w * V.eval(d).d1 / d);
      g[j] += pull;
      g[k] -= pull;
    }
  }
  return g;
}

double kinetic_energy(const PhaseState& s) {
  validate_phase_state(s);
  double t = 0.0;
  for (std::size_t j = 0; j < s.momenta.size(); ++j)
    t += s.momenta[j].squared_norm() / (2.0 * s.config.masses[j]);
  return t;
}

double total_energy(const PhaseState& s, const Potential& V,
                    bool mass_weighted) {
  return kinetic_energy(s) + potential_energy(s.config, V, mass_weighted);
}

std::pair<double, double> momentum_map_total(const PhaseState& s) {
  validate_phase_state(s);
  double mu1 = 0.0, mu2 = 0.0;
  for (std::size_t j = 0; j < s.momenta.size(); ++j) {
    auto [a, b] = momentum_map_single(s.config.positions[j], s.momenta[j]);
    mu1 += a;
    mu2 += b;
  }
  return {mu1, mu2};
}

Vec4 mass_centroid(const Configuration& c) {
  validate_configuration(c);
  Vec4 com{0, 0, 0, 0};
  double total = 0.0;
  for (std::size_t j = 0; j < c.positions.size(); ++j) {
    com += c.positions[j] * c.masses[j];
    total += c.masses[j];
  }
  return com / total;
}

Configuration recenter(const Configuration& c) {
  Vec4 com = mass_centroid(c);
  Configuration out = c;
  for (Vec4& q : out.positions) q -= com;
  return out;
}

NBodyTrajectory integrate(const PhaseState& s0, const Potential& V,
                          const NBodyIntegrateOpts& opts) {
  validate_phase_state(s0);
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt))
    fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (opts.steps < 1) fail(ErrorCode::InvalidArgument, "steps must be >= 1");
  if (opts.output_every < 1)
    fail(ErrorCode::InvalidArgument, "output_every must be >= 1");
  if (!(opts.collision_threshold >= 0.0))
    fail(ErrorCode::InvalidArgument, "collision threshold must be >= 0");

  const std::size_t n = s0.config.size();
  Configuration c = s0.config;
  std::vector<Vec4> p = s0.momenta;

  NBodyTrajectory out;
  auto emit = [&](double t) {
    NBodySample smp;
    smp.t = t;
    smp.positions = c.positions;
    smp.momenta = p;
    double en = std::numeric_limits<double>::quiet_NaN();
    if (min_pair_distance(c.positions) > 0.0)
      en = kinetic_energy({c, p}) +
           potential_energy(c, V, opts.mass_weighted, 0.0);
    smp.energy = en;
    std::tie(smp.mu1, smp.mu2) = momentum_map_total({c, p});
    smp.centroid = mass_centroid(c);
    out.samples.push_back(std::move(smp));
  };

  auto forces = [&](const Configuration& cfg) {
    auto g = grad_U(cfg, V, opts.mass_weighted, 0.0);
    for (Vec4& v : g) v = -v;
    return g;
  };

  if (n > 1 && min_pair_distance(c.positions) < opts.collision_threshold) {
    out.collided = true;
    emit(0.0);
    return out;
  }

  emit(0.0);
  std::vector<Vec4> f =
      n > 1 ? forces(c) : std::vector<Vec4>(1, Vec4{0, 0, 0, 0});
  for (long i = 1; i <= opts.steps; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      p[j] += f[j] * (0.5 * opts.dt);
      c.positions[j] += p[j] * (opts.dt / c.masses[j]);
    }
    if (n > 1) {
      double dmin = min_pair_distance(c.positions);
      if (dmin < opts.collision_threshold) {
        if (dmin > 0.0) {
          f = forces(c);
          for (std::size_t j = 0; j < n; ++j) p[j] += f[j] * (0.5 * opts.dt);
        }
        out.collided = true;
        out.steps_completed = i;
        out.final_time = i * opts.dt;
        emit(out.final_time);
        return out;
      }
      f = forces(c);
    }
    for (std::size_t j = 0; j < n; ++j) p[j] += f[j] * (0.5 * opts.dt);
    out.steps_completed = i;
    out.final_time = i * opts.dt;
    if (i % opts.output_every == 0 || i == opts.steps) emit(out.final_time);
  }
  return out;
}

}  // namespace r4nb
