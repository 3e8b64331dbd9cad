// C binding layer over the C++ core. Every exported call funnels through
// guarded(), which converts exceptions into status codes and stores the
// message of the most recent failure per thread. Handles own plain copies
// of the core types, so destroying one never invalidates another.

#include "r4nbody.h"

#include <algorithm>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "r4nb/central_force.hpp"
#include "r4nb/error.hpp"
#include "r4nb/geom4.hpp"
#include "r4nb/nbody.hpp"
#include "r4nb/ngon.hpp"
#include "r4nb/potential.hpp"
#include "r4nb/rel_equilibria.hpp"
#include "r4nb/stability.hpp"
#include "r4nb/threebody.hpp"

struct r4nb_potential {
  r4nb::Potential p;
};

struct r4nb_state {
  r4nb::PhaseState s;
};

struct r4nb_trajectory {
  r4nb::NBodyTrajectory t;
};

struct r4nb_central_trajectory {
  r4nb::CentralTrajectory t;
};

struct r4nb_r3b_trajectory {
  r4nb::Reduced3BTrajectory t;
};

namespace {

thread_local std::string g_last_error;

r4nb_status map_code(r4nb::ErrorCode c) {
  using EC = r4nb::ErrorCode;
  switch (c) {
    case EC::InvalidArgument: return R4NB_ERR_INVALID_ARGUMENT;
    case EC::DomainError: return R4NB_ERR_DOMAIN;
    case EC::NotARotation: return R4NB_ERR_NOT_A_ROTATION;
    case EC::NotAntisymmetric: return R4NB_ERR_NOT_ANTISYMMETRIC;
    case EC::DegeneratePotential: return R4NB_ERR_DEGENERATE_POTENTIAL;
    case EC::UnsupportedPotential: return R4NB_ERR_UNSUPPORTED_POTENTIAL;
    case EC::NoRoot: return R4NB_ERR_NO_ROOT;
    case EC::NoRealRoot: return R4NB_ERR_NO_REAL_ROOT;
    case EC::ZeroMomentum: return R4NB_ERR_ZERO_MOMENTUM;
    case EC::InvalidRadicand: return R4NB_ERR_INVALID_RADICAND;
    case EC::CollisionError: return R4NB_ERR_COLLISION;
    case EC::NotBalanced: return R4NB_ERR_NOT_BALANCED;
    case EC::InvalidCase: return R4NB_ERR_INVALID_CASE;
    case EC::NoConvergence: return R4NB_ERR_NO_CONVERGENCE;
    case EC::InactiveBlock: return R4NB_ERR_INACTIVE_BLOCK;
    case EC::NotAnEquilibrium: return R4NB_ERR_NOT_AN_EQUILIBRIUM;
    case EC::NotApplicable: return R4NB_ERR_NOT_APPLICABLE;
    case EC::DegenerateSpec: return R4NB_ERR_DEGENERATE_SPEC;
  }
  return R4NB_ERR_UNKNOWN;
}

template <typename Fn>
r4nb_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return R4NB_OK;
  } catch (const r4nb::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return R4NB_ERR_UNKNOWN;
  }
}

r4nb_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  return R4NB_ERR_INVALID_ARGUMENT;
}

void pack_vec4(const std::vector<r4nb::Vec4>& v, double* out) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int c = 0; c < 4; ++c) out[4 * i + c] = v[i][c];
}

std::vector<r4nb::Vec4> unpack_vec4(const double* data, std::size_t n) {
  std::vector<r4nb::Vec4> v(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c) v[i][c] = data[4 * i + c];
  return v;
}

r4nb::NBodyIntegrateOpts nbody_opts(const r4nb_integrate_opts* o) {
  r4nb::NBodyIntegrateOpts opts;
  if (o) {
    opts.dt = o->dt;
    opts.steps = o->steps;
    opts.output_every = o->output_every;
    opts.collision_threshold = o->collision_threshold;
    opts.mass_weighted = o->mass_weighted != 0;
  }
  return opts;
}

r4nb::ThreeBodyMasses unpack_masses(const double m[3]) {
  r4nb::ThreeBodyMasses out;
  out.m1 = m[0];
  out.m2 = m[1];
  out.m3 = m[2];
  return out;
}

r4nb::ReducedThreeBodyState unpack_reduced(const r4nb_reduced3b* s) {
  r4nb::ReducedThreeBodyState out;
  out.r1 = s->r1;
  out.r2 = s->r2;
  out.s1 = s->s1;
  out.s2 = s->s2;
  out.phi1 = s->phi1;
  out.phi2 = s->phi2;
  out.p_r1 = s->p_r1;
  out.p_r2 = s->p_r2;
  out.p_s1 = s->p_s1;
  out.p_s2 = s->p_s2;
  out.p_phi1 = s->p_phi1;
  out.p_phi2 = s->p_phi2;
  out.mu1 = s->mu1;
  out.mu2 = s->mu2;
  return out;
}

void pack_reduced(const r4nb::ReducedThreeBodyState& s, r4nb_reduced3b* out) {
  out->r1 = s.r1;
  out->r2 = s.r2;
  out->s1 = s.s1;
  out->s2 = s.s2;
  out->phi1 = s.phi1;
  out->phi2 = s.phi2;
  out->p_r1 = s.p_r1;
  out->p_r2 = s.p_r2;
  out->p_s1 = s.p_s1;
  out->p_s2 = s.p_s2;
  out->p_phi1 = s.p_phi1;
  out->p_phi2 = s.p_phi2;
  out->mu1 = s.mu1;
  out->mu2 = s.mu2;
}

r4nb::NGonSpec unpack_ngon(const r4nb_ngon_spec* spec) {
  r4nb::NGonSpec out;
  out.a1 = spec->a1;
  out.b1 = spec->b1;
  out.a2 = spec->a2;
  out.b2 = spec->b2;
  out.r1 = spec->r1;
  out.r2 = spec->r2;
  out.theta1 = spec->theta1;
  out.theta2 = spec->theta2;
  return out;
}

}  // namespace

extern "C" {

const char* r4nb_status_name(r4nb_status s) {
  switch (s) {
    case R4NB_OK: return "Ok";
    case R4NB_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case R4NB_ERR_DOMAIN: return "DomainError";
    case R4NB_ERR_NOT_A_ROTATION: return "NotARotation";
    case R4NB_ERR_NOT_ANTISYMMETRIC: return "NotAntisymmetric";
    case R4NB_ERR_DEGENERATE_POTENTIAL: return "DegeneratePotential";
    case R4NB_ERR_UNSUPPORTED_POTENTIAL: return "UnsupportedPotential";
    case R4NB_ERR_NO_ROOT: return "NoRoot";
    case R4NB_ERR_NO_REAL_ROOT: return "NoRealRoot";
    case R4NB_ERR_ZERO_MOMENTUM: return "ZeroMomentum";
    case R4NB_ERR_INVALID_RADICAND: return "InvalidRadicand";
    case R4NB_ERR_COLLISION: return "CollisionError";
    case R4NB_ERR_NOT_BALANCED: return "NotBalanced";
    case R4NB_ERR_INVALID_CASE: return "InvalidCase";
    case R4NB_ERR_NO_CONVERGENCE: return "NoConvergence";
    case R4NB_ERR_INACTIVE_BLOCK: return "InactiveBlock";
    case R4NB_ERR_NOT_AN_EQUILIBRIUM: return "NotAnEquilibrium";
    case R4NB_ERR_NOT_APPLICABLE: return "NotApplicable";
    case R4NB_ERR_DEGENERATE_SPEC: return "DegenerateSpec";
    case R4NB_ERR_UNKNOWN: return "Unknown";
  }
  return "Unknown";
}

int r4nb_status_exit_class(r4nb_status s) {
  switch (s) {
    case R4NB_OK: return 0;
    case R4NB_ERR_INVALID_ARGUMENT: return 2;
    case R4NB_ERR_NO_CONVERGENCE:
    case R4NB_ERR_COLLISION:
    case R4NB_ERR_UNKNOWN: return 3;
    default: return 4;
  }
}

const char* r4nb_last_error(void) { return g_last_error.c_str(); }

const char* r4nb_version(void) { return "1.0.0"; }

/* ------------------------------------------------------------- potentials */

r4nb_status r4nb_potential_create(const char* kind, double k, double alpha,
                                  r4nb_potential** out) {
  if (!kind) return null_arg("kind");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new r4nb_potential{r4nb::Potential::make(kind, k, alpha)}; });
}

void r4nb_potential_destroy(r4nb_potential* p) { delete p; }

r4nb_status r4nb_potential_eval(const r4nb_potential* p, double r, double* value, double* d1,
                                double* d2) {
  if (!p) return null_arg("potential");
  return guarded([&] {
    const r4nb::PotentialValue pv = p->p.eval(r);
    if (value) *value = pv.value;
    if (d1) *d1 = pv.d1;
    if (d2) *d2 = pv.d2;
  });
}

int r4nb_potential_attractive(const r4nb_potential* p) {
  return p && p->p.is_attractive() ? 1 : 0;
}

int r4nb_potential_singular_at_origin(const r4nb_potential* p) {
  return p && p->p.singular_at_origin() ? 1 : 0;
}

/* ----------------------------------------------------------- phase states */

r4nb_status r4nb_state_create(size_t n, const double* masses, const double* positions,
                              const double* momenta, r4nb_state** out) {
  if (!masses) return null_arg("masses");
  if (!positions) return null_arg("positions");
  if (!out) return null_arg("out");
  return guarded([&] {
    r4nb::PhaseState s;
    s.config.masses.assign(masses, masses + n);
    s.config.positions = unpack_vec4(positions, n);
    s.momenta = momenta ? unpack_vec4(momenta, n) : std::vector<r4nb::Vec4>(n);
    r4nb::validate_phase_state(s);
    *out = new r4nb_state{std::move(s)};
  });
}

void r4nb_state_destroy(r4nb_state* s) { delete s; }

size_t r4nb_state_size(const r4nb_state* s) { return s ? s->s.config.size() : 0; }

r4nb_status r4nb_state_masses(const r4nb_state* s, double* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  std::copy(s->s.config.masses.begin(), s->s.config.masses.end(), out);
  return R4NB_OK;
}

r4nb_status r4nb_state_positions(const r4nb_state* s, double* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  pack_vec4(s->s.config.positions, out);
  return R4NB_OK;
}

r4nb_status r4nb_state_momenta(const r4nb_state* s, double* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  pack_vec4(s->s.momenta, out);
  return R4NB_OK;
}

r4nb_status r4nb_state_energy(const r4nb_state* s, const r4nb_potential* V, int mass_weighted,
                              double* out) {
  if (!s) return null_arg("state");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] { *out = r4nb::total_energy(s->s, V->p, mass_weighted != 0); });
}

r4nb_status r4nb_state_momentum_map(const r4nb_state* s, double* mu1, double* mu2) {
  if (!s) return null_arg("state");
  return guarded([&] {
    const auto mu = r4nb::momentum_map_total(s->s);
    if (mu1) *mu1 = mu.first;
    if (mu2) *mu2 = mu.second;
  });
}

r4nb_status r4nb_state_recenter(r4nb_state* s) {
  if (!s) return null_arg("state");
  return guarded([&] { s->s.config = r4nb::recenter(s->s.config); });
}

/* ------------------------------------------------------------ propagation */

void r4nb_integrate_opts_init(r4nb_integrate_opts* opts) {
  if (!opts) return;
  opts->dt = 1e-3;
  opts->steps = 1000;
  opts->output_every = 1;
  opts->collision_threshold = 1e-6;
  opts->mass_weighted = 0;
}

r4nb_status r4nb_integrate(const r4nb_state* s, const r4nb_potential* V,
                           const r4nb_integrate_opts* opts, r4nb_trajectory** out) {
  if (!s) return null_arg("state");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = new r4nb_trajectory{r4nb::integrate(s->s, V->p, nbody_opts(opts))}; });
}

void r4nb_trajectory_destroy(r4nb_trajectory* t) { delete t; }

size_t r4nb_trajectory_samples(const r4nb_trajectory* t) { return t ? t->t.samples.size() : 0; }

int r4nb_trajectory_collided(const r4nb_trajectory* t) { return t && t->t.collided ? 1 : 0; }

double r4nb_trajectory_final_time(const r4nb_trajectory* t) { return t ? t->t.final_time : 0.0; }

long r4nb_trajectory_steps(const r4nb_trajectory* t) { return t ? t->t.steps_completed : 0; }

r4nb_status r4nb_trajectory_sample(const r4nb_trajectory* t, size_t i, r4nb_sample_info* info,
                                   double* positions, double* momenta) {
  if (!t) return null_arg("trajectory");
  if (i >= t->t.samples.size()) {
    g_last_error = "sample index out of range";
    return R4NB_ERR_INVALID_ARGUMENT;
  }
  const r4nb::NBodySample& s = t->t.samples[i];
  if (info) {
    info->t = s.t;
    info->energy = s.energy;
    info->mu1 = s.mu1;
    info->mu2 = s.mu2;
    for (int c = 0; c < 4; ++c) info->centroid[c] = s.centroid[c];
  }
  if (positions) pack_vec4(s.positions, positions);
  if (momenta) pack_vec4(s.momenta, momenta);
  return R4NB_OK;
}

/* ---------------------------------------------- single-body central force */

r4nb_status r4nb_central_integrate(const double q[4], const double p[4],
                                   const r4nb_potential* V, const r4nb_integrate_opts* opts,
                                   r4nb_central_trajectory** out) {
  if (!q) return null_arg("q");
  if (!p) return null_arg("p");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    r4nb::IntegrateOpts io;
    if (opts) {
      io.dt = opts->dt;
      io.steps = opts->steps;
      io.output_every = opts->output_every;
      io.collision_threshold = opts->collision_threshold;
    }
    const r4nb::Vec4 q0{q[0], q[1], q[2], q[3]};
    const r4nb::Vec4 p0{p[0], p[1], p[2], p[3]};
    *out = new r4nb_central_trajectory{r4nb::integrate_central(q0, p0, V->p, io)};
  });
}

void r4nb_central_trajectory_destroy(r4nb_central_trajectory* t) { delete t; }

size_t r4nb_central_trajectory_samples(const r4nb_central_trajectory* t) {
  return t ? t->t.samples.size() : 0;
}

int r4nb_central_trajectory_collided(const r4nb_central_trajectory* t) {
  return t && t->t.collided ? 1 : 0;
}

double r4nb_central_trajectory_final_time(const r4nb_central_trajectory* t) {
  return t ? t->t.final_time : 0.0;
}

r4nb_status r4nb_central_trajectory_sample(const r4nb_central_trajectory* t, size_t i,
                                           r4nb_central_sample* out) {
  if (!t) return null_arg("trajectory");
  if (!out) return null_arg("out");
  if (i >= t->t.samples.size()) {
    g_last_error = "sample index out of range";
    return R4NB_ERR_INVALID_ARGUMENT;
  }
  const r4nb::CentralSample& s = t->t.samples[i];
  out->t = s.t;
  for (int c = 0; c < 4; ++c) {
    out->q[c] = s.q[c];
    out->p[c] = s.p[c];
  }
  out->energy = s.energy;
  out->mu1 = s.mu1;
  out->mu2 = s.mu2;
  out->area_xy = s.area_xy;
  out->area_zw = s.area_zw;
  return R4NB_OK;
}

r4nb_status r4nb_effective_potential(const r4nb_potential* V, double mu1, double mu2,
                                     double r1, double r2, double* out) {
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] { *out = r4nb::effective_potential(mu1, mu2, r1, r2, V->p); });
}

r4nb_status r4nb_hill_min_radius(const r4nb_potential* V, double h, double mu1, double mu2,
                                 double* out) {
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] { *out = r4nb::hill_min_radius(h, mu1, mu2, V->p); });
}

r4nb_status r4nb_radial_equilibria(const r4nb_potential* V, double mu1, double mu2,
                                   double* roots, size_t cap, size_t* count) {
  if (!V) return null_arg("potential");
  if (!count) return null_arg("count");
  return guarded([&] {
    const std::vector<double> rs = r4nb::radial_equilibrium(V->p, mu1, mu2);
    *count = rs.size();
    if (roots)
      std::copy(rs.begin(), rs.begin() + std::min(cap, rs.size()), roots);
  });
}

r4nb_status r4nb_proportional_phi(double mu1, double mu2, double* phis, size_t cap,
                                  size_t* count) {
  if (!count) return null_arg("count");
  return guarded([&] {
    const std::vector<double> ps = r4nb::proportional_phi(mu1, mu2);
    *count = ps.size();
    if (phis)
      std::copy(ps.begin(), ps.begin() + std::min(cap, ps.size()), phis);
  });
}

r4nb_status r4nb_kepler_orbit_params(double h, double mu1, double mu2, double k,
                                     double* semi_latus, double* eccentricity,
                                     int* hyperbolic) {
  return guarded([&] {
    const r4nb::KeplerOrbitParams kp = r4nb::kepler_orbit_params(h, mu1, mu2, k);
    if (semi_latus) *semi_latus = kp.p;
    if (eccentricity) *eccentricity = kp.eps;
    if (hyperbolic) *hyperbolic = kp.hyperbolic ? 1 : 0;
  });
}

r4nb_status r4nb_lrl_vector(const double q[4], const double p[4], double k, double out[4]) {
  if (!q) return null_arg("q");
  if (!p) return null_arg("p");
  if (!out) return null_arg("out");
  return guarded([&] {
    const r4nb::Vec4 a =
        r4nb::lrl_vector({q[0], q[1], q[2], q[3]}, {p[0], p[1], p[2], p[3]}, k);
    for (int c = 0; c < 4; ++c) out[c] = a[c];
  });
}

int r4nb_collision_possible(double mu1, double mu2, const r4nb_potential* V) {
  return V && r4nb::is_collision_possible(mu1, mu2, V->p) ? 1 : 0;
}

/* ----------------------------------------------------- relative equilibria */

r4nb_status r4nb_solve_balanced(const r4nb_state* s, const r4nb_potential* V,
                                int mass_weighted, double tol, r4nb_re_result* out) {
  if (!s) return null_arg("state");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    const r4nb::REResult r =
        r4nb::solve_balanced_omega(s->s.config, V->p, mass_weighted != 0, tol);
    out->omega1 = r.omega.omega1;
    out->omega2 = r.omega.omega2;
    out->omega1_undetermined = r.omega1_undetermined ? 1 : 0;
    out->omega2_undetermined = r.omega2_undetermined ? 1 : 0;
    out->residual_norm = r.residual_norm;
    out->central = r.central ? 1 : 0;
    out->lambda = r.lambda;
  });
}

r4nb_status r4nb_re_residual_norm(const r4nb_state* s, double omega1, double omega2,
                                  const r4nb_potential* V, int mass_weighted, double* out) {
  if (!s) return null_arg("state");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = r4nb::re_residual_norm(s->s.config, {omega1, omega2}, V->p, mass_weighted != 0);
  });
}

r4nb_status r4nb_is_central(const r4nb_state* s, const r4nb_potential* V, int mass_weighted,
                            double tol, int* central, double* lambda) {
  if (!s) return null_arg("state");
  if (!V) return null_arg("potential");
  return guarded([&] {
    const auto [ok, lam] = r4nb::is_central(s->s.config, V->p, mass_weighted != 0, tol);
    if (central) *central = ok ? 1 : 0;
    if (lambda) *lambda = lam;
  });
}

/* ---------------------------------------------------------------- n-gons */

void r4nb_ngon_spec_init(r4nb_ngon_spec* spec) {
  if (!spec) return;
  const r4nb::NGonSpec d;
  spec->a1 = d.a1;
  spec->b1 = d.b1;
  spec->a2 = d.a2;
  spec->b2 = d.b2;
  spec->r1 = d.r1;
  spec->r2 = d.r2;
  spec->theta1 = d.theta1;
  spec->theta2 = d.theta2;
}

r4nb_status r4nb_ngon_order(const r4nb_ngon_spec* spec, int* n) {
  if (!spec) return null_arg("spec");
  if (!n) return null_arg("n");
  return guarded([&] { *n = r4nb::ngon_order(unpack_ngon(spec)); });
}

const char* r4nb_ngon_tag_name(int tag) {
  if (tag < 0 || tag > 3) return "?";
  return r4nb::ngon_tag_name(static_cast<r4nb::NGonTag>(tag));
}

r4nb_status r4nb_ngon_classify(const r4nb_ngon_spec* spec, r4nb_ngon_class* out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    const r4nb::NGonClass c = r4nb::classify_ngon(unpack_ngon(spec));
    out->tag = static_cast<int>(c.tag);
    out->n = c.n;
    out->proj1 = c.proj1;
    out->proj2 = c.proj2;
  });
}

r4nb_status r4nb_ngon_synchronised(const r4nb_ngon_spec* spec, int* out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] { *out = r4nb::is_synchronised(unpack_ngon(spec)) ? 1 : 0; });
}

r4nb_status r4nb_ngon_pair_distance(const r4nb_ngon_spec* spec, int k, double* out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] { *out = r4nb::pair_distance(unpack_ngon(spec), k); });
}

r4nb_status r4nb_ngon_vertices(const r4nb_ngon_spec* spec, double* vertices) {
  if (!spec) return null_arg("spec");
  if (!vertices) return null_arg("vertices");
  return guarded([&] {
    const r4nb::Configuration c = r4nb::build_ngon(unpack_ngon(spec));
    pack_vec4(c.positions, vertices);
  });
}

r4nb_status r4nb_ngon_solve_re_radii(const r4nb_ngon_spec* spec, double c1, double c2,
                                     const r4nb_potential* V, double* r1, double* r2) {
  if (!spec) return null_arg("spec");
  if (!V) return null_arg("potential");
  return guarded([&] {
    const auto [a, b] = r4nb::solve_re_radii(unpack_ngon(spec), c1, c2, V->p);
    if (r1) *r1 = a;
    if (r2) *r2 = b;
  });
}

r4nb_status r4nb_ngon_state(const r4nb_ngon_spec* spec, double p_r1, double p_r2, double c1,
                            double c2, r4nb_state** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new r4nb_state{r4nb::ngon_full_state(unpack_ngon(spec), p_r1, p_r2, c1, c2)};
  });
}

/* ----------------------------------------------------- reduced three-body */

r4nb_status r4nb_threebody_reduce(const r4nb_state* s, r4nb_reduced3b* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] { pack_reduced(r4nb::reduce_threebody(s->s), out); });
}

r4nb_status r4nb_threebody_expand(const r4nb_reduced3b* s, const double masses[3], double psi1,
                                  double psi2, r4nb_state** out) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new r4nb_state{
        r4nb::threebody_full_state(unpack_reduced(s), unpack_masses(masses), psi1, psi2)};
  });
}

r4nb_status r4nb_reduced3b_energy(const r4nb_reduced3b* s, const double masses[3],
                                  const r4nb_potential* V, double* out) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = r4nb::reduced_energy_3b(unpack_reduced(s), unpack_masses(masses), V->p); });
}

r4nb_status r4nb_reduced3b_eom(const r4nb_reduced3b* s, const double masses[3],
                               const r4nb_potential* V, double out[12]) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto f = r4nb::eom_3b(unpack_reduced(s), unpack_masses(masses), V->p);
    std::copy(f.begin(), f.end(), out);
  });
}

r4nb_status r4nb_reduced3b_distances(const r4nb_reduced3b* s, const double masses[3],
                                     double* d12, double* d13, double* d23) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  return guarded([&] {
    const r4nb::MutualDistances d =
        r4nb::mutual_distances(unpack_reduced(s), unpack_masses(masses));
    if (d12) *d12 = d.d12;
    if (d13) *d13 = d.d13;
    if (d23) *d23 = d.d23;
  });
}

const char* r4nb_re_branch_name(int branch) {
  if (branch < 0 || branch > 2) return "?";
  return r4nb::re_branch_name(static_cast<r4nb::REBranch>(branch));
}

r4nb_status r4nb_re_branch(const r4nb_reduced3b* s, const double masses[3],
                           const r4nb_potential* V, double tol, int* branch) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!branch) return null_arg("branch");
  return guarded([&] {
    *branch = static_cast<int>(
        r4nb::re_branch(unpack_reduced(s), unpack_masses(masses), V->p, tol));
  });
}

r4nb_status r4nb_equilateral_equilibrium(double mu1, double mu2, const r4nb_potential* V,
                                         r4nb_reduced3b* out) {
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] { pack_reduced(r4nb::equilateral_equilibrium(mu1, mu2, V->p), out); });
}

r4nb_status r4nb_find_equilibrium(const r4nb_reduced3b* seed, const double masses[3],
                                  const r4nb_potential* V, double tol, int max_iter,
                                  r4nb_reduced3b* out) {
  if (!seed) return null_arg("seed");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    r4nb::EquilibriumSearchOpts opts;
    if (tol > 0) opts.tol = tol;
    if (max_iter > 0) opts.max_iter = max_iter;
    pack_reduced(
        r4nb::find_equilibrium_3b(unpack_reduced(seed), unpack_masses(masses), V->p, opts),
        out);
  });
}

r4nb_status r4nb_reduced3b_integrate(const r4nb_reduced3b* s, const double masses[3],
                                     const r4nb_potential* V, const r4nb_integrate_opts* opts,
                                     r4nb_r3b_trajectory** out) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    r4nb::Reduced3BIntegrateOpts io;
    if (opts) {
      io.dt = opts->dt;
      io.steps = opts->steps;
      io.output_every = opts->output_every;
      io.collision_threshold = opts->collision_threshold;
    }
    *out = new r4nb_r3b_trajectory{
        r4nb::integrate_reduced_3b(unpack_reduced(s), unpack_masses(masses), V->p, io)};
  });
}

void r4nb_r3b_trajectory_destroy(r4nb_r3b_trajectory* t) { delete t; }

size_t r4nb_r3b_trajectory_samples(const r4nb_r3b_trajectory* t) {
  return t ? t->t.samples.size() : 0;
}

int r4nb_r3b_trajectory_collided(const r4nb_r3b_trajectory* t) {
  return t && t->t.collided ? 1 : 0;
}

double r4nb_r3b_trajectory_final_time(const r4nb_r3b_trajectory* t) {
  return t ? t->t.final_time : 0.0;
}

r4nb_status r4nb_r3b_trajectory_sample(const r4nb_r3b_trajectory* t, size_t i, double* time,
                                       r4nb_reduced3b* state, double* energy) {
  if (!t) return null_arg("trajectory");
  if (i >= t->t.samples.size()) {
    g_last_error = "sample index out of range";
    return R4NB_ERR_INVALID_ARGUMENT;
  }
  const r4nb::Reduced3BSample& s = t->t.samples[i];
  if (time) *time = s.t;
  if (state) pack_reduced(s.state, state);
  if (energy) *energy = s.energy;
  return R4NB_OK;
}

/* --------------------------------------------------------------- stability */

const char* r4nb_verdict_name(int verdict) {
  if (verdict < 0 || verdict > 1) return "?";
  return r4nb::stability_verdict_name(static_cast<r4nb::StabilityVerdict>(verdict));
}

r4nb_status r4nb_a_coefficient(const r4nb_potential* V, double l, double gamma, double* out) {
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] { *out = r4nb::a_coefficient(V->p, l, gamma); });
}

r4nb_status r4nb_stability_analysis(const r4nb_reduced3b* s, const double masses[3],
                                    const r4nb_potential* V, r4nb_spectral_report* out) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    const r4nb::SpectralReport r =
        r4nb::stability_analysis(unpack_reduced(s), unpack_masses(masses), V->p);
    for (int i = 0; i < 12; ++i) {
      out->eig_re[i] = r.eigenvalues[i].real();
      out->eig_im[i] = r.eigenvalues[i].imag();
    }
    out->dim_ker_m = r.dim_ker_m;
    out->dim_ker_m2 = r.dim_ker_m2;
    out->det_f = r.det_f;
    out->max_real_part = r.max_real_part;
    out->f_nonsingular = r.f_nonsingular ? 1 : 0;
    out->nilpotent = r.nilpotent ? 1 : 0;
    out->spectrally_unstable = r.spectrally_unstable ? 1 : 0;
    out->verdict = static_cast<int>(r.verdict);
  });
}

r4nb_status r4nb_hessian_full(const r4nb_reduced3b* s, const double masses[3],
                              const r4nb_potential* V, double out[144]) {
  if (!s) return null_arg("state");
  if (!masses) return null_arg("masses");
  if (!V) return null_arg("potential");
  if (!out) return null_arg("out");
  return guarded([&] {
    const r4nb::HessianBlocks hb =
        r4nb::hessian(unpack_reduced(s), unpack_masses(masses), V->p);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) out[12 * i + j] = hb.full(i, j);
  });
}

}  // extern "C"
