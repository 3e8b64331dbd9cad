#ifndef R4NBODY_H
#define R4NBODY_H

/* C interface to the four-dimensional n-body library. All entry points
 * return a status code and write results through out parameters; handles
 * are opaque and must be released with the matching destroy call. Vector
 * buffers use the packed layout x0 y0 z0 w0 x1 y1 z1 w1 ...
 */

#include <stddef.h>

#if defined(_WIN32)
#define R4NB_API __declspec(dllexport)
#else
#define R4NB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum r4nb_status {
  R4NB_OK = 0,
  R4NB_ERR_INVALID_ARGUMENT,
  R4NB_ERR_DOMAIN,
  R4NB_ERR_NOT_A_ROTATION,
  R4NB_ERR_NOT_ANTISYMMETRIC,
  R4NB_ERR_DEGENERATE_POTENTIAL,
  R4NB_ERR_UNSUPPORTED_POTENTIAL,
  R4NB_ERR_NO_ROOT,
  R4NB_ERR_NO_REAL_ROOT,
  R4NB_ERR_ZERO_MOMENTUM,
  R4NB_ERR_INVALID_RADICAND,
  R4NB_ERR_COLLISION,
  R4NB_ERR_NOT_BALANCED,
  R4NB_ERR_INVALID_CASE,
  R4NB_ERR_NO_CONVERGENCE,
  R4NB_ERR_INACTIVE_BLOCK,
  R4NB_ERR_NOT_AN_EQUILIBRIUM,
  R4NB_ERR_NOT_APPLICABLE,
  R4NB_ERR_DEGENERATE_SPEC,
  R4NB_ERR_UNKNOWN
} r4nb_status;

R4NB_API const char* r4nb_status_name(r4nb_status s);

/* Process exit class of a status: 0 success, 2 validation, 3 numerical
 * failure (no convergence, collision stop), 4 domain error. */
R4NB_API int r4nb_status_exit_class(r4nb_status s);

/* Message of the most recent failure on this thread; empty string if none. */
R4NB_API const char* r4nb_last_error(void);

R4NB_API const char* r4nb_version(void);

/* ------------------------------------------------------------- potentials */

typedef struct r4nb_potential r4nb_potential;

/* kind is one of "newtonian", "jacobi", "homogeneous", "harmonic"; alpha is
 * only read for the homogeneous family. */
R4NB_API r4nb_status r4nb_potential_create(const char* kind, double k, double alpha,
                                           r4nb_potential** out);
R4NB_API void r4nb_potential_destroy(r4nb_potential* p);
R4NB_API r4nb_status r4nb_potential_eval(const r4nb_potential* p, double r, double* value,
                                         double* d1, double* d2);
R4NB_API int r4nb_potential_attractive(const r4nb_potential* p);
R4NB_API int r4nb_potential_singular_at_origin(const r4nb_potential* p);

/* ----------------------------------------------------------- phase states */

typedef struct r4nb_state r4nb_state;

/* masses holds n entries, positions 4n; momenta may be NULL for a state
 * at rest. */
R4NB_API r4nb_status r4nb_state_create(size_t n, const double* masses,
                                       const double* positions, const double* momenta,
                                       r4nb_state** out);
R4NB_API void r4nb_state_destroy(r4nb_state* s);
R4NB_API size_t r4nb_state_size(const r4nb_state* s);
R4NB_API r4nb_status r4nb_state_masses(const r4nb_state* s, double* out);
R4NB_API r4nb_status r4nb_state_positions(const r4nb_state* s, double* out);
R4NB_API r4nb_status r4nb_state_momenta(const r4nb_state* s, double* out);
R4NB_API r4nb_status r4nb_state_energy(const r4nb_state* s, const r4nb_potential* V,
                                       int mass_weighted, double* out);
R4NB_API r4nb_status r4nb_state_momentum_map(const r4nb_state* s, double* mu1, double* mu2);
R4NB_API r4nb_status r4nb_state_recenter(r4nb_state* s);

/* ------------------------------------------------------------ propagation */

typedef struct r4nb_integrate_opts {
  double dt;
  long steps;
  long output_every;
  double collision_threshold;
  int mass_weighted;
} r4nb_integrate_opts;

R4NB_API void r4nb_integrate_opts_init(r4nb_integrate_opts* opts);

typedef struct r4nb_trajectory r4nb_trajectory;

typedef struct r4nb_sample_info {
  double t;
  double energy;
  double mu1;
  double mu2;
  double centroid[4];
} r4nb_sample_info;

R4NB_API r4nb_status r4nb_integrate(const r4nb_state* s, const r4nb_potential* V,
                                    const r4nb_integrate_opts* opts, r4nb_trajectory** out);
R4NB_API void r4nb_trajectory_destroy(r4nb_trajectory* t);
R4NB_API size_t r4nb_trajectory_samples(const r4nb_trajectory* t);
R4NB_API int r4nb_trajectory_collided(const r4nb_trajectory* t);
R4NB_API double r4nb_trajectory_final_time(const r4nb_trajectory* t);
R4NB_API long r4nb_trajectory_steps(const r4nb_trajectory* t);
/* positions/momenta may be NULL when only the scalars are wanted; otherwise
 * they must hold 4n doubles. */
R4NB_API r4nb_status r4nb_trajectory_sample(const r4nb_trajectory* t, size_t i,
                                            r4nb_sample_info* info, double* positions,
                                            double* momenta);

/* ---------------------------------------------- single-body central force */

typedef struct r4nb_central_sample {
  double t;
  double q[4];
  double p[4];
  double energy;
  double mu1;
  double mu2;
  double area_xy;
  double area_zw;
} r4nb_central_sample;

typedef struct r4nb_central_trajectory r4nb_central_trajectory;

R4NB_API r4nb_status r4nb_central_integrate(const double q[4], const double p[4],
                                            const r4nb_potential* V,
                                            const r4nb_integrate_opts* opts,
                                            r4nb_central_trajectory** out);
R4NB_API void r4nb_central_trajectory_destroy(r4nb_central_trajectory* t);
R4NB_API size_t r4nb_central_trajectory_samples(const r4nb_central_trajectory* t);
R4NB_API int r4nb_central_trajectory_collided(const r4nb_central_trajectory* t);
R4NB_API double r4nb_central_trajectory_final_time(const r4nb_central_trajectory* t);
R4NB_API r4nb_status r4nb_central_trajectory_sample(const r4nb_central_trajectory* t,
                                                    size_t i, r4nb_central_sample* out);

R4NB_API r4nb_status r4nb_effective_potential(const r4nb_potential* V, double mu1,
                                              double mu2, double r1, double r2,
                                              double* out);
R4NB_API r4nb_status r4nb_hill_min_radius(const r4nb_potential* V, double h, double mu1,
                                          double mu2, double* out);
/* writes at most cap roots, reports the total count */
R4NB_API r4nb_status r4nb_radial_equilibria(const r4nb_potential* V, double mu1, double mu2,
                                            double* roots, size_t cap, size_t* count);
R4NB_API r4nb_status r4nb_proportional_phi(double mu1, double mu2, double* phis, size_t cap,
                                           size_t* count);
R4NB_API r4nb_status r4nb_kepler_orbit_params(double h, double mu1, double mu2, double k,
                                              double* semi_latus, double* eccentricity,
                                              int* hyperbolic);
R4NB_API r4nb_status r4nb_lrl_vector(const double q[4], const double p[4], double k,
                                     double out[4]);
R4NB_API int r4nb_collision_possible(double mu1, double mu2, const r4nb_potential* V);

/* ----------------------------------------------------- relative equilibria */

typedef struct r4nb_re_result {
  double omega1;
  double omega2;
  int omega1_undetermined;
  int omega2_undetermined;
  double residual_norm;
  int central;
  double lambda;
} r4nb_re_result;

/* tol < 0 keeps the scaled default */
R4NB_API r4nb_status r4nb_solve_balanced(const r4nb_state* s, const r4nb_potential* V,
                                         int mass_weighted, double tol,
                                         r4nb_re_result* out);
R4NB_API r4nb_status r4nb_re_residual_norm(const r4nb_state* s, double omega1, double omega2,
                                           const r4nb_potential* V, int mass_weighted,
                                           double* out);
R4NB_API r4nb_status r4nb_is_central(const r4nb_state* s, const r4nb_potential* V,
                                     int mass_weighted, double tol, int* central,
                                     double* lambda);

/* ---------------------------------------------------------------- n-gons */

typedef struct r4nb_ngon_spec {
  int a1, b1, a2, b2;
  double r1, r2;
  double theta1, theta2;
} r4nb_ngon_spec;

R4NB_API void r4nb_ngon_spec_init(r4nb_ngon_spec* spec);
R4NB_API r4nb_status r4nb_ngon_order(const r4nb_ngon_spec* spec, int* n);

/* tags: 0 planar-principal, 1 planar-general, 2 type-i, 3 type-ii */
typedef struct r4nb_ngon_class {
  int tag;
  int n;
  int proj1;
  int proj2;
} r4nb_ngon_class;

R4NB_API const char* r4nb_ngon_tag_name(int tag);
R4NB_API r4nb_status r4nb_ngon_classify(const r4nb_ngon_spec* spec, r4nb_ngon_class* out);
R4NB_API r4nb_status r4nb_ngon_synchronised(const r4nb_ngon_spec* spec, int* out);
R4NB_API r4nb_status r4nb_ngon_pair_distance(const r4nb_ngon_spec* spec, int k, double* out);
/* vertices must hold 4n doubles with n from r4nb_ngon_order */
R4NB_API r4nb_status r4nb_ngon_vertices(const r4nb_ngon_spec* spec, double* vertices);
R4NB_API r4nb_status r4nb_ngon_solve_re_radii(const r4nb_ngon_spec* spec, double c1,
                                              double c2, const r4nb_potential* V,
                                              double* r1, double* r2);
/* full symmetric phase state with per-body angular momenta (c1, c2) */
R4NB_API r4nb_status r4nb_ngon_state(const r4nb_ngon_spec* spec, double p_r1, double p_r2,
                                     double c1, double c2, r4nb_state** out);

/* ----------------------------------------------------- reduced three-body */

typedef struct r4nb_reduced3b {
  double r1, r2, s1, s2;
  double phi1, phi2;
  double p_r1, p_r2, p_s1, p_s2, p_phi1, p_phi2;
  double mu1, mu2;
} r4nb_reduced3b;

R4NB_API r4nb_status r4nb_threebody_reduce(const r4nb_state* s, r4nb_reduced3b* out);
R4NB_API r4nb_status r4nb_threebody_expand(const r4nb_reduced3b* s, const double masses[3],
                                           double psi1, double psi2, r4nb_state** out);
R4NB_API r4nb_status r4nb_reduced3b_energy(const r4nb_reduced3b* s, const double masses[3],
                                           const r4nb_potential* V, double* out);
R4NB_API r4nb_status r4nb_reduced3b_eom(const r4nb_reduced3b* s, const double masses[3],
                                        const r4nb_potential* V, double out[12]);
R4NB_API r4nb_status r4nb_reduced3b_distances(const r4nb_reduced3b* s,
                                              const double masses[3], double* d12,
                                              double* d13, double* d23);

/* branches: 0 collinear, 1 isosceles-type, 2 neither */
R4NB_API const char* r4nb_re_branch_name(int branch);
R4NB_API r4nb_status r4nb_re_branch(const r4nb_reduced3b* s, const double masses[3],
                                    const r4nb_potential* V, double tol, int* branch);

/* equal unit masses */
R4NB_API r4nb_status r4nb_equilateral_equilibrium(double mu1, double mu2,
                                                  const r4nb_potential* V,
                                                  r4nb_reduced3b* out);
R4NB_API r4nb_status r4nb_find_equilibrium(const r4nb_reduced3b* seed,
                                           const double masses[3], const r4nb_potential* V,
                                           double tol, int max_iter, r4nb_reduced3b* out);

typedef struct r4nb_r3b_trajectory r4nb_r3b_trajectory;

R4NB_API r4nb_status r4nb_reduced3b_integrate(const r4nb_reduced3b* s,
                                              const double masses[3],
                                              const r4nb_potential* V,
                                              const r4nb_integrate_opts* opts,
                                              r4nb_r3b_trajectory** out);
R4NB_API void r4nb_r3b_trajectory_destroy(r4nb_r3b_trajectory* t);
R4NB_API size_t r4nb_r3b_trajectory_samples(const r4nb_r3b_trajectory* t);
R4NB_API int r4nb_r3b_trajectory_collided(const r4nb_r3b_trajectory* t);
R4NB_API double r4nb_r3b_trajectory_final_time(const r4nb_r3b_trajectory* t);
R4NB_API r4nb_status r4nb_r3b_trajectory_sample(const r4nb_r3b_trajectory* t, size_t i,
                                                double* time, r4nb_reduced3b* state,
                                                double* energy);

/* --------------------------------------------------------------- stability */

typedef struct r4nb_spectral_report {
  double eig_re[12];
  double eig_im[12];
  int dim_ker_m;
  int dim_ker_m2;
  double det_f;
  double max_real_part;
  int f_nonsingular;
  int nilpotent;
  int spectrally_unstable;
  int verdict; /* 0 unstable, 1 indeterminate */
} r4nb_spectral_report;

R4NB_API const char* r4nb_verdict_name(int verdict);
R4NB_API r4nb_status r4nb_a_coefficient(const r4nb_potential* V, double l, double gamma,
                                        double* out);
R4NB_API r4nb_status r4nb_stability_analysis(const r4nb_reduced3b* s,
                                             const double masses[3],
                                             const r4nb_potential* V,
                                             r4nb_spectral_report* out);
/* row-major 12x12 Hessian of the reduced energy at an equilibrium */
R4NB_API r4nb_status r4nb_hessian_full(const r4nb_reduced3b* s, const double masses[3],
                                       const r4nb_potential* V, double out[144]);

#ifdef __cplusplus
}
#endif

#endif /* R4NBODY_H */
