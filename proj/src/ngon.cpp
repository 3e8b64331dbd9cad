#include "r4nb/ngon.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "r4nb/error.hpp"
#include "r4nb/geom4.hpp"

namespace r4nb {

namespace {

constexpr double kPi = std::numbers::pi;

bool active1(const NGonSpec& s) { return s.r1 > 0.0; }
bool active2(const NGonSpec& s) { return s.r2 > 0.0; }

// |sin(k a pi / b)| for each separation k = 1 .. n-1, per block; an
// inactive block contributes zeros
struct SinTable {
  int n = 0;
  std::vector<double> s1, s2;
};

SinTable sin_table(const NGonSpec& spec) {
  SinTable t;
  t.n = ngon_order(spec);
  t.s1.assign(t.n, 0.0);
  t.s2.assign(t.n, 0.0);
  for (int k = 1; k < t.n; ++k) {
    if (active1(spec)) t.s1[k] = std::abs(std::sin(k * spec.a1 * kPi / spec.b1));
    if (active2(spec)) t.s2[k] = std::abs(std::sin(k * spec.a2 * kPi / spec.b2));
  }
  return t;
}

bool congruent_pm(int a1, int a2, int n) {
  return (a1 - a2) % n == 0 || (a1 + a2) % n == 0;
}

bool sync_exhaustive(int a1, int a2, int n) {
  // try every regular relabelling i -> t i; a projection becomes convex
  // when its step a t is +-1 mod n
  for (int t = 1; t < n; ++t) {
    if (std::gcd(t, n) != 1) continue;
    int s1 = (a1 * t) % n, s2 = (a2 * t) % n;
    if ((s1 == 1 || s1 == n - 1) && (s2 == 1 || s2 == n - 1)) return true;
  }
  return false;
}

}  // namespace

void validate_ngon_spec(const NGonSpec& spec) {
  if (!(spec.r1 >= 0.0) || !(spec.r2 >= 0.0) || !std::isfinite(spec.r1) ||
      !std::isfinite(spec.r2))
    fail(ErrorCode::InvalidArgument, "radii must be finite and nonnegative");
  if (spec.r1 == 0.0 && spec.r2 == 0.0)
    fail(ErrorCode::InvalidArgument, "at least one radius must be positive");
  if (!std::isfinite(spec.theta1) || !std::isfinite(spec.theta2))
    fail(ErrorCode::InvalidArgument, "phases must be finite");
  if (active1(spec) && (spec.a1 < 1 || spec.b1 < 2))
    fail(ErrorCode::InvalidArgument, "block 1 needs a >= 1 and b >= 2");
  if (active2(spec) && (spec.a2 < 1 || spec.b2 < 2))
    fail(ErrorCode::InvalidArgument, "block 2 needs a >= 1 and b >= 2");
}

int ngon_order(const NGonSpec& spec) {
  validate_ngon_spec(spec);
  if (!active2(spec)) return spec.b1;
  if (!active1(spec)) return spec.b2;
  return std::lcm(spec.b1, spec.b2);
}

const char* ngon_tag_name(NGonTag tag) {
  switch (tag) {
    case NGonTag::PlanarPrincipal: return "PlanarPrincipal";
    case NGonTag::PlanarGeneral: return "PlanarGeneral";
    case NGonTag::TypeI: return "TypeI";
    case NGonTag::TypeII: return "TypeII";
  }
  return "?";
}

Configuration build_ngon(const NGonSpec& spec) {
  int n = ngon_order(spec);
  Configuration c;
  for (int i = 0; i < n; ++i) {
    DoublePolar dp;
    dp.r1 = spec.r1;
    dp.theta1 = spec.theta1 + 2.0 * kPi * spec.a1 * i / spec.b1;
    dp.r2 = spec.r2;
    dp.theta2 = spec.theta2 + 2.0 * kPi * spec.a2 * i / spec.b2;
    c.positions.push_back(from_double_polar(dp));
    c.masses.push_back(1.0);
  }
  double scale = std::max(spec.r1, spec.r2);
  for (int i = 0; i + 1 < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((c.positions[i] - c.positions[j]).norm() < 1e-12 * scale)
        fail(ErrorCode::DegenerateSpec,
             "vertices " + std::to_string(i) + " and " + std::to_string(j) +
                 " coincide; block data is not coprime");
  return c;
}

NGonClass classify_ngon(const NGonSpec& spec) {
  NGonClass out;
  out.n = ngon_order(spec);
  bool a1 = active1(spec), a2 = active2(spec);
  out.proj1 = a1 ? spec.b1 : 1;
  out.proj2 = a2 ? spec.b2 : 1;
  if (!a1 || !a2) {
    out.tag = NGonTag::PlanarPrincipal;
  } else if (spec.b1 == out.n && spec.b2 == out.n) {
    out.tag = congruent_pm(spec.a1, spec.a2, out.n) ? NGonTag::PlanarGeneral
                                                    : NGonTag::TypeI;
  } else {
    out.tag = NGonTag::TypeII;
  }
  return out;
}

bool is_synchronised(const NGonSpec& spec) {
  int n = ngon_order(spec);
  if (!active1(spec) || !active2(spec) || spec.b1 != n || spec.b2 != n)
    fail(ErrorCode::NotApplicable,
         "synchronisation needs both projections to be n-gons");
  if (n <= 12) return sync_exhaustive(spec.a1, spec.a2, n);
  return congruent_pm(spec.a1, spec.a2, n);
}

double pair_distance(const NGonSpec& spec, int k) {
  int n = ngon_order(spec);
  if (k < 1 || k > n - 1)
    fail(ErrorCode::InvalidArgument, "separation k must lie in 1..n-1");
  SinTable t = sin_table(spec);
  double q1 = spec.r1 * t.s1[k], q2 = spec.r2 * t.s2[k];
  return 2.0 * std::hypot(q1, q2);
}

double reduced_ngon_energy(double r1, double p_r1, double r2, double p_r2,
                           double c1, double c2, const NGonSpec& spec,
                           const Potential& V) {
  SinTable t = sin_table(spec);
  if (!active1(spec) && (r1 != 0.0 || c1 != 0.0))
    fail(ErrorCode::DomainError, "block 1 is inactive in the spec");
  if (!active2(spec) && (r2 != 0.0 || c2 != 0.0))
    fail(ErrorCode::DomainError, "block 2 is inactive in the spec");
  if (c1 != 0.0 && !(r1 > 0.0))
    fail(ErrorCode::DomainError, "r1 must be positive when c1 is nonzero");
  if (c2 != 0.0 && !(r2 > 0.0))
    fail(ErrorCode::DomainError, "r2 must be positive when c2 is nonzero");

  double kin = p_r1 * p_r1 + p_r2 * p_r2;
  if (c1 != 0.0) kin += c1 * c1 / (r1 * r1);
  if (c2 != 0.0) kin += c2 * c2 / (r2 * r2);
  double pot = 0.0;
  for (int k = 1; k < t.n; ++k) {
    double s = std::hypot(r1 * t.s1[k], r2 * t.s2[k]);
    pot += V.eval(2.0 * s).value;
  }
  return 0.5 * t.n * (kin + pot);
}

namespace {

// RHS of the RE radii equation for block j, with its r-derivatives
struct ReSystem {
  SinTable t;
  const Potential* V;

  // g_j(r) = sum_k [V'(2 s_k)/s_k] sin^2(k a_j pi / b_j)
  void eval(double r1, double r2, double g[2], double jac[2][2]) const {
    g[0] = g[1] = 0.0;
    jac[0][0] = jac[0][1] = jac[1][0] = jac[1][1] = 0.0;
    for (int k = 1; k < t.n; ++k) {
      double w1 = t.s1[k] * t.s1[k], w2 = t.s2[k] * t.s2[k];
      double s = std::hypot(r1 * t.s1[k], r2 * t.s2[k]);
      auto pv = V->eval(2.0 * s);
      double phi = pv.d1 / s;
      // d/ds [V'(2s)/s]
      double dphi = 2.0 * pv.d2 / s - pv.d1 / (s * s);
      double ds1 = r1 * w1 / s, ds2 = r2 * w2 / s;
      g[0] += phi * w1;
      g[1] += phi * w2;
      jac[0][0] += dphi * ds1 * w1;
      jac[0][1] += dphi * ds2 * w1;
      jac[1][0] += dphi * ds1 * w2;
      jac[1][1] += dphi * ds2 * w2;
    }
  }
};

// seed from the homogeneous closed form r^(2-alpha) =
// c^2 2^(alpha+1) / (alpha k sum sigma^-alpha); falls back to 1
double seed_radius(double c, const std::vector<double>& sig,
                   const Potential& V) {
  double alpha;
  switch (V.kind()) {
    case PotentialKind::Newtonian: alpha = 1.0; break;
    case PotentialKind::Jacobi: alpha = 2.0; break;
    case PotentialKind::Homogeneous: alpha = V.alpha(); break;
    case PotentialKind::Harmonic: {
      double sum = 0.0;
      for (double s : sig) sum += s * s;
      return std::pow(c * c / (4.0 * V.k() * sum), 0.25);
    }
    default: return 1.0;
  }
  if (std::abs(alpha - 2.0) < 1e-9) return 1.0;
  double sum = 0.0;
  for (double s : sig)
    if (s > 0.0) sum += std::pow(s, -alpha);
  double val = c * c * std::pow(2.0, alpha + 1.0) / (alpha * V.k() * sum);
  if (!(val > 0.0) || !std::isfinite(val)) return 1.0;
  return std::pow(val, 1.0 / (2.0 - alpha));
}

}  // namespace

std::pair<double, double> solve_re_radii(const NGonSpec& spec, double c1,
                                         double c2, const Potential& V) {
  if (!V.is_attractive())
    fail(ErrorCode::DomainError, "RE radii need an attractive potential");
  bool a1 = active1(spec), a2 = active2(spec);
  if (a1 != (c1 != 0.0) || a2 != (c2 != 0.0))
    fail(ErrorCode::InactiveBlock,
         "angular momentum must be nonzero exactly on active blocks");

  SinTable t = sin_table(spec);
  ReSystem sys{t, &V};

  const int max_iter = 200;
  const double step_tol = 1e-14;

  // the equations are solved in the normalised form r^4 g(r) = c^2, which
  // has no spurious root at infinity
  auto newton1 = [&](double r0, double ratio2) {
    // single unknown r1; the second radius is pinned to ratio2 * r1
    double r = r0;
    for (int it = 0; it < max_iter; ++it) {
      double g[2], jac[2][2];
      sys.eval(r, ratio2 * r, g, jac);
      double r4 = std::pow(r, 4);
      double f = r4 * g[0] - c1 * c1;
      if (std::abs(f) <= 1e-15 * (std::abs(r4 * g[0]) + c1 * c1)) return r;
      double df = 4.0 * r4 / r * g[0] + r4 * (jac[0][0] + jac[0][1] * ratio2);
      if (df == 0.0) break;
      double step = -f / df;
      if (!std::isfinite(step))
        fail(ErrorCode::NoConvergence, "radii iteration left the domain");
      while (r + step <= 0.0) step *= 0.5;
      r += step;
      if (std::abs(step) < step_tol * std::max(1.0, r)) return r;
    }
    fail(ErrorCode::NoConvergence, "radii iteration did not settle");
  };

  if (a1 && !a2) return {newton1(seed_radius(c1, t.s1, V), 0.0), 0.0};
  if (a2 && !a1) {
    // mirror the blocks and reuse the single-block path
    NGonSpec sw = spec;
    std::swap(sw.a1, sw.a2);
    std::swap(sw.b1, sw.b2);
    std::swap(sw.r1, sw.r2);
    std::swap(sw.theta1, sw.theta2);
    auto [rr, zero] = solve_re_radii(sw, c2, c1, V);
    return {zero, rr};
  }

  NGonClass cls = classify_ngon(spec);
  if (cls.tag == NGonTag::PlanarGeneral) {
    // similar projections force r2 = gamma r1 with gamma = sqrt|c2/c1|
    double gamma = std::sqrt(std::abs(c2 / c1));
    double r1 = newton1(seed_radius(c1, t.s1, V) / std::sqrt(1.0 + gamma * gamma),
                        gamma);
    double r2 = gamma * r1;
    double g[2], jac[2][2];
    sys.eval(r1, r2, g, jac);
    double res2 = c2 * c2 / std::pow(r2, 4) - g[1];
    if (std::abs(res2) > 1e-9 * std::max(1.0, std::abs(g[1])))
      fail(ErrorCode::NoConvergence, "similar-block equation untied");
    return {r1, r2};
  }

  double r1 = seed_radius(c1, t.s1, V), r2 = seed_radius(c2, t.s2, V);
  auto defect = [&](double a, double b) {
    double g[2], jac[2][2];
    sys.eval(a, b, g, jac);
    return std::hypot(std::pow(a, 4) * g[0] - c1 * c1,
                      std::pow(b, 4) * g[1] - c2 * c2);
  };
  for (int it = 0; it < max_iter; ++it) {
    double g[2], jac[2][2];
    sys.eval(r1, r2, g, jac);
    double q1 = std::pow(r1, 4), q2 = std::pow(r2, 4);
    double f1 = q1 * g[0] - c1 * c1;
    double f2 = q2 * g[1] - c2 * c2;
    double fn = std::hypot(f1, f2);
    double fscale = std::abs(q1 * g[0]) + c1 * c1 + std::abs(q2 * g[1]) +
                    c2 * c2;
    if (fn <= 1e-15 * fscale) return {r1, r2};
    double j11 = 4.0 * q1 / r1 * g[0] + q1 * jac[0][0];
    double j12 = q1 * jac[0][1];
    double j21 = q2 * jac[1][0];
    double j22 = 4.0 * q2 / r2 * g[1] + q2 * jac[1][1];
    double det = j11 * j22 - j12 * j21;
    if (det == 0.0) fail(ErrorCode::NoConvergence, "singular radii jacobian");
    double d1 = -(j22 * f1 - j12 * f2) / det;
    double d2 = -(-j21 * f1 + j11 * f2) / det;
    if (!std::isfinite(d1) || !std::isfinite(d2))
      fail(ErrorCode::NoConvergence, "radii iteration left the domain");
    while (r1 + d1 <= 0.0 || r2 + d2 <= 0.0) {
      d1 *= 0.5;
      d2 *= 0.5;
    }
    // back off until the defect actually shrinks
    for (int cut = 0; cut < 60 && defect(r1 + d1, r2 + d2) >= fn; ++cut) {
      d1 *= 0.5;
      d2 *= 0.5;
    }
    r1 += d1;
    r2 += d2;
    if (std::hypot(d1, d2) < step_tol * std::max({1.0, r1, r2}))
      return {r1, r2};
  }
  fail(ErrorCode::NoConvergence, "radii iteration did not settle");
}

PhaseState ngon_full_state(const NGonSpec& spec, double p_r1, double p_r2,
                           double c1, double c2) {
  int n = ngon_order(spec);
  PhaseState st;
  for (int i = 0; i < n; ++i) {
    DoublePolar dp;
    dp.r1 = spec.r1;
    dp.theta1 = spec.theta1 + 2.0 * kPi * spec.a1 * i / spec.b1;
    dp.r2 = spec.r2;
    dp.theta2 = spec.theta2 + 2.0 * kPi * spec.a2 * i / spec.b2;
    dp.p_r1 = p_r1;
    dp.p_theta1 = c1;
    dp.p_r2 = p_r2;
    dp.p_theta2 = c2;
    dp.has_momenta = true;
    Vec4 q, p;
    from_double_polar(dp, q, p);
    st.config.positions.push_back(q);
    st.config.masses.push_back(1.0);
    st.momenta.push_back(p);
  }
  return st;
}

}  // namespace r4nb
