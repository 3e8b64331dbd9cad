#include "r4nb/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "r4nb/error.hpp"

namespace r4nb {
namespace {

using LArray = std::array<long double, 12>;

// Kinetic and potential parts of the reduced energy, split so each closed
// form can be checked against a difference quotient of the term it actually
// differentiates. The sum reproduces reduced_energy_3b_t.
long double kinetic_part(const LArray& z, long double mu1, long double mu2,
                         const ThreeBodyMasses& m) {
  const long double r1 = z[0], r2 = z[1], s1 = z[2], s2 = z[3];
  const long double p_r1 = z[6], p_r2 = z[7], p_s1 = z[8], p_s2 = z[9];
  const long double p_phi1 = z[10], p_phi2 = z[11];
  const long double q1 = mu1 - p_phi1, q2 = mu2 - p_phi2;
  const long double kin_u = (p_r1 * p_r1 + p_phi1 * p_phi1 / (r1 * r1) + p_r2 * p_r2 +
                             p_phi2 * p_phi2 / (r2 * r2)) /
                            (2.0L * static_cast<long double>(m.M1()));
  const long double kin_v =
      (p_s1 * p_s1 + q1 * q1 / (s1 * s1) + p_s2 * p_s2 + q2 * q2 / (s2 * s2)) /
      (2.0L * static_cast<long double>(m.M2()));
  return kin_u + kin_v;
}

long double potential_part(const LArray& z, const ThreeBodyMasses& m, const Potential& V) {
  const long double r1 = z[0], r2 = z[1], s1 = z[2], s2 = z[3];
  const long double c1 = std::cos(z[4]), c2 = std::cos(z[5]);
  const long double a1 = static_cast<long double>(m.alpha1());
  const long double a2 = static_cast<long double>(m.alpha2());
  const long double d12 = std::sqrt(r1 * r1 + r2 * r2);
  const long double d13 = std::sqrt(s1 * s1 + a1 * a1 * r1 * r1 - 2.0L * a1 * r1 * s1 * c1 +
                                    s2 * s2 + a1 * a1 * r2 * r2 - 2.0L * a1 * r2 * s2 * c2);
  const long double d23 = std::sqrt(s1 * s1 + a2 * a2 * r1 * r1 + 2.0L * a2 * r1 * s1 * c1 +
                                    s2 * s2 + a2 * a2 * r2 * r2 + 2.0L * a2 * r2 * s2 * c2);
  return V.value_t(d12) + V.value_t(d13) + V.value_t(d23);
}

// Richardson-refined central second differences: evaluate the plain
// O(h^2) quotient at h and h/2 and combine to cancel the leading error term.
Eigen::MatrixXd fd_hessian(const std::function<long double(const LArray&)>& f,
                           const LArray& z0) {
  LArray h{};
  for (int i = 0; i < 12; ++i)
    h[i] = 1e-5L * std::max(1.0L, std::fabs(z0[i]));

  auto shifted = [&](int i, long double di, int j, long double dj) {
    LArray z = z0;
    z[i] += di;
    if (j >= 0) z[j] += dj;
    return f(z);
  };

  const long double f0 = f(z0);
  Eigen::MatrixXd out(12, 12);
  for (int i = 0; i < 12; ++i) {
    for (int j = i; j < 12; ++j) {
      auto quot = [&](long double scale) -> long double {
        const long double hi = h[i] * scale, hj = h[j] * scale;
        if (i == j) {
          return (shifted(i, hi, -1, 0.0L) - 2.0L * f0 + shifted(i, -hi, -1, 0.0L)) /
                 (hi * hi);
        }
        return (shifted(i, hi, j, hj) - shifted(i, hi, j, -hj) - shifted(i, -hi, j, hj) +
                shifted(i, -hi, j, -hj)) /
               (4.0L * hi * hj);
      };
      const long double coarse = quot(1.0L);
      const long double fine = quot(0.5L);
      const double val = static_cast<double>((4.0L * fine - coarse) / 3.0L);
      out(i, j) = val;
      out(j, i) = val;
    }
  }
  return out;
}

// Rank deficiency of a square matrix from its singular values; everything
// below 1e-8 of the largest one counts as zero.
int kernel_dimension(const Eigen::MatrixXd& M, Eigen::MatrixXd* basis = nullptr) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  if (smax <= 0.0) {
    if (basis) *basis = Eigen::MatrixXd::Identity(M.rows(), M.cols());
    return static_cast<int>(M.cols());
  }
  const double tol = 1e-8 * smax;
  int dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < tol) ++dim;
  if (basis) *basis = svd.matrixV().rightCols(dim);
  return dim;
}

double field_norm(const std::array<double, 12>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::fabs(x));
  return out;
}

}  // namespace

HessianBlocks hessian(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                      const Potential& V) {
  validate_reduced_state(s);
  if (field_norm(eom_3b(s, m, V)) >= 1e-8)
    fail(ErrorCode::NotAnEquilibrium, "hessian requires an equilibrium of the reduced field");

  const std::array<double, 12> zd = reduced_to_array(s);
  LArray z{};
  for (int i = 0; i < 12; ++i) z[i] = zd[static_cast<size_t>(i)];
  const long double mu1 = s.mu1, mu2 = s.mu2;

  HessianBlocks out;
  out.fd_kinetic = fd_hessian([&](const LArray& zz) { return kinetic_part(zz, mu1, mu2, m); }, z);
  out.fd_potential = fd_hessian([&](const LArray& zz) { return potential_part(zz, m, V); }, z);
  out.full = out.fd_kinetic + out.fd_potential;
  out.A = out.full.block(0, 0, 6, 6);
  out.B = out.full.block(0, 6, 6, 6);
  out.D = out.full.block(6, 6, 6, 6);

  const double M1 = m.M1(), M2 = m.M2();
  const double r[2] = {s.r1, s.r2}, sv[2] = {s.s1, s.s2};
  const double pf[2] = {s.p_phi1, s.p_phi2};
  const double q[2] = {s.mu1 - s.p_phi1, s.mu2 - s.p_phi2};
  out.a1.setZero();
  out.a2.setZero();
  out.b1.setZero();
  out.b2.setZero();
  out.d3.setZero();
  for (int j = 0; j < 2; ++j) {
    const double r2 = r[j] * r[j], s2 = sv[j] * sv[j];
    out.a1(j, j) = 3.0 * pf[j] * pf[j] / (M1 * r2 * r2);
    out.a2(j, j) = 3.0 * q[j] * q[j] / (M2 * s2 * s2);
    out.b1(j, j) = -2.0 * pf[j] / (M1 * r2 * r[j]);
    out.b2(j, j) = 2.0 * q[j] / (M2 * s2 * sv[j]);
    out.d3(j, j) = 1.0 / (M1 * r2) + 1.0 / (M2 * s2);
  }
  out.d1 = Eigen::Matrix2d::Identity() / M1;
  out.d2 = Eigen::Matrix2d::Identity() / M2;

  // Geometry of the equilateral family: both planes scale by gamma and the
  // pairwise distance equals r0 sqrt(3 (1 + gamma^2)).
  out.gamma = s.r2 / s.r1;
  out.r0 = s.r1 / std::sqrt(3.0);
  const double g2 = out.gamma * out.gamma;
  const double l = std::hypot(s.r1, s.r2);
  out.a_coeff = a_coefficient(V, l, out.gamma);
  out.a_block << 1.0, g2, g2, g2 * g2;
  out.a_block *= out.a_coeff * out.r0;
  return out;
}

double a_coefficient(const Potential& V, double l, double gamma) {
  if (!(l > 0.0) || !std::isfinite(l))
    fail(ErrorCode::DomainError, "a_coefficient requires a positive separation");
  if (!std::isfinite(gamma))
    fail(ErrorCode::DomainError, "a_coefficient requires a finite momentum ratio");
  const PotentialValue pv = V.eval(l);
  const double g2 = 1.0 + gamma * gamma;
  return 3.0 * std::sqrt(3.0) / (8.0 * g2 * std::sqrt(g2)) * (l * pv.d2 - pv.d1);
}

AMatrixSpectrum a_matrix_spectrum(double a, double gamma) {
  if (!std::isfinite(a) || !std::isfinite(gamma))
    fail(ErrorCode::DomainError, "a_matrix_spectrum requires finite arguments");
  const double g2 = gamma * gamma;
  AMatrixSpectrum out;
  out.lambda1 = 0.0;
  out.lambda2 = a * (1.0 + g2 * g2);
  out.u1 = Eigen::Vector2d(-g2, 1.0).normalized();
  out.u2 = Eigen::Vector2d(1.0, g2).normalized();
  return out;
}

std::pair<Eigen::Matrix<double, 6, 6>, double> f_matrix(const HessianBlocks& blocks) {
  if (blocks.full.rows() != 12 || blocks.full.cols() != 12)
    fail(ErrorCode::InvalidArgument, "f_matrix expects assembled 12x12 blocks");
  const int idx[6] = {0, 1, 2, 3, 10, 11};
  Eigen::Matrix<double, 6, 6> F;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) F(i, j) = blocks.full(idx[i], idx[j]);
  return {F, F.determinant()};
}

Eigen::MatrixXd linearize(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                          const Potential& V) {
  const HessianBlocks blocks = hessian(s, m, V);
  Eigen::MatrixXd M(12, 12);
  M.topRows(6) = blocks.full.bottomRows(6);
  M.bottomRows(6) = -blocks.full.topRows(6);
  return M;
}

const char* stability_verdict_name(StabilityVerdict v) {
  return v == StabilityVerdict::Unstable ? "unstable" : "indeterminate";
}

SpectralReport spectral_report(const Eigen::MatrixXd& M, double det_f, double f_sigma_min,
                               double f_sigma_max) {
  if (M.rows() != 12 || M.cols() != 12)
    fail(ErrorCode::InvalidArgument, "spectral_report expects a 12x12 linearization");

  SpectralReport out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::NoConvergence, "eigenvalue iteration failed");
  std::vector<std::complex<double>> ev(12);
  for (int i = 0; i < 12; ++i) ev[static_cast<size_t>(i)] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](const auto& p, const auto& q) {
    if (p.real() != q.real()) return p.real() > q.real();
    return p.imag() > q.imag();
  });
  std::copy(ev.begin(), ev.end(), out.eigenvalues.begin());

  out.dim_ker_m = kernel_dimension(M);
  out.dim_ker_m2 = kernel_dimension(M * M);
  out.nilpotent = out.dim_ker_m2 > out.dim_ker_m;
  out.det_f = det_f;
  if (f_sigma_max > 0.0)
    out.f_nonsingular = f_sigma_min > 1e-8 * f_sigma_max;
  else
    out.f_nonsingular = std::isfinite(det_f) && det_f != 0.0;
  double radius = 0.0;
  for (const auto& e : out.eigenvalues) {
    out.max_real_part = std::max(out.max_real_part, std::fabs(e.real()));
    radius = std::max(radius, std::abs(e));
  }
  out.spectrally_unstable = out.max_real_part > 1e-6 * radius;
  out.verdict = (out.spectrally_unstable || (out.nilpotent && out.f_nonsingular))
                    ? StabilityVerdict::Unstable
                    : StabilityVerdict::Indeterminate;
  return out;
}

SpectralReport stability_analysis(const ReducedThreeBodyState& s, const ThreeBodyMasses& m,
                                  const Potential& V) {
  const HessianBlocks blocks = hessian(s, m, V);
  const auto [F, det_f] = f_matrix(blocks);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(F);
  const auto& sv = svd.singularValues();
  Eigen::MatrixXd M(12, 12);
  M.topRows(6) = blocks.full.bottomRows(6);
  M.bottomRows(6) = -blocks.full.topRows(6);
  return spectral_report(M, det_f, sv(sv.size() - 1), sv(0));
}

Eigen::VectorXd nilpotent_direction(const Eigen::MatrixXd& M) {
  Eigen::MatrixXd ker1, ker2;
  const int d1 = kernel_dimension(M, &ker1);
  const int d2 = kernel_dimension(M * M, &ker2);
  if (d2 <= d1)
    fail(ErrorCode::DomainError, "linearization has no nilpotent direction");
  // Strip the ker(M) component from each generalized kernel vector and keep
  // the direction that survives best.
  Eigen::VectorXd best;
  double best_norm = -1.0;
  for (int c = 0; c < ker2.cols(); ++c) {
    Eigen::VectorXd v = ker2.col(c);
    if (d1 > 0) v -= ker1 * (ker1.transpose() * v);
    const double n = v.norm();
    if (n > best_norm) {
      best_norm = n;
      best = v;
    }
  }
  if (best_norm <= 1e-10)
    fail(ErrorCode::NoConvergence, "failed to separate the nilpotent direction");
  return best / best_norm;
}

}  // namespace r4nb
