#include "landau/matrix3.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace landau::mat3 {

namespace {

Eigen::Matrix3d to_eigen(const SymMat3& m) {
  Eigen::Matrix3d e;
  e << m.xx, m.xy, m.xz, m.xy, m.yy, m.yz, m.xz, m.yz, m.zz;
  return e;
}

SymMat3 sym_from_eigen(const Eigen::Matrix3d& e) {
  // symmetrize to kill rounding asymmetry
  return {e(0, 0), e(1, 1), e(2, 2), 0.5 * (e(0, 1) + e(1, 0)),
          0.5 * (e(0, 2) + e(2, 0)), 0.5 * (e(1, 2) + e(2, 1))};
}

Mat3 mat_from_eigen(const Eigen::Matrix3d& e) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = e(i, j);
  return r;
}

Eigen::Matrix3d sqrt_psd_eigen(const Eigen::Matrix3d& m, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
  Eigen::Vector3d lam = es.eigenvalues();
  if (lam(0) < -psd_tol) throw NotPsdError(lam(0));
  Eigen::Vector3d s;
  for (int i = 0; i < 3; ++i) s(i) = std::sqrt(std::max(lam(i), 0.0));
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

constexpr double kPsdTol = 1e-10;

}  // namespace

EigenSym3 eigensym(const SymMat3& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(to_eigen(m));
  EigenSym3 out;
  for (int i = 0; i < 3; ++i) out.eigenvalues[i] = es.eigenvalues()(i);
  out.eigenvectors = mat_from_eigen(es.eigenvectors());
  return out;
}

double min_eigenvalue(const SymMat3& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(to_eigen(m));
  return es.eigenvalues()(0);
}

SymMat3 sqrt_psd(const SymMat3& m) {
  if (!m.finite()) throw std::invalid_argument("sqrt_psd: non-finite input");
  return sym_from_eigen(sqrt_psd_eigen(to_eigen(m), kPsdTol));
}

SymMat3 inv_sqrt_psd(const SymMat3& m, double reg) {
  if (!m.finite())
    throw std::invalid_argument("inv_sqrt_psd: non-finite input");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(to_eigen(m));
  Eigen::Vector3d lam = es.eigenvalues();
  Eigen::Vector3d s;
  for (int i = 0; i < 3; ++i)
    s(i) = 1.0 / std::sqrt(std::max(lam(i), 0.0) + reg);
  return sym_from_eigen(es.eigenvectors() * s.asDiagonal() *
                        es.eigenvectors().transpose());
}

Mat3 coupling_rotation(const SymMat3& s1, const SymMat3& s2, double reg,
                       double reg_threshold) {
  // Exact-equality fast path keeps coupled steppers bitwise aligned when
  // both sides see the same covariance.
  if (s1.xx == s2.xx && s1.yy == s2.yy && s1.zz == s2.zz && s1.xy == s2.xy &&
      s1.xz == s2.xz && s1.yz == s2.yz)
    return Mat3::identity();

  Eigen::Matrix3d a = to_eigen(s1);
  Eigen::Matrix3d b = to_eigen(s2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ea(a), eb(b);
  if (ea.eigenvalues()(0) < reg_threshold ||
      eb.eigenvalues()(0) < reg_threshold)
    return Mat3::identity();

  auto inv_sqrt = [&](const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>& es)
      -> Eigen::Matrix3d {
    Eigen::Vector3d s;
    for (int i = 0; i < 3; ++i)
      s(i) = 1.0 / std::sqrt(std::max(es.eigenvalues()(i), 0.0) + reg);
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
  };
  auto sqrt_m = [&](const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>& es)
      -> Eigen::Matrix3d {
    Eigen::Vector3d s;
    for (int i = 0; i < 3; ++i)
      s(i) = std::sqrt(std::max(es.eigenvalues()(i), 0.0));
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
  };

  Eigen::Matrix3d a_half = sqrt_m(ea);
  Eigen::Matrix3d mid = a_half * b * a_half;
  Eigen::Matrix3d mid_half = sqrt_psd_eigen(0.5 * (mid + mid.transpose()), 1.0);
  Eigen::Matrix3d u = inv_sqrt(eb) * inv_sqrt(ea) * mid_half;
  return mat_from_eigen(u);
}

double gaussian_w2sq(const SymMat3& s1, const SymMat3& s2) {
  Eigen::Matrix3d a = to_eigen(s1);
  Eigen::Matrix3d b = to_eigen(s2);
  Eigen::Matrix3d a_half = sqrt_psd_eigen(a, kPsdTol);
  Eigen::Matrix3d mid = a_half * b * a_half;
  Eigen::Matrix3d mid_half = sqrt_psd_eigen(0.5 * (mid + mid.transpose()), 1.0);
  return a.trace() + b.trace() - 2.0 * mid_half.trace();
}

}  // namespace landau::mat3
