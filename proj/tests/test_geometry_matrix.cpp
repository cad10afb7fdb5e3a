#include <doctest.h>

#include <cmath>

#include "landau/matrix3.hpp"
#include "landau/rng.hpp"

using namespace landau;
using namespace landau::mat3;

namespace {

SymMat3 random_psd(SeqRng& rng, double lo, double hi) {
  // rotate a random positive diagonal by a quaternion-derived rotation
  double q0 = rng.normal(), q1 = rng.normal(), q2 = rng.normal(),
         q3 = rng.normal();
  double qn = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
  q0 /= qn; q1 /= qn; q2 /= qn; q3 /= qn;
  Mat3 r;
  r(0, 0) = 1 - 2 * (q2 * q2 + q3 * q3);
  r(0, 1) = 2 * (q1 * q2 - q0 * q3);
  r(0, 2) = 2 * (q1 * q3 + q0 * q2);
  r(1, 0) = 2 * (q1 * q2 + q0 * q3);
  r(1, 1) = 1 - 2 * (q1 * q1 + q3 * q3);
  r(1, 2) = 2 * (q2 * q3 - q0 * q1);
  r(2, 0) = 2 * (q1 * q3 - q0 * q2);
  r(2, 1) = 2 * (q2 * q3 + q0 * q1);
  r(2, 2) = 1 - 2 * (q1 * q1 + q2 * q2);
  double d[3] = {rng.uniform(lo, hi), rng.uniform(lo, hi),
                 rng.uniform(lo, hi)};
  SymMat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += r(i, k) * d[k] * r(j, k);
      if (i == 0 && j == 0) out.xx = s;
      if (i == 0 && j == 1) out.xy = s;
      if (i == 0 && j == 2) out.xz = s;
      if (i == 1 && j == 1) out.yy = s;
      if (i == 1 && j == 2) out.yz = s;
      if (i == 2 && j == 2) out.zz = s;
    }
  return out;
}

double frob_diff(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("vector and symmetric-matrix algebra") {
  Vec3 v{1.0, -2.0, 3.0};
  CHECK(v.norm2() == doctest::Approx(14.0));
  CHECK((v - v).norm2() == 0.0);
  SymMat3 m = SymMat3::outer(v);
  CHECK(m.trace() == doctest::Approx(14.0));
  CHECK(m.quad(v) == doctest::Approx(14.0 * 14.0));
  SymMat3 id = SymMat3::identity();
  CHECK(id.apply(v).x == v.x);
  CHECK((id * 2.5).trace() == doctest::Approx(7.5));
}

TEST_CASE("eigendecomposition reconstructs the matrix") {
  SeqRng rng(42);
  for (int t = 0; t < 200; ++t) {
    SymMat3 m = random_psd(rng, 0.01, 5.0);
    EigenSym3 e = eigensym(m);
    CHECK(e.eigenvalues[0] <= e.eigenvalues[1]);
    CHECK(e.eigenvalues[1] <= e.eigenvalues[2]);
    // V diag(L) V^T == m
    Mat3 rec{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k)
          s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
        rec(i, j) = s;
      }
    CHECK(frob_diff(rec, to_mat3(m)) <= 1e-12 * (1.0 + m.frobenius()));
  }
}

TEST_CASE("psd square root squares back") {
  SeqRng rng(7);
  for (int t = 0; t < 200; ++t) {
    SymMat3 m = random_psd(rng, 0.0, 4.0);
    SymMat3 r = sqrt_psd(m);
    CHECK(min_eigenvalue(r) >= -1e-12);
    Mat3 rm = to_mat3(r);
    Mat3 prod = rm * rm;
    CHECK(frob_diff(prod, to_mat3(m)) <= 1e-11 * (1.0 + m.frobenius()));
  }
}

TEST_CASE("square root of a rank-deficient matrix") {
  Vec3 v{2.0, 0.0, 0.0};
  SymMat3 m = SymMat3::outer(v);  // rank one, eigenvalue 4
  SymMat3 r = sqrt_psd(m);
  CHECK(r.xx == doctest::Approx(2.0));
  CHECK(r.yy == doctest::Approx(0.0));
  CHECK(r.zz == doctest::Approx(0.0));
}

TEST_CASE("indefinite input is rejected") {
  SymMat3 m = SymMat3::diag(1.0, 1.0, -0.5);
  CHECK_THROWS_AS(sqrt_psd(m), NotPsdError);
  try {
    sqrt_psd(m);
  } catch (const NotPsdError& e) {
    CHECK(e.min_eigenvalue == doctest::Approx(-0.5));
  }
}

TEST_CASE("regularized inverse square root") {
  SymMat3 m = SymMat3::diag(4.0, 1.0, 0.0);
  SymMat3 inv = inv_sqrt_psd(m, 1e-4);
  CHECK(inv.xx == doctest::Approx(1.0 / std::sqrt(4.0001)));
  CHECK(inv.zz == doctest::Approx(100.0));  // (0 + 1e-4)^{-1/2}
}

TEST_CASE("coupling rotation: orthogonal and cost-optimal") {
  SeqRng rng(11);
  for (int t = 0; t < 500; ++t) {
    SymMat3 s1 = random_psd(rng, 0.1, 3.0), s2 = random_psd(rng, 0.1, 3.0);
    Mat3 u = coupling_rotation(s1, s2, 0.0);
    Mat3 utu = u.transpose() * u;
    CHECK(frob_diff(utu, Mat3::identity()) <= 1e-8);
    // || S1^{1/2} - S2^{1/2} U ||_F^2 equals the Gaussian W2^2 closed form
    Mat3 r1 = to_mat3(sqrt_psd(s1));
    Mat3 diff = to_mat3(sqrt_psd(s2)) * u;
    double cost = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        cost += (r1(i, j) - diff(i, j)) * (r1(i, j) - diff(i, j));
    double w2 = gaussian_w2sq(s1, s2);
    CHECK(cost == doctest::Approx(w2).epsilon(1e-8));
  }
}

TEST_CASE("coupling rotation: identical inputs give the identity exactly") {
  SeqRng rng(13);
  SymMat3 s = random_psd(rng, 0.2, 2.0);
  Mat3 u = coupling_rotation(s, s, 0.0);
  CHECK(frob_diff(u, Mat3::identity()) == 0.0);
}

TEST_CASE("coupling rotation: singular input falls back to the identity") {
  SymMat3 degenerate = SymMat3::diag(1.0, 1.0, 0.0);
  SymMat3 full = SymMat3::diag(1.0, 1.0, 1.0);
  Mat3 u = coupling_rotation(degenerate, full, 0.0);
  CHECK(frob_diff(u, Mat3::identity()) == 0.0);
}

TEST_CASE("gaussian squared distance: closed forms") {
  SymMat3 a = SymMat3::diag(1.0, 4.0, 9.0);
  CHECK(gaussian_w2sq(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  SymMat3 b = SymMat3::diag(4.0, 9.0, 16.0);
  // diagonal case: sum of squared sqrt-eigenvalue gaps
  double expect = (2.0 - 1.0) * (2.0 - 1.0) + (3.0 - 2.0) * (3.0 - 2.0) +
                  (4.0 - 3.0) * (4.0 - 3.0);
  CHECK(gaussian_w2sq(a, b) == doctest::Approx(expect).epsilon(1e-12));
  // isotropic: 3 (s1 - s2)^2
  SymMat3 i1 = SymMat3::identity() * 2.25, i2 = SymMat3::identity() * 0.25;
  CHECK(gaussian_w2sq(i1, i2) == doctest::Approx(3.0).epsilon(1e-12));
}
