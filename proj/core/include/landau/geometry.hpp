#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace landau {

/// Velocity vector in R^3.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Symmetric 3x3 matrix stored as its six independent entries.
struct SymMat3 {
  double xx = 0.0, yy = 0.0, zz = 0.0;
  double xy = 0.0, xz = 0.0, yz = 0.0;

  static SymMat3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static SymMat3 diag(double a, double b, double c) {
    return {a, b, c, 0.0, 0.0, 0.0};
  }
  /// v v^T
  static SymMat3 outer(const Vec3& v) {
    return {v.x * v.x, v.y * v.y, v.z * v.z, v.x * v.y, v.x * v.z, v.y * v.z};
  }

  double trace() const { return xx + yy + zz; }
  double frobenius2() const {
    return xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz);
  }
  double frobenius() const { return std::sqrt(frobenius2()); }
  bool finite() const {
    return std::isfinite(xx) && std::isfinite(yy) && std::isfinite(zz) &&
           std::isfinite(xy) && std::isfinite(xz) && std::isfinite(yz);
  }

  Vec3 apply(const Vec3& v) const {
    return {xx * v.x + xy * v.y + xz * v.z, xy * v.x + yy * v.y + yz * v.z,
            xz * v.x + yz * v.y + zz * v.z};
  }
  double quad(const Vec3& v) const { return dot(v, apply(v)); }

  SymMat3 operator+(const SymMat3& o) const {
    return {xx + o.xx, yy + o.yy, zz + o.zz,
            xy + o.xy, xz + o.xz, yz + o.yz};
  }
  SymMat3 operator-(const SymMat3& o) const {
    return {xx - o.xx, yy - o.yy, zz - o.zz,
            xy - o.xy, xz - o.xz, yz - o.yz};
  }
  SymMat3 operator*(double s) const {
    return {xx * s, yy * s, zz * s, xy * s, xz * s, yz * s};
  }
  SymMat3& operator+=(const SymMat3& o) {
    xx += o.xx;
    yy += o.yy;
    zz += o.zz;
    xy += o.xy;
    xz += o.xz;
    yz += o.yz;
    return *this;
  }
};

inline SymMat3 operator*(double s, const SymMat3& m) { return m * s; }

/// General (possibly non-symmetric) 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
  }

  double& operator()(int i, int j) { return m[3 * i + j]; }
  double operator()(int i, int j) const { return m[3 * i + j]; }

  Vec3 apply(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  double frobenius2() const {
    double s = 0.0;
    for (double e : m) s += e * e;
    return s;
  }

  bool finite() const {
    for (double e : m)
      if (!std::isfinite(e)) return false;
    return true;
  }
};

inline Mat3 to_mat3(const SymMat3& s) {
  Mat3 r;
  r.m = {s.xx, s.xy, s.xz, s.xy, s.yy, s.yz, s.xz, s.yz, s.zz};
  return r;
}

}  // namespace landau
