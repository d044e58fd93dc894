#pragma once

#include <cmath>

namespace delta {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  constexpr double squared_norm() const { return x * x + y * y + z * z; }
  Vec3 normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Rotation of v about the +z axis by angle (radians).
inline Vec3 rotated_z(const Vec3& v, double angle) {
  double c = std::cos(angle);
  double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

/// Column-major 3x3 matrix. Stores columns; enough for Jacobian work.
struct Mat3 {
  Vec3 col0, col1, col2;

  constexpr Mat3() = default;
  constexpr Mat3(const Vec3& c0, const Vec3& c1, const Vec3& c2)
      : col0(c0), col1(c1), col2(c2) {}

  /// M * v
  constexpr Vec3 apply(const Vec3& v) const {
    return col0 * v.x + col1 * v.y + col2 * v.z;
  }
  /// M^T * v (dot of v against each column)
  constexpr Vec3 transpose_apply(const Vec3& v) const {
    return {col0.dot(v), col1.dot(v), col2.dot(v)};
  }
  constexpr double det() const { return col0.dot(col1.cross(col2)); }

  /// Solves M x = b by Cramer's rule. Caller checks det() beforehand.
  Vec3 solve(const Vec3& b) const {
    double d = det();
    double x = b.dot(col1.cross(col2)) / d;
    double y = col0.dot(b.cross(col2)) / d;
    double z = col0.dot(col1.cross(b)) / d;
    return {x, y, z};
  }

  double frobenius_norm() const {
    return std::sqrt(col0.squared_norm() + col1.squared_norm() + col2.squared_norm());
  }
};

using Position = Vec3;
using ForceVector = Vec3;

}  // namespace delta
