#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace r4nb {

// Point (or momentum) in R^4. Coordinates are ordered (x, y, z, w); the
// x-y plane carries the first rotation angle, the z-w plane the second.
struct Vec4 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec4 operator+(const Vec4& o) const { return {x + o.x, y + o.y, z + o.z, w + o.w}; }
  Vec4 operator-(const Vec4& o) const { return {x - o.x, y - o.y, z - o.z, w - o.w}; }
  Vec4 operator*(double s) const { return {x * s, y * s, z * s, w * s}; }
  Vec4 operator/(double s) const { return {x / s, y / s, z / s, w / s}; }
  Vec4& operator+=(const Vec4& o) { x += o.x; y += o.y; z += o.z; w += o.w; return *this; }
  Vec4& operator-=(const Vec4& o) { x -= o.x; y -= o.y; z -= o.z; w -= o.w; return *this; }
  Vec4 operator-() const { return {-x, -y, -z, -w}; }

  double dot(const Vec4& o) const { return x * o.x + y * o.y + z * o.z + w * o.w; }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }

  Eigen::Vector4d eigen() const { return {x, y, z, w}; }
  static Vec4 from(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

}  // namespace r4nb
