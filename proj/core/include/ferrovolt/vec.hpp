#pragma once

// Small fixed-size vector/tensor types used throughout the solver.
//
// Tensor convention: for a gradient G of a vector field a, G(i,j) = d_i a_j,
// i.e. the row index is the derivative direction.  Contractions:
//   dot(v, G)_j = v_i G_ij   (directional derivative of a along v)
//   G * v       = G_ij v_j
//   dual(G)_i   = eps_ijk G_jk  (so dual(grad a) is the curl of a)

#include <cmath>
#include <ostream>

namespace ferrovolt {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  Vec3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
constexpr double norm2(const Vec3& v) { return dot(v, v); }

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec3{};
}

inline double max_abs_component(const Vec3& v) {
  return std::max(std::abs(v.x), std::max(std::abs(v.y), std::abs(v.z)));
}

// 3x3 tensor, row-major.
struct Mat3 {
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  constexpr double operator()(int i, int j) const { return m[i][j]; }
  double& operator()(int i, int j) { return m[i][j]; }

  static constexpr Mat3 identity() {
    Mat3 t;
    t.m[0][0] = t.m[1][1] = t.m[2][2] = 1.0;
    return t;
  }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }
  Mat3& operator+=(const Mat3& o) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
    return *this;
  }
  Mat3& operator*=(double s) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] *= s;
    return *this;
  }
};

inline Mat3 operator*(double s, const Mat3& t) { return t * s; }

inline Mat3 transpose(const Mat3& t) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = t.m[j][i];
  return r;
}

// outer(a, b)_ij = a_i b_j
inline Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a[i] * b[j];
  return r;
}

// dot(v, T)_j = v_i T_ij
inline Vec3 dot(const Vec3& v, const Mat3& t) {
  return {v.x * t.m[0][0] + v.y * t.m[1][0] + v.z * t.m[2][0],
          v.x * t.m[0][1] + v.y * t.m[1][1] + v.z * t.m[2][1],
          v.x * t.m[0][2] + v.y * t.m[1][2] + v.z * t.m[2][2]};
}

// (T * v)_i = T_ij v_j
inline Vec3 operator*(const Mat3& t, const Vec3& v) {
  return {t.m[0][0] * v.x + t.m[0][1] * v.y + t.m[0][2] * v.z,
          t.m[1][0] * v.x + t.m[1][1] * v.y + t.m[1][2] * v.z,
          t.m[2][0] * v.x + t.m[2][1] * v.y + t.m[2][2] * v.z};
}

inline double trace(const Mat3& t) { return t.m[0][0] + t.m[1][1] + t.m[2][2]; }

// Hodge dual of a tensor: dual(T)_i = eps_ijk T_jk.  For T = grad a this is
// curl a; the antisymmetric part is recovered without a 1/2 factor, so
// dual(grad of (-y, x, 0)) = (0, 0, 2).
inline Vec3 dual(const Mat3& t) {
  return {t.m[1][2] - t.m[2][1], t.m[2][0] - t.m[0][2], t.m[0][1] - t.m[1][0]};
}

inline Mat3 skew_twice(const Mat3& t) { return t - transpose(t); }

inline double max_abs_component(const Mat3& t) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(t.m[i][j]));
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << "(" << v.x << " " << v.y << " " << v.z << ")";
}

}  // namespace ferrovolt
