#pragma once

#include <cmath>
#include <cstddef>

namespace acrel {

// Points and vectors live in R^d with d <= 3; unused trailing components are zero.
struct Vec3 {
  double v[3]{0.0, 0.0, 0.0};

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {{a[0] + b[0], a[1] + b[1], a[2] + b[2]}};
}
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {{a[0] - b[0], a[1] - b[1], a[2] - b[2]}};
}
constexpr Vec3 operator*(double s, const Vec3& a) { return {{s * a[0], s * a[1], s * a[2]}}; }
constexpr Vec3 operator-(const Vec3& a) { return {{-a[0], -a[1], -a[2]}}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

constexpr Vec3 unit_vector(int axis) {
  Vec3 e;
  e[static_cast<std::size_t>(axis)] = 1.0;
  return e;
}

// Row-major 3x3. For a vector field F the Jacobian convention is J(a,b) = dF_a/dx_b.
struct Mat3 {
  double m[3][3]{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  constexpr double& operator()(std::size_t a, std::size_t b) { return m[a][b]; }
  constexpr double operator()(std::size_t a, std::size_t b) const { return m[a][b]; }
};

constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}
constexpr Mat3 operator*(double s, const Mat3& a) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = s * a(i, j);
  return r;
}

// (a (x) b)_{ij} = a_i b_j
constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

// Frobenius pairing A : B
constexpr double contract(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += a(i, j) * b(i, j);
  return s;
}

// A : (x (x) y) without forming the outer product.
constexpr double contract(const Mat3& a, const Vec3& x, const Vec3& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += a(i, j) * x[i] * y[j];
  return s;
}

constexpr Vec3 apply(const Mat3& a, const Vec3& x) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i) r[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2];
  return r;
}

constexpr Vec3 apply_transposed(const Mat3& a, const Vec3& x) {
  Vec3 r;
  for (std::size_t j = 0; j < 3; ++j) r[j] = a(0, j) * x[0] + a(1, j) * x[1] + a(2, j) * x[2];
  return r;
}

constexpr double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

constexpr Mat3 identity_matrix(int dim) {
  Mat3 r;
  for (int i = 0; i < dim; ++i) r(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1.0;
  return r;
}

}  // namespace acrel
