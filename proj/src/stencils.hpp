#pragma once

#include <cstddef>
#include <span>

#include "acrel/grid.hpp"

// Pointwise stencils shared by the serial and OpenMP kernels.
namespace acrel::detail {

inline double laplacian_1d(std::span<const double> u, std::size_t i, std::size_t n, double inv_h2) {
  const double l = i == 0 ? u[0] : u[i - 1];
  const double r = i + 1 == n ? u[n - 1] : u[i + 1];
  return (l - 2.0 * u[i] + r) * inv_h2;
}

inline double laplacian_2d(std::span<const double> u, std::size_t idx, std::size_t n, double inv_h2) {
  const std::size_t ix = idx % n, iy = idx / n;
  const double c = u[idx];
  const double w = ix == 0 ? c : u[idx - 1];
  const double e = ix + 1 == n ? c : u[idx + 1];
  const double s = iy == 0 ? c : u[idx - n];
  const double nn = iy + 1 == n ? c : u[idx + n];
  return (w + e + s + nn - 4.0 * c) * inv_h2;
}

inline double laplacian_radial(std::span<const double> u, std::size_t i, std::size_t n, double h,
                               std::span<const double> faces, std::span<const double> vol) {
  double flux = 0.0;
  if (i + 1 < n) flux += faces[i] * (u[i + 1] - u[i]);
  if (i > 0) flux -= faces[i - 1] * (u[i] - u[i - 1]);
  return flux / (h * vol[i]);
}

inline double central_1d(std::span<const double> u, std::size_t i, std::size_t n, double inv_2h) {
  const double l = i == 0 ? u[0] : u[i - 1];
  const double r = i + 1 == n ? u[n - 1] : u[i + 1];
  return (r - l) * inv_2h;
}

inline double central_radial(std::span<const double> u, std::size_t i, std::size_t n, double inv_2h) {
  if (i == 0 || i + 1 == n) return 0.0;
  return (u[i + 1] - u[i - 1]) * inv_2h;
}

inline void central_2d(std::span<const double> u, std::size_t idx, std::size_t n, double inv_2h, double& gx,
                       double& gy) {
  const std::size_t ix = idx % n, iy = idx / n;
  const double c = u[idx];
  const double w = ix == 0 ? c : u[idx - 1];
  const double e = ix + 1 == n ? c : u[idx + 1];
  const double s = iy == 0 ? c : u[idx - n];
  const double nn = iy + 1 == n ? c : u[idx + n];
  gx = (e - w) * inv_2h;
  gy = (nn - s) * inv_2h;
}

}  // namespace acrel::detail
