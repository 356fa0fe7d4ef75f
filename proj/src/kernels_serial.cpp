#include <algorithm>
#include <cmath>

#include "acrel/kernels.hpp"
#include "stencils.hpp"

namespace acrel::kernels::serial {

void laplacian(const Grid& g, std::span<const double> u, std::span<double> out) {
  const std::size_t n = g.n();
  const auto size = static_cast<long long>(g.size());
  const double h = g.h();
  const double inv_h2 = 1.0 / (h * h);
  if (g.is_radial()) {
    const auto faces = g.face_areas();
    const auto vol = g.weights();
    for (long long i = 0; i < size; ++i)
      out[static_cast<std::size_t>(i)] = detail::laplacian_radial(u, static_cast<std::size_t>(i), n, h, faces, vol);
  } else if (g.dim() == 1) {
    for (long long i = 0; i < size; ++i)
      out[static_cast<std::size_t>(i)] = detail::laplacian_1d(u, static_cast<std::size_t>(i), n, inv_h2);
  } else {
    for (long long i = 0; i < size; ++i)
      out[static_cast<std::size_t>(i)] = detail::laplacian_2d(u, static_cast<std::size_t>(i), n, inv_h2);
  }
}

void gradient(const Grid& g, std::span<const double> u, std::span<double> gx, std::span<double> gy) {
  const std::size_t n = g.n();
  const auto size = static_cast<long long>(g.size());
  const double inv_2h = 0.5 / g.h();
  if (g.is_radial()) {
    for (long long i = 0; i < size; ++i)
      gx[static_cast<std::size_t>(i)] = detail::central_radial(u, static_cast<std::size_t>(i), n, inv_2h);
  } else if (g.dim() == 1) {
    for (long long i = 0; i < size; ++i)
      gx[static_cast<std::size_t>(i)] = detail::central_1d(u, static_cast<std::size_t>(i), n, inv_2h);
  } else {
    for (long long i = 0; i < size; ++i) {
      const auto k = static_cast<std::size_t>(i);
      detail::central_2d(u, k, n, inv_2h, gx[k], gy[k]);
    }
  }
}

void reaction(const PotentialSpec& p, double a, std::span<const double> u, std::span<double> out) {
  const auto size = static_cast<long long>(u.size());
  for (long long i = 0; i < size; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = u[k] - a * p.dW(u[k]);
  }
}

void explicit_update(const PotentialSpec& p, double dt, double eps, std::span<const double> u,
                     std::span<const double> lap, std::span<double> out) {
  const auto size = static_cast<long long>(u.size());
  const double inv_eps2 = 1.0 / (eps * eps);
  for (long long i = 0; i < size; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = u[k] + dt * (lap[k] - inv_eps2 * p.dW(u[k]));
  }
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  const auto r = reduce<1>(Exec::serial, f.size(), [&](std::size_t i, std::array<double, 1>& acc) { acc[0] += w[i] * f[i]; });
  return r[0];
}

double max_abs(std::span<const double> u) {
  double m = 0.0;
  const auto size = static_cast<long long>(u.size());
  for (long long i = 0; i < size; ++i) {
    const double a = std::abs(u[static_cast<std::size_t>(i)]);
    m = std::max(m, std::isnan(a) ? HUGE_VAL : a);
  }
  return m;
}

std::size_t count_outside(std::span<const double> u, double bound) {
  std::size_t c = 0;
  const auto size = static_cast<long long>(u.size());
  for (long long i = 0; i < size; ++i) c += std::abs(u[static_cast<std::size_t>(i)]) > bound ? 1 : 0;
  return c;
}

}  // namespace acrel::kernels::serial
