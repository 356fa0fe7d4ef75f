#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "acrel/grid.hpp"
#include "acrel/potential.hpp"

namespace acrel::kernels {

// The data-parallel inner loops of the solver and the diagnostics. Every kernel exists twice:
// a plain serial reference (namespace serial) and an OpenMP version (namespace parallel) with the
// same signature. Stencil kernels agree bitwise; reductions agree to rounding.
enum class Exec { serial, parallel };

// Fixed chunking makes parallel reductions independent of the thread count.
inline constexpr std::size_t kReductionChunk = 2048;

namespace serial {

// Zero-flux discrete Laplacian; the finite-volume form on radial grids.
void laplacian(const Grid& g, std::span<const double> u, std::span<double> out);
// Central-difference gradient; gy is ignored unless the grid is a 2-D full grid. On radial grids
// gx receives du/dr (zero on both ends by symmetry and the zero-flux condition).
void gradient(const Grid& g, std::span<const double> u, std::span<double> gx, std::span<double> gy);
// out = u - a W'(u)
void reaction(const PotentialSpec& p, double a, std::span<const double> u, std::span<double> out);
// out = u + dt (lap - W'(u)/eps^2)
void explicit_update(const PotentialSpec& p, double dt, double eps, std::span<const double> u,
                     std::span<const double> lap, std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> f);
double max_abs(std::span<const double> u);
std::size_t count_outside(std::span<const double> u, double bound);

}  // namespace serial

namespace parallel {

void laplacian(const Grid& g, std::span<const double> u, std::span<double> out);
void gradient(const Grid& g, std::span<const double> u, std::span<double> gx, std::span<double> gy);
void reaction(const PotentialSpec& p, double a, std::span<const double> u, std::span<double> out);
void explicit_update(const PotentialSpec& p, double dt, double eps, std::span<const double> u,
                     std::span<const double> lap, std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> f);
double max_abs(std::span<const double> u);
std::size_t count_outside(std::span<const double> u, double bound);

}  // namespace parallel

inline void laplacian(Exec e, const Grid& g, std::span<const double> u, std::span<double> out) {
  e == Exec::serial ? serial::laplacian(g, u, out) : parallel::laplacian(g, u, out);
}
inline void gradient(Exec e, const Grid& g, std::span<const double> u, std::span<double> gx, std::span<double> gy) {
  e == Exec::serial ? serial::gradient(g, u, gx, gy) : parallel::gradient(g, u, gx, gy);
}

// Sums K accumulators over i in [0, n): body(i, acc) adds its contributions into acc.
// The parallel path sums fixed-size chunks independently and joins them in chunk order.
template <std::size_t K, class Body>
std::array<double, K> reduce(Exec e, std::size_t n, Body&& body) {
  std::array<double, K> total{};
  if (e == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i, total);
    return total;
  }
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<std::array<double, K>> partial(chunks, std::array<double, K>{});
  const auto nchunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nchunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t hi = std::min(n, lo + kReductionChunk);
    auto& acc = partial[static_cast<std::size_t>(c)];
    for (std::size_t i = lo; i < hi; ++i) body(i, acc);
  }
  for (const auto& p : partial)
    for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
  return total;
}

}  // namespace acrel::kernels
