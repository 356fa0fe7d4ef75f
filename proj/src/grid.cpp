#include "acrel/grid.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace acrel {

double unit_sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

Grid Grid::full(int dim, double half_width, std::size_t n) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("full grid: dimension must be 1 or 2");
  if (!(half_width > 0.0) || n < 4) throw std::invalid_argument("full grid: need L > 0 and N >= 4");
  Grid g;
  g.mode_ = GridMode::full;
  g.dim_ = dim;
  g.n_ = n;
  g.size_ = dim == 1 ? n : n * n;
  g.L_ = half_width;
  g.h_ = 2.0 * half_width / static_cast<double>(n);
  g.weights_.assign(g.size_, std::pow(g.h_, dim));
  return g;
}

Grid Grid::radial(int ambient_dim, double radius, std::size_t n) {
  if (ambient_dim < 2 || ambient_dim > 3) throw std::invalid_argument("radial grid: dimension must be 2 or 3");
  if (!(radius > 0.0) || n < 4) throw std::invalid_argument("radial grid: need L > 0 and N >= 4");
  Grid g;
  g.mode_ = GridMode::radial;
  g.dim_ = ambient_dim;
  g.n_ = n;
  g.size_ = n;
  g.L_ = radius;
  g.h_ = radius / static_cast<double>(n - 1);

  const double omega = unit_sphere_area(ambient_dim);
  const double d = ambient_dim;
  const auto ball = [&](double r) { return omega / d * std::pow(r, d); };
  g.weights_.resize(n);
  g.faces_.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(i) * g.h_;
    const double lo = i == 0 ? 0.0 : r - 0.5 * g.h_;
    const double hi = i + 1 == n ? radius : r + 0.5 * g.h_;
    g.weights_[i] = ball(hi) - ball(lo);
    if (i + 1 < n) g.faces_[i] = omega * std::pow(r + 0.5 * g.h_, d - 1.0);
  }
  return g;
}

double Grid::volume() const noexcept { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

}  // namespace acrel
