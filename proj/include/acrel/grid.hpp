#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "acrel/vec.hpp"

namespace acrel {

enum class GridMode { full, radial };

// Uniform grid with zero-flux boundaries.
//  full:   cell-centred tensor grid on [-L, L]^d (d = 1, 2), N cells per axis, h = 2L/N,
//          storage index = iy * N + ix.
//  radial: nodes r_i = i h on [0, L], h = L/(N-1), for radially symmetric fields in R^d;
//          finite-volume cells [r_i - h/2, r_i + h/2] clipped to [0, L].
class Grid {
 public:
  static Grid full(int dim, double half_width, std::size_t n);
  static Grid radial(int ambient_dim, double radius, std::size_t n);

  GridMode mode() const noexcept { return mode_; }
  bool is_radial() const noexcept { return mode_ == GridMode::radial; }
  // Ambient dimension d of the physical problem.
  int dim() const noexcept { return dim_; }
  // Number of storage axes: d for full grids, 1 for radial.
  int axes() const noexcept { return mode_ == GridMode::radial ? 1 : dim_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  double h() const noexcept { return h_; }
  double L() const noexcept { return L_; }

  double coordinate(std::size_t i) const noexcept {
    return mode_ == GridMode::radial ? static_cast<double>(i) * h_ : -L_ + (static_cast<double>(i) + 0.5) * h_;
  }
  // Physical location; radial nodes sit on the first axis, x = (r, 0, 0).
  Vec3 point(std::size_t idx) const noexcept {
    Vec3 x;
    if (mode_ == GridMode::radial || dim_ == 1) {
      x[0] = coordinate(idx);
    } else {
      x[0] = coordinate(idx % n_);
      x[1] = coordinate(idx / n_);
    }
    return x;
  }
  // Quadrature weight (cell volume) of each storage point.
  std::span<const double> weights() const noexcept { return weights_; }
  // Radial only: area of the face between nodes i and i+1.
  std::span<const double> face_areas() const noexcept { return faces_; }

  double volume() const noexcept;

 private:
  Grid() = default;

  GridMode mode_ = GridMode::full;
  int dim_ = 1;
  std::size_t n_ = 0;
  std::size_t size_ = 0;
  double h_ = 0.0;
  double L_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> faces_;
};

// Surface area of the unit sphere in R^d.
double unit_sphere_area(int d);

struct ScalarField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;
  // Points found outside [-1 - delta, 1 + delta], accumulated over the steps that produced this field.
  std::size_t clamp_count = 0;

  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const Grid> g, double fill = 0.0)
      : grid(std::move(g)), values(grid->size(), fill) {}

  std::size_t size() const noexcept { return values.size(); }
};

}  // namespace acrel
