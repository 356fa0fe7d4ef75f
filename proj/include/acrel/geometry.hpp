#pragma once

#include <variant>
#include <vector>

#include "acrel/vec.hpp"

namespace acrel {

class Grid;

struct PlaneInterface {
  Vec3 normal;  // unit; points into the phase {chi = +1}
  double offset = 0.0;
};

struct SphereInterface {
  Vec3 center;
  double initial_radius = 1.0;
};

// Exact smooth mean-curvature flow: a stationary hyperplane or a shrinking sphere with
// R(t)^2 = R0^2 - 2(d-1)t. The signed distance is positive inside the phase chi = +1
// (the half-space the normal points into, or the ball).
class InterfaceTrajectory {
 public:
  static InterfaceTrajectory plane(int dim, Vec3 normal, double offset, double t_max);
  static InterfaceTrajectory sphere(int dim, Vec3 center, double initial_radius, double t_max);

  int dim() const noexcept { return dim_; }
  double t_max() const noexcept { return t_max_; }
  bool is_sphere() const noexcept { return std::holds_alternative<SphereInterface>(shape_); }
  const PlaneInterface* as_plane() const noexcept { return std::get_if<PlaneInterface>(&shape_); }
  const SphereInterface* as_sphere() const noexcept { return std::get_if<SphereInterface>(&shape_); }

  double radius(double t) const;
  double extinction_time() const noexcept;
  // min over [0, t_max] of the normal injectivity radius; infinite for the plane.
  double min_radius() const noexcept;

  double signed_distance(const Vec3& x, double t) const;
  Vec3 projection(const Vec3& x, double t) const;
  // grad of the signed distance, i.e. the inner normal at the projection.
  Vec3 normal_field(const Vec3& x, double t) const;
  Mat3 distance_hessian(const Vec3& x, double t) const;
  // Scalar kappa with H_I(P x) = kappa * n_I(P x); (d-1)/R for the sphere.
  double curvature(double t) const;
  // Time derivative of the signed distance at fixed x, equal to -kappa inside the tube.
  double distance_rate(double t) const;

 private:
  InterfaceTrajectory(int dim, std::variant<PlaneInterface, SphereInterface> shape, double t_max)
      : dim_(dim), shape_(shape), t_max_(t_max) {}

  int dim_;
  std::variant<PlaneInterface, SphereInterface> shape_;
  double t_max_;
};

// eta(s) = (1 - c_quad s^2 / r_c^2) * eta_tilde(s), where eta_tilde is 1 on |s| <= r_c/4,
// 0 on |s| >= r_c/2 and a quintic smoothstep in between.
struct CutoffSpec {
  double r_c = 0.5;
  double c_quad = 1.0;

  double eta(double s) const noexcept;
  double eta_prime(double s) const noexcept;
  double eta_tilde(double s) const noexcept;
  double eta_tilde_prime(double s) const noexcept;
  // C in |eta'(s)| <= C min{1/r_c, |s|/r_c^2}, evaluated on a fine sample.
  double derivative_bound_constant() const;
  // C(I) in int min{dist^2,1} e(u) <= C(I) E[u|I]; follows from 1 - xi.n >= min{c_quad dist^2/r_c^2, 1}.
  double distance_control_constant() const noexcept;
};

struct ExtendedFields {
  double signed_dist = 0.0;
  Vec3 normal;          // n_I(P_I x)
  Vec3 xi;              // eta(dist) n_I(P_I x)
  Mat3 grad_xi;         // d xi_a / d x_b
  double div_xi = 0.0;
  Vec3 dt_xi;
  Vec3 curvature;       // H_I(P_I x) eta_tilde(dist)
  Mat3 grad_curvature;  // d H_a / d x_b
  double div_curvature = 0.0;
};

// Closed-form evaluation. Near the sphere center, where the projection is undefined, every
// field is zero; configuration validation keeps the center outside the cutoff support.
ExtendedFields extended_fields(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Vec3& x, double t);

inline Vec3 xi(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Vec3& x, double t) {
  return extended_fields(traj, cutoff, x, t).xi;
}
inline Vec3 extended_curvature(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Vec3& x, double t) {
  return extended_fields(traj, cutoff, x, t).curvature;
}

// Central-difference Jacobian of the extended curvature; the route for trajectories without
// closed-form derivatives, and a cross-check of the analytic one.
Mat3 curvature_jacobian_fd(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Vec3& x, double t,
                           double step);

struct XiResidualReport {
  // Pointwise residuals on the grid (transport magnitude, length, curvature).
  std::vector<double> transport;
  std::vector<double> length;
  std::vector<double> curvature;
  // Sup of |r1|/dist, |r2|/dist^2, |r3|/dist over h <= dist <= r_c/4 and over h <= dist <= r_c/2.
  double transport_quarter = 0.0, length_quarter = 0.0, curvature_quarter = 0.0;
  double transport_half = 0.0, length_half = 0.0, curvature_half = 0.0;
  std::size_t points_quarter = 0, points_half = 0;
};

// r1 = dt xi + (H.grad) xi + (grad H)^T xi, r2 = dt|xi|^2 + (H.grad)|xi|^2, r3 = -div xi - H.xi,
// with dt by central differences of width 2 dt_step and spatial derivatives by fourth-order grid differences.
XiResidualReport xi_pde_residuals(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Grid& grid,
                                  double t, double dt_step);

}  // namespace acrel
