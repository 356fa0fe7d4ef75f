#include "acrel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "acrel/grid.hpp"
#include "acrel/kernels.hpp"

namespace acrel {

namespace {

double smoothstep5(double q) { return q * q * q * (10.0 - 15.0 * q + 6.0 * q * q); }
double smoothstep5_prime(double q) { return 30.0 * q * q * (1.0 - q) * (1.0 - q); }

Vec3 truncated(Vec3 v, int dim) {
  for (int i = dim; i < 3; ++i) v[static_cast<std::size_t>(i)] = 0.0;
  return v;
}

// Fourth-order central difference along one axis of a full grid, second order next to the boundary.
void gradient4(const Grid& g, std::span<const double> f, int axis, std::span<double> out) {
  const std::size_t n = g.n();
  const std::size_t stride = axis == 0 ? 1 : n;
  const double h = g.h();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const std::size_t i = axis == 0 ? idx % n : idx / n;
    if (i >= 2 && i + 2 < n) {
      out[idx] = (f[idx - 2 * stride] - 8.0 * f[idx - stride] + 8.0 * f[idx + stride] - f[idx + 2 * stride]) /
                 (12.0 * h);
    } else if (i >= 1 && i + 1 < n) {
      out[idx] = (f[idx + stride] - f[idx - stride]) / (2.0 * h);
    } else {
      out[idx] = 0.0;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Trajectory

InterfaceTrajectory InterfaceTrajectory::plane(int dim, Vec3 normal, double offset, double t_max) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("plane: dimension must be 1, 2 or 3");
  normal = truncated(normal, dim);
  const double len = norm(normal);
  if (!(len > 0.0)) throw std::invalid_argument("plane: normal must be nonzero");
  if (!(t_max >= 0.0)) throw std::invalid_argument("plane: t_max must be >= 0");
  return InterfaceTrajectory(dim, PlaneInterface{(1.0 / len) * normal, offset}, t_max);
}

InterfaceTrajectory InterfaceTrajectory::sphere(int dim, Vec3 center, double initial_radius, double t_max) {
  if (dim < 2 || dim > 3) throw std::invalid_argument("sphere: dimension must be 2 or 3");
  if (!(initial_radius > 0.0)) throw std::invalid_argument("sphere: R0 must be positive");
  const double extinction = initial_radius * initial_radius / (2.0 * (dim - 1));
  if (!(t_max >= 0.0) || !(t_max < extinction))
    throw std::invalid_argument("sphere: t_max must lie in [0, " + std::to_string(extinction) + ")");
  return InterfaceTrajectory(dim, SphereInterface{truncated(center, dim), initial_radius}, t_max);
}

double InterfaceTrajectory::extinction_time() const noexcept {
  if (const auto* s = as_sphere()) return s->initial_radius * s->initial_radius / (2.0 * (dim_ - 1));
  return std::numeric_limits<double>::infinity();
}

double InterfaceTrajectory::radius(double t) const {
  const auto* s = as_sphere();
  if (!s) return std::numeric_limits<double>::infinity();
  const double r2 = s->initial_radius * s->initial_radius - 2.0 * (dim_ - 1) * t;
  if (!(r2 > 0.0)) throw std::domain_error("sphere queried at or beyond extinction");
  return std::sqrt(r2);
}

double InterfaceTrajectory::min_radius() const noexcept {
  if (!is_sphere()) return std::numeric_limits<double>::infinity();
  return radius(t_max_);
}

double InterfaceTrajectory::signed_distance(const Vec3& x, double t) const {
  if (const auto* p = as_plane()) return dot(p->normal, x) - p->offset;
  const auto* s = as_sphere();
  return radius(t) - norm(x - s->center);
}

Vec3 InterfaceTrajectory::projection(const Vec3& x, double t) const {
  if (const auto* p = as_plane()) return x - signed_distance(x, t) * p->normal;
  const auto* s = as_sphere();
  const Vec3 rel = x - s->center;
  const double rho = norm(rel);
  if (rho == 0.0) return s->center + radius(t) * unit_vector(0);
  return s->center + (radius(t) / rho) * rel;
}

Vec3 InterfaceTrajectory::normal_field(const Vec3& x, double /*t*/) const {
  if (const auto* p = as_plane()) return p->normal;
  const auto* s = as_sphere();
  const Vec3 rel = x - s->center;
  const double rho = norm(rel);
  if (rho == 0.0) return -unit_vector(0);
  return (-1.0 / rho) * rel;
}

Mat3 InterfaceTrajectory::distance_hessian(const Vec3& x, double /*t*/) const {
  if (as_plane()) return Mat3{};
  const auto* s = as_sphere();
  const Vec3 rel = x - s->center;
  const double rho = norm(rel);
  if (rho == 0.0) return Mat3{};
  const Vec3 e = (1.0 / rho) * rel;
  Mat3 hess;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      const auto i = static_cast<std::size_t>(a), j = static_cast<std::size_t>(b);
      hess(i, j) = -((a == b ? 1.0 : 0.0) - e[i] * e[j]) / rho;
    }
  return hess;
}

double InterfaceTrajectory::curvature(double t) const {
  if (as_plane()) return 0.0;
  return (dim_ - 1) / radius(t);
}

double InterfaceTrajectory::distance_rate(double t) const { return -curvature(t); }

// ---------------------------------------------------------------------------
// Cutoff

double CutoffSpec::eta_tilde(double s) const noexcept {
  const double q = std::clamp((std::abs(s) - 0.25 * r_c) / (0.25 * r_c), 0.0, 1.0);
  return 1.0 - smoothstep5(q);
}

double CutoffSpec::eta_tilde_prime(double s) const noexcept {
  const double q = (std::abs(s) - 0.25 * r_c) / (0.25 * r_c);
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const double sign = s < 0.0 ? -1.0 : 1.0;
  return -sign * smoothstep5_prime(q) / (0.25 * r_c);
}

double CutoffSpec::eta(double s) const noexcept {
  return (1.0 - c_quad * s * s / (r_c * r_c)) * eta_tilde(s);
}

double CutoffSpec::eta_prime(double s) const noexcept {
  const double rc2 = r_c * r_c;
  return -2.0 * c_quad * s / rc2 * eta_tilde(s) + (1.0 - c_quad * s * s / rc2) * eta_tilde_prime(s);
}

double CutoffSpec::derivative_bound_constant() const {
  double c = 0.0;
  for (int i = 1; i <= 4000; ++i) {
    const double s = 0.5 * r_c * i / 4000.0;
    c = std::max(c, std::abs(eta_prime(s)) / std::min(1.0 / r_c, s / (r_c * r_c)));
  }
  return c;
}

double CutoffSpec::distance_control_constant() const noexcept {
  return 1.0 + std::max(1.0, r_c * r_c / c_quad);
}

// ---------------------------------------------------------------------------
// Extended fields

ExtendedFields extended_fields(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Vec3& x, double t) {
  ExtendedFields f;
  f.signed_dist = traj.signed_distance(x, t);
  if (const auto* s = traj.as_sphere()) {
    if (norm(x - s->center) < 1e-12 * s->initial_radius) return f;
  }
  const double d = f.signed_dist;
  const Vec3 nu = traj.normal_field(x, t);
  const Mat3 hess = traj.distance_hessian(x, t);
  const double tr = trace(hess);
  const double kappa = traj.curvature(t);

  const double eta = cutoff.eta(d), deta = cutoff.eta_prime(d);
  const double et = cutoff.eta_tilde(d), det = cutoff.eta_tilde_prime(d);
  const Mat3 nn = outer(nu, nu);

  f.normal = nu;
  f.xi = eta * nu;
  f.grad_xi = deta * nn + eta * hess;
  f.div_xi = deta + eta * tr;
  f.dt_xi = (deta * traj.distance_rate(t)) * nu;
  f.curvature = (kappa * et) * nu;
  f.grad_curvature = kappa * (det * nn + et * hess);
  f.div_curvature = kappa * (det + et * tr);
  return f;
}

Mat3 curvature_jacobian_fd(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Vec3& x, double t,
                           double step) {
  Mat3 jac;
  for (int b = 0; b < traj.dim(); ++b) {
    const auto j = static_cast<std::size_t>(b);
    const Vec3 e = step * unit_vector(b);
    const Vec3 hp = extended_curvature(traj, cutoff, x + e, t);
    const Vec3 hm = extended_curvature(traj, cutoff, x - e, t);
    for (std::size_t a = 0; a < 3; ++a) jac(a, j) = (hp[a] - hm[a]) / (2.0 * step);
  }
  return jac;
}

XiResidualReport xi_pde_residuals(const InterfaceTrajectory& traj, const CutoffSpec& cutoff, const Grid& grid,
                                  double t, double dt_step) {
  if (grid.is_radial()) throw std::invalid_argument("xi_pde_residuals needs a full grid");
  if (grid.dim() != traj.dim()) throw std::invalid_argument("xi_pde_residuals: grid and trajectory dimensions differ");
  const std::size_t n = grid.size();
  const int dim = grid.dim();

  std::vector<std::vector<double>> comp(static_cast<std::size_t>(dim), std::vector<double>(n));
  std::vector<double> len2(n), len2_plus(n), len2_minus(n);
  std::vector<Vec3> dt_xi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = grid.point(i);
    const Vec3 xi_now = xi(traj, cutoff, x, t);
    const Vec3 xi_p = xi(traj, cutoff, x, t + dt_step);
    const Vec3 xi_m = xi(traj, cutoff, x, t - dt_step);
    for (int a = 0; a < dim; ++a) comp[static_cast<std::size_t>(a)][i] = xi_now[static_cast<std::size_t>(a)];
    len2[i] = dot(xi_now, xi_now);
    dt_xi[i] = (0.5 / dt_step) * (xi_p - xi_m);
    len2_plus[i] = dot(xi_p, xi_p);
    len2_minus[i] = dot(xi_m, xi_m);
  }

  // grads[a][b][i] = d xi_a / d x_b
  std::vector<std::vector<std::vector<double>>> grads(
      static_cast<std::size_t>(dim), std::vector<std::vector<double>>(2, std::vector<double>(n, 0.0)));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      gradient4(grid, comp[static_cast<std::size_t>(a)], b, grads[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
  std::vector<double> l2x(n, 0.0), l2y(n, 0.0);
  gradient4(grid, len2, 0, l2x);
  if (dim > 1) gradient4(grid, len2, 1, l2y);

  XiResidualReport rep;
  rep.transport.resize(n);
  rep.length.resize(n);
  rep.curvature.resize(n);
  const double h = grid.h();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = grid.point(i);
    const ExtendedFields f = extended_fields(traj, cutoff, x, t);
    Mat3 gxi;
    double div = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
        gxi(ia, ib) = grads[ia][ib][i];
        if (a == b) div += grads[ia][ib][i];
      }
    Vec3 grad_len2;
    grad_len2[0] = l2x[i];
    if (dim > 1) grad_len2[1] = l2y[i];

    const Vec3 r1 = dt_xi[i] + apply(gxi, f.curvature) + apply_transposed(f.grad_curvature, f.xi);
    const double r2 = 0.5 * (len2_plus[i] - len2_minus[i]) / dt_step + dot(f.curvature, grad_len2);
    const double r3 = -div - dot(f.curvature, f.xi);
    rep.transport[i] = norm(r1);
    rep.length[i] = r2;
    rep.curvature[i] = r3;

    const double dist = std::abs(f.signed_dist);
    if (dist < h || dist > 0.5 * cutoff.r_c) continue;
    ++rep.points_half;
    rep.transport_half = std::max(rep.transport_half, rep.transport[i] / dist);
    rep.length_half = std::max(rep.length_half, std::abs(r2) / (dist * dist));
    rep.curvature_half = std::max(rep.curvature_half, std::abs(r3) / dist);
    if (dist > 0.25 * cutoff.r_c) continue;
    ++rep.points_quarter;
    rep.transport_quarter = std::max(rep.transport_quarter, rep.transport[i] / dist);
    rep.length_quarter = std::max(rep.length_quarter, std::abs(r2) / (dist * dist));
    rep.curvature_quarter = std::max(rep.curvature_quarter, std::abs(r3) / dist);
  }
  return rep;
}

}  // namespace acrel
