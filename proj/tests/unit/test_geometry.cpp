#include <doctest.h>

#include <cmath>

#include "acrel/geometry.hpp"
#include "acrel/grid.hpp"

using namespace acrel;

namespace {

Vec3 v2(double x, double y) { return Vec3{{x, y, 0.0}}; }

// Radius from integrating dR/dt = -(d-1)/R with classical RK4.
double radius_by_ode(double r0, int d, double t, int steps = 4000) {
  auto f = [d](double r) { return -(d - 1) / r; };
  double r = r0;
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(r), k2 = f(r + 0.5 * h * k1), k3 = f(r + 0.5 * h * k2), k4 = f(r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

}  // namespace

TEST_CASE("sphere signed distance") {
  const auto s = InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.4);
  CHECK(s.signed_distance(v2(0, 0), 0.0) == doctest::Approx(1.0));
  CHECK(s.signed_distance(v2(1, 0), 0.0) == doctest::Approx(0.0));
  CHECK(s.signed_distance(v2(2, 0), 0.25) == doctest::Approx(-1.2928932188134525).epsilon(1e-14));
  CHECK(s.radius(0.25) == doctest::Approx(radius_by_ode(1.0, 2, 0.25)).epsilon(1e-10));
  const auto s3 = InterfaceTrajectory::sphere(3, Vec3{}, 1.0, 0.2);
  CHECK(s3.radius(0.2) == doctest::Approx(radius_by_ode(1.0, 3, 0.2)).epsilon(1e-10));
}

TEST_CASE("sphere radius law and extinction guard") {
  const auto s = InterfaceTrajectory::sphere(3, Vec3{}, 1.5, 0.5);
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.05 * i;
    const double r = s.radius(t);
    CHECK(std::abs(r * r - (2.25 - 4.0 * t)) <= 1e-12);
  }
  CHECK(s.extinction_time() == doctest::Approx(2.25 / 4.0));
  CHECK_THROWS_AS(InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceTrajectory::sphere(4, Vec3{}, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("plane is stationary and flat") {
  const auto p = InterfaceTrajectory::plane(2, v2(3, 4), 0.5, 1.0);
  CHECK(p.signed_distance(v2(0.3, 0.4), 0.0) == doctest::Approx(0.0));
  CHECK(p.signed_distance(v2(0.6, 0.8), 0.7) == doctest::Approx(0.5));
  CHECK(p.curvature(0.3) == 0.0);
  CutoffSpec c;
  const Vec3 h = extended_curvature(p, c, v2(0.1, -0.2), 0.5);
  CHECK(norm(h) == 0.0);
}

TEST_CASE("cutoff profile") {
  CutoffSpec c;
  c.r_c = 0.4;
  c.c_quad = 1.0;
  CHECK(c.eta(0.0) == 1.0);
  CHECK(c.eta(0.2) == 0.0);
  CHECK(c.eta(-0.3) == 0.0);
  CHECK(c.eta(0.1) == doctest::Approx(0.9375));
  for (int i = -300; i <= 300; ++i) {
    const double s = i / 1000.0;
    CHECK(c.eta(s) >= 0.0);
    CHECK(c.eta(s) <= std::max(1.0 - s * s / (c.r_c * c.r_c), 0.0) + 1e-15);
    // derivative by central differences
    const double fd = (c.eta(s + 1e-6) - c.eta(s - 1e-6)) / 2e-6;
    CHECK(c.eta_prime(s) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
  const double C = c.derivative_bound_constant();
  CHECK(std::isfinite(C));
  CHECK(C > 0.0);
  CHECK(c.distance_control_constant() == doctest::Approx(2.0));
}

TEST_CASE("xi on the interface is the unit inner normal") {
  const auto s = InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.2);
  CutoffSpec c;
  c.r_c = 0.4;
  const double t = 0.1;
  const double R = s.radius(t);
  const Vec3 x = v2(R * std::cos(0.3), R * std::sin(0.3));
  const Vec3 xi_on = xi(s, c, x, t);
  CHECK(norm(xi_on) == doctest::Approx(1.0));
  CHECK(xi_on[0] == doctest::Approx(-std::cos(0.3)));
  // |xi| = 1 - 1/16 at distance r_c/4 with c_quad = 1
  CHECK(norm(xi(s, c, (R - 0.1) / R * x, t)) == doctest::Approx(0.9375));
  CHECK(norm(xi(s, c, (R + 0.2) / R * x, t)) == 0.0);
  // center: outside the cutoff support
  CHECK(norm(xi(s, c, Vec3{}, t)) == 0.0);
}

TEST_CASE("extended curvature of a circle") {
  const auto s = InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.4);
  const double t = 0.375;  // R = 0.5
  CHECK(s.radius(t) == doctest::Approx(0.5));
  CutoffSpec c;
  c.r_c = 0.2;
  const Vec3 x = v2(0.3, 0.4);
  const Vec3 h = extended_curvature(s, c, x, t);
  CHECK(norm(h) == doctest::Approx(2.0));
  CHECK(h[0] == doctest::Approx(-0.6 * 2.0));
  CHECK(h[1] == doctest::Approx(-0.8 * 2.0));
  // H_I = -(div n_I) n_I with the divergence by central differences of the normal field
  const double step = 1e-5;
  double div = 0.0;
  for (int a = 0; a < 2; ++a) {
    const Vec3 e = step * unit_vector(a);
    div += (s.normal_field(x + e, t)[static_cast<std::size_t>(a)] - s.normal_field(x - e, t)[static_cast<std::size_t>(a)]) /
           (2.0 * step);
  }
  const Vec3 n = s.normal_field(x, t);
  CHECK(h[0] == doctest::Approx(-div * n[0]).epsilon(1e-6));
  CHECK(h[1] == doctest::Approx(-div * n[1]).epsilon(1e-6));
  CHECK(norm(extended_curvature(s, c, v2(0.9, 0.0), t)) == 0.0);
}

TEST_CASE("projection, normal and distance rate") {
  const auto s = InterfaceTrajectory::sphere(2, v2(0.1, -0.2), 1.0, 0.3);
  const double t = 0.2;
  const Vec3 x = v2(0.7, 0.3);
  const Vec3 p = s.projection(x, t);
  const Vec3 pp = s.projection(p, t);
  CHECK(norm(p - pp) <= 1e-12);
  CHECK(s.signed_distance(p, t) == doctest::Approx(0.0).scale(1.0));
  const double step = 1e-6;
  const Vec3 n = s.normal_field(x, t);
  for (int a = 0; a < 2; ++a) {
    const Vec3 e = step * unit_vector(a);
    const double fd = (s.signed_distance(x + e, t) - s.signed_distance(x - e, t)) / (2.0 * step);
    CHECK(n[static_cast<std::size_t>(a)] == doctest::Approx(fd).epsilon(1e-8));
  }
  const double dt = (s.signed_distance(x, t + 1e-6) - s.signed_distance(x, t - 1e-6)) / 2e-6;
  CutoffSpec c;
  const Vec3 hp = (s.curvature(t)) * s.normal_field(p, t);
  CHECK(dt == doctest::Approx(-dot(hp, s.normal_field(p, t))).epsilon(1e-7));
  CHECK(s.distance_rate(t) == doctest::Approx(dt).epsilon(1e-7));
}

TEST_CASE("closed-form jacobians agree with finite differences") {
  const auto s = InterfaceTrajectory::sphere(3, Vec3{}, 1.0, 0.1);
  CutoffSpec c;
  c.r_c = 0.4;
  const double t = 0.05;
  for (const Vec3 x : {Vec3{{0.8, 0.1, 0.2}}, Vec3{{0.5, 0.6, -0.3}}, Vec3{{0.0, 1.02, 0.1}}}) {
    const ExtendedFields f = extended_fields(s, c, x, t);
    const Mat3 fd = curvature_jacobian_fd(s, c, x, t, 1e-5);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) CHECK(f.grad_curvature(a, b) == doctest::Approx(fd(a, b)).epsilon(1e-6).scale(1.0));
    CHECK(f.div_curvature == doctest::Approx(trace(f.grad_curvature)));
    CHECK(f.div_xi == doctest::Approx(trace(f.grad_xi)));
    const Vec3 dt = (0.5 / 1e-6) * (xi(s, c, x, t + 1e-6) - xi(s, c, x, t - 1e-6));
    for (std::size_t a = 0; a < 3; ++a) CHECK(f.dt_xi[a] == doctest::Approx(dt[a]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("xi residuals vanish for the plane") {
  const auto p = InterfaceTrajectory::plane(2, v2(1, 1), 0.1, 1.0);
  CutoffSpec c;
  c.r_c = 0.5;
  const Grid g = Grid::full(2, 1.0, 200);
  const auto r = xi_pde_residuals(p, c, g, 0.5, 1e-4);
  CHECK(r.points_quarter > 0);
  CHECK(r.transport_half < 1e-6);
  CHECK(r.length_half < 1e-6);
  CHECK(r.curvature_quarter == doctest::Approx(2.0 / (c.r_c * c.r_c)).epsilon(1e-3));
}

TEST_CASE("xi residuals on the circle are bounded and refinement stable") {
  const auto s = InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.2);
  CutoffSpec c;
  c.r_c = 0.45 * s.min_radius();
  const auto coarse = xi_pde_residuals(s, c, Grid::full(2, 1.25, 400), 0.1, 1e-4);
  const auto fine = xi_pde_residuals(s, c, Grid::full(2, 1.25, 800), 0.1, 1e-4);
  // r3/dist -> 2 c_quad / r_c^2 + eta/(rho R) near the interface
  const double R = s.radius(0.1);
  const double limit = 2.0 / (c.r_c * c.r_c) + 1.0 / ((R - 0.25 * c.r_c) * R);
  CHECK(fine.curvature_quarter == doctest::Approx(limit).epsilon(0.02));
  CHECK(coarse.curvature_quarter / fine.curvature_quarter < 1.2);
  CHECK(fine.transport_quarter <= coarse.transport_quarter);
  CHECK(fine.length_quarter <= coarse.length_quarter);
  CHECK(coarse.length_half / fine.length_half == doctest::Approx(1.0).epsilon(0.2));
}
