#include <doctest.h>

#include <cmath>
#include <numbers>
#include <omp.h>
#include <random>
#include <vector>

#include "acrel/grid.hpp"
#include "acrel/kernels.hpp"
#include "acrel/potential.hpp"

using namespace acrel;

namespace {

std::vector<double> random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree") {
  const auto p = make_standard_potential();
  for (const Grid& g : {Grid::full(1, 1.0, 777), Grid::full(2, 1.0, 97), Grid::radial(2, 2.0, 5001), Grid::radial(3, 1.0, 300)}) {
    const auto u = random_field(g.size(), 7);
    std::vector<double> a(g.size()), b(g.size()), ax(g.size()), ay(g.size()), bx(g.size()), by(g.size());
    kernels::serial::laplacian(g, u, a);
    kernels::parallel::laplacian(g, u, b);
    CHECK(max_diff(a, b) == 0.0);
    kernels::serial::gradient(g, u, ax, ay);
    kernels::parallel::gradient(g, u, bx, by);
    CHECK(max_diff(ax, bx) == 0.0);
    if (!g.is_radial() && g.dim() == 2) CHECK(max_diff(ay, by) == 0.0);
    kernels::serial::reaction(p, 0.01, u, a);
    kernels::parallel::reaction(p, 0.01, u, b);
    CHECK(max_diff(a, b) == 0.0);
    std::vector<double> lap(g.size());
    kernels::serial::laplacian(g, u, lap);
    kernels::serial::explicit_update(p, 1e-4, 0.1, u, lap, a);
    kernels::parallel::explicit_update(p, 1e-4, 0.1, u, lap, b);
    CHECK(max_diff(a, b) == 0.0);
    const auto w = g.weights();
    const double s1 = kernels::serial::weighted_sum(w, u);
    const double s2 = kernels::parallel::weighted_sum(w, u);
    CHECK(std::abs(s1 - s2) <= 1e-12 * (1.0 + std::abs(s1)));
    CHECK(kernels::serial::max_abs(u) == kernels::parallel::max_abs(u));
    CHECK(kernels::serial::count_outside(u, 1.0) == kernels::parallel::count_outside(u, 1.0));
  }
}

TEST_CASE("parallel reductions do not depend on the thread count") {
  const auto u = random_field(100000, 3);
  const std::vector<double> w(u.size(), 0.37);
  auto sum = [&](kernels::Exec e) {
    return kernels::reduce<2>(e, u.size(), [&](std::size_t i, std::array<double, 2>& acc) {
      acc[0] += w[i] * u[i];
      acc[1] += u[i] * u[i];
    });
  };
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto ref = sum(kernels::Exec::parallel);
  for (int t : {2, 3, 5, 8}) {
    omp_set_num_threads(t);
    const auto again = sum(kernels::Exec::parallel);
    CHECK(ref[0] == again[0]);
    CHECK(ref[1] == again[1]);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("max_abs reports NaN as unbounded") {
  std::vector<double> u{0.1, std::nan(""), -0.5};
  CHECK(std::isinf(kernels::serial::max_abs(u)));
  CHECK(std::isinf(kernels::parallel::max_abs(u)));
}

TEST_CASE("laplacian is second-order accurate away from the boundary") {
  // cos(pi x) satisfies the zero-flux condition on [-1, 1]
  auto err = [](std::size_t n) {
    const Grid g = Grid::full(1, 1.0, n);
    std::vector<double> u(g.size()), lap(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::cos(std::numbers::pi * g.coordinate(i));
    kernels::serial::laplacian(g, u, lap);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      m = std::max(m, std::abs(lap[i] + std::numbers::pi * std::numbers::pi * u[i]));
    return m;
  };
  const double e1 = err(100), e2 = err(200);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));

  const Grid g = Grid::full(2, 1.0, 128);
  std::vector<double> u(g.size()), lap(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.point(i);
    u[i] = std::cos(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]);
  }
  kernels::parallel::laplacian(g, u, lap);
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(lap[i] + 2.0 * std::numbers::pi * std::numbers::pi * u[i]));
  // leading truncation term: 2 pi^4 h^2 / 12
  const double h = g.h();
  CHECK(m == doctest::Approx(std::pow(std::numbers::pi, 4) * h * h / 6.0).epsilon(0.02));
}

TEST_CASE("radial laplacian, including the axis") {
  // u = r^2 has laplacian 2d in R^d
  for (int d : {2, 3}) {
    const Grid g = Grid::radial(d, 1.0, 201);
    std::vector<double> u(g.size()), lap(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = g.coordinate(i) * g.coordinate(i);
    kernels::serial::laplacian(g, u, lap);
    CHECK(lap[0] == doctest::Approx(2.0 * d).epsilon(1e-10));
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(lap[i] == doctest::Approx(2.0 * d).epsilon(1e-9));
  }
  // finite-volume form conserves mass with zero flux
  const Grid g = Grid::radial(2, 1.0, 301);
  const auto u = random_field(g.size(), 11);
  std::vector<double> lap(g.size());
  kernels::serial::laplacian(g, u, lap);
  CHECK(std::abs(kernels::serial::weighted_sum(g.weights(), lap)) < 1e-9);
}

TEST_CASE("gradient of smooth data") {
  const Grid g = Grid::full(2, 1.0, 200);
  std::vector<double> u(g.size()), gx(g.size()), gy(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.point(i);
    u[i] = std::sin(x[0]) + 2.0 * x[1];
  }
  kernels::serial::gradient(g, u, gx, gy);
  const std::size_t mid = 100 * 200 + 57;
  CHECK(gx[mid] == doctest::Approx(std::cos(g.point(mid)[0])).epsilon(1e-4));
  CHECK(gy[mid] == doctest::Approx(2.0).epsilon(1e-12));

  const Grid r = Grid::radial(3, 1.0, 101);
  std::vector<double> v(r.size()), dr(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = r.coordinate(i) * r.coordinate(i);
  kernels::serial::gradient(r, v, dr, {});
  CHECK(dr[0] == 0.0);
  CHECK(dr[50] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dr[100] == 0.0);
}
