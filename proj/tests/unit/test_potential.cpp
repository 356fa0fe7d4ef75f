#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acrel/error.hpp"
#include "acrel/potential.hpp"

using namespace acrel;

// Frozen oracle values, computed independently at 30 digits.
constexpr double kTanh1p5 = 0.905148253644866438;  // tanh(3/2)
constexpr double kTail5 = 6.11804453851249450e-7;  // 1 - tanh(15/2)

TEST_CASE("standard potential values") {
  const PotentialSpec p = make_standard_potential();
  CHECK(p.kind() == PotentialKind::standard_quartic);
  CHECK(p.W(1.0) == doctest::Approx(0.0));
  CHECK(p.W(-1.0) == doctest::Approx(0.0));
  CHECK(p.W(0.0) == doctest::Approx(1.125));
  CHECK(p.dW(0.5) == doctest::Approx(4.5 * 0.5 * (0.25 - 1.0)));
  CHECK(p.ddW(1.0) == doctest::Approx(9.0));
  CHECK(p.max_ddW_on_unit_interval() == doctest::Approx(9.0));
  CHECK(std::abs(p.normalization() - 2.0) < 1e-10);
  CHECK(std::abs(integrate_sqrt_2W(p, -1.0, 1.0) - 2.0) < 1e-10);
  CHECK(p.lower_bound_constant() > 0.0);
}

TEST_CASE("standard potential is even with positive interior") {
  const PotentialSpec p = make_standard_potential();
  for (int i = -100; i <= 100; ++i) {
    const double s = i / 40.0;
    CHECK(p.W(s) == doctest::Approx(p.W(-s)).epsilon(1e-14));
    if (std::abs(s) < 1.0) CHECK(p.W(s) > 0.0);
  }
}

TEST_CASE("psi map") {
  const PotentialSpec p = make_standard_potential();
  CHECK(p.psi(0.0) == 0.0);
  CHECK(p.psi(1.0) == doctest::Approx(1.0));
  CHECK(p.psi(-1.0) == doctest::Approx(-1.0));
  CHECK(p.psi(0.5) == doctest::Approx(0.6875).epsilon(1e-14));
  CHECK(integrate_sqrt_2W(p, 0.0, 0.5) == doctest::Approx(0.6875).epsilon(1e-12));
  // clamped beyond the wells
  CHECK(p.psi(1.0 + 1e-6) == doctest::Approx(1.0));
  double prev = -2.0;
  for (int i = -50; i <= 50; ++i) {
    const double v = p.psi(i / 50.0);
    CHECK(v > prev);
    CHECK(std::abs(v) <= 1.0 + 1e-15);
    prev = v;
  }
}

TEST_CASE("profile of the standard potential matches tanh(3s/2)") {
  const PotentialSpec p = make_standard_potential();
  const ProfileTable t = solve_profile(p);
  CHECK(t.value(0.0) == 0.0);
  CHECK(std::abs(t.value(1.0) - kTanh1p5) < 1e-8);
  CHECK(1.0 - t.value(5.0) == doctest::Approx(kTail5).epsilon(1e-4));
  CHECK(1.0 - t.value(5.0) <= std::exp(-6.0));
  double worst = 0.0;
  for (int i = -1600; i <= 1600; ++i) {
    const double s = i / 200.0;
    worst = std::max(worst, std::abs(t.value(s) - std::tanh(1.5 * s)));
  }
  CHECK(worst < 1e-8);
  CHECK(t.value(9.0) == 1.0);
  CHECK(t.value(-9.0) == -1.0);
}

TEST_CASE("profile table invariants") {
  for (const auto& name : shipped_potential_names()) {
    CAPTURE(name);
    const PotentialSpec p = potential_by_name(name);
    CHECK(std::abs(p.normalization() - 2.0) < 1e-8);
    const ProfileTable t = solve_profile(p, 8.0, 1025);
    const auto s = t.abscissae();
    const auto v = t.values();
    const auto d = t.derivatives();
    const std::size_t n = s.size();
    double ode = 0.0, equilibrium = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(v[i] == doctest::Approx(-v[n - 1 - i]).epsilon(1e-15));
      if (i > 0) CHECK(v[i] >= v[i - 1]);
      CHECK(d[i] >= 0.0);
      ode = std::max(ode, std::abs(d[i] - p.sqrt_2W(v[i])));
      if (i > 0 && i + 1 < n) {
        const double h = s[i + 1] - s[i];
        const double second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        equilibrium = std::max(equilibrium, std::abs(second - p.dW(v[i])));
      }
    }
    CHECK(ode <= 1e-8);
    CHECK(equilibrium < 1e-3);
    CHECK(t.integration_error() < 1e-8);
  }
}

TEST_CASE("sextic potential uses the tabulated psi") {
  const PotentialSpec p = potential_by_name("sextic");
  CHECK_FALSE(p.closed_form_psi());
  CHECK(p.psi(1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(p.psi(0.3) == doctest::Approx(integrate_sqrt_2W(p, 0.0, 0.3)).epsilon(1e-5));
  CHECK(p.psi(-0.3) == doctest::Approx(-p.psi(0.3)).epsilon(1e-12));
}

TEST_CASE("invalid potentials are rejected") {
  CHECK_THROWS_AS(potential_by_name("nosuch"), std::invalid_argument);
  // W(1) != 0
  CHECK_THROWS_AS(PotentialSpec::polynomial({1.0, 0.0, -0.5}), std::invalid_argument);
  // not even
  CHECK_THROWS_AS(PotentialSpec::polynomial({1.125, 0.1, -2.25, -0.1, 1.125}), std::invalid_argument);
  // wrong normalization unless rescaled
  CHECK_THROWS_AS(PotentialSpec::polynomial({1.0, 0.0, -2.0, 0.0, 1.0}), std::invalid_argument);
  const PotentialSpec q = PotentialSpec::polynomial({1.0, 0.0, -2.0, 0.0, 1.0}, "rescaled", true);
  CHECK(q.W(0.0) == doctest::Approx(1.125));
}

TEST_CASE("profile preconditions") {
  const PotentialSpec p = make_standard_potential();
  CHECK_THROWS_AS(solve_profile(p, 4.0, 2049), std::invalid_argument);
  CHECK_THROWS_AS(solve_profile(p, 8.0, 10), std::invalid_argument);
}
