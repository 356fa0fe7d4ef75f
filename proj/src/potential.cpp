#include "acrel/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "acrel/error.hpp"
#include "quadrature.hpp"

namespace acrel {

namespace {

constexpr std::size_t kPsiNodes = 1024;

double horner(std::span<const double> c, double s) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * s + *it;
  return r;
}

std::vector<double> differentiate(std::span<const double> c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

double clamp_unit(double u) { return std::clamp(u, -1.0, 1.0); }

}  // namespace

double PotentialSpec::W(double s) const noexcept { return horner(coeffs_, s); }
double PotentialSpec::dW(double s) const noexcept { return horner(d1_, s); }
double PotentialSpec::ddW(double s) const noexcept { return horner(d2_, s); }

double PotentialSpec::W_clamped(double u) const noexcept { return std::max(0.0, W(clamp_unit(u))); }

double PotentialSpec::sqrt_2W(double u) const noexcept { return std::sqrt(2.0 * W_clamped(u)); }

double PotentialSpec::psi(double u) const noexcept {
  const double v = clamp_unit(u);
  if (kind_ == PotentialKind::standard_quartic) return 1.5 * (v - v * v * v / 3.0);
  const double pos = (v + 1.0) * 0.5 * static_cast<double>(kPsiNodes - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), kPsiNodes - 2);
  const double frac = pos - static_cast<double>(k);
  return psi_table_[k] + frac * (psi_table_[k + 1] - psi_table_[k]);
}

double integrate_sqrt_2W(const PotentialSpec& p, double a, double b) {
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * 256.0)));
  return detail::composite_gauss([&](double s) { return p.sqrt_2W(s); }, a, b, panels);
}

void PotentialSpec::finalize() {
  d1_ = differentiate(coeffs_);
  d2_ = differentiate(d1_);
  normalization_ = integrate_sqrt_2W(*this, -1.0, 1.0);

  max_ddW_ = 0.0;
  for (int i = 0; i <= 2000; ++i) max_ddW_ = std::max(max_ddW_, std::abs(ddW(-1.0 + i * 1e-3)));

  lower_bound_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 6000; ++i) {
    const double s = -3.0 + i * 1e-3 + 0.5e-3;
    const double well = std::min((s - 1.0) * (s - 1.0), (s + 1.0) * (s + 1.0));
    lower_bound_ = std::min(lower_bound_, W(s) / well);
  }

  psi_table_.assign(kPsiNodes, 0.0);
  if (kind_ != PotentialKind::standard_quartic) {
    const double step = 2.0 / static_cast<double>(kPsiNodes - 1);
    psi_table_[0] = -0.5 * normalization_;
    for (std::size_t k = 1; k < kPsiNodes; ++k) {
      const double a = -1.0 + static_cast<double>(k - 1) * step;
      psi_table_[k] = psi_table_[k - 1] +
                      detail::composite_gauss([&](double s) { return sqrt_2W(s); }, a, a + step, 1);
    }
  }
}

PotentialSpec make_standard_potential() {
  PotentialSpec p;
  p.kind_ = PotentialKind::standard_quartic;
  p.name_ = "standard";
  p.coeffs_ = {9.0 / 8.0, 0.0, -9.0 / 4.0, 0.0, 9.0 / 8.0};
  p.finalize();
  return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coefficients, std::string name, bool normalize) {
  while (coefficients.size() > 1 && coefficients.back() == 0.0) coefficients.pop_back();
  if (coefficients.size() < 3) throw std::invalid_argument("potential '" + name + "': need degree >= 2");

  PotentialSpec p;
  p.kind_ = PotentialKind::polynomial;
  p.name_ = std::move(name);
  p.coeffs_ = std::move(coefficients);

  if (normalize) {
    const double tension = integrate_sqrt_2W(p, -1.0, 1.0);
    if (!(tension > 0.0)) throw std::invalid_argument("potential '" + p.name_ + "': cannot normalize");
    const double scale = 2.0 / tension;
    for (double& c : p.coeffs_) c *= scale * scale;
  }
  p.finalize();

  std::vector<std::string> problems;
  const double scale = std::max(1.0, std::abs(p.W(0.0)));
  if (std::abs(p.W(1.0)) > 1e-12 * scale || std::abs(p.W(-1.0)) > 1e-12 * scale)
    problems.push_back("W(+-1) must vanish");
  for (int i = 1; i < 2000; ++i) {
    const double s = -1.0 + i * 1e-3;
    if (!(p.W(s) > 0.0)) {
      problems.push_back("W must be positive on (-1, 1)");
      break;
    }
  }
  for (int i = 0; i <= 300; ++i) {
    const double s = i * 0.01;
    if (std::abs(p.W(s) - p.W(-s)) > 1e-12 * std::max(1.0, std::abs(p.W(s)))) {
      problems.push_back("W must be even");
      break;
    }
  }
  if (std::abs(p.normalization_ - 2.0) > 1e-8) problems.push_back("int sqrt(2W) over [-1,1] must equal 2");
  if (!(p.lower_bound_ > 1e-8)) problems.push_back("wells must be non-degenerate (quadratic growth)");

  if (!problems.empty()) {
    std::string msg = "potential '" + p.name_ + "' rejected:";
    for (const auto& s : problems) msg += " " + s + ";";
    throw std::invalid_argument(msg);
  }
  return p;
}

PotentialSpec potential_by_name(std::string_view name) {
  if (name == "standard") return make_standard_potential();
  if (name == "sextic") return PotentialSpec::polynomial({1.0, 0.0, -1.0, 0.0, -1.0, 0.0, 1.0}, "sextic", true);
  throw std::invalid_argument("unknown potential '" + std::string(name) + "'");
}

std::vector<std::string> shipped_potential_names() { return {"standard", "sextic"}; }

// ---------------------------------------------------------------------------
// Profile

namespace {

template <class F>
double rk4_advance(F&& rhs, double y, double h, std::size_t steps) {
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1 = rhs(y);
    const double k2 = rhs(y + 0.5 * h * k1);
    const double k3 = rhs(y + 0.5 * h * k2);
    const double k4 = rhs(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

ProfileTable solve_profile(const PotentialSpec& p, double s_max, std::size_t n_samples) {
  if (!(s_max >= 5.0)) throw std::invalid_argument("solve_profile: s_max must be >= 5");
  if (n_samples < 64) throw std::invalid_argument("solve_profile: n_samples must be >= 64");

  ProfileTable t;
  t.half_ = n_samples;
  t.s_max_ = s_max;
  t.h_ = s_max / static_cast<double>(n_samples - 1);

  const auto rhs = [&](double y) { return p.sqrt_2W(y); };
  const auto sub = static_cast<std::size_t>(std::ceil(t.h_ / 1e-3));

  std::vector<double> half(n_samples, 0.0);
  double coarse = 0.0, fine = 0.0, err = 0.0;
  for (std::size_t i = 1; i < n_samples; ++i) {
    coarse = rk4_advance(rhs, coarse, t.h_ / static_cast<double>(sub), sub);
    fine = rk4_advance(rhs, fine, t.h_ / static_cast<double>(2 * sub), 2 * sub);
    err = std::max(err, std::abs(coarse - fine));
    half[i] = std::min(fine, 1.0);
    // Keep both chains on the same trajectory so the estimate stays local.
    coarse = fine;
  }
  t.integration_error_ = err;
  if (err > 1e-10) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", err);
    throw ProfileError(std::string("profile ODE did not converge (step-doubling error ") + buf + ")");
  }
  for (std::size_t i = 1; i < n_samples; ++i)
    if (half[i] < half[i - 1]) throw ProfileError("profile is not monotone; malformed potential");
  t.tail_bound_ = 1.0 - half.back();
  if (t.tail_bound_ > 1e-3) throw ProfileError("profile does not approach the wells within s_max");

  const std::size_t total = 2 * n_samples - 1;
  t.s_.resize(total);
  t.theta_.resize(total);
  t.dtheta_.resize(total);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) * t.h_;
    const double d = rhs(half[i]);
    // mirrored half first, so the centre sample keeps +0
    t.s_[n_samples - 1 - i] = -s;
    t.theta_[n_samples - 1 - i] = -half[i];
    t.dtheta_[n_samples - 1 - i] = d;
    t.s_[n_samples - 1 + i] = s;
    t.theta_[n_samples - 1 + i] = half[i];
    t.dtheta_[n_samples - 1 + i] = d;
  }

  // Fritsch-Carlson limiting of the exact slopes; rarely active at useful resolutions.
  t.slopes_.assign(n_samples, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) t.slopes_[i] = rhs(half[i]);
  for (std::size_t i = 0; i + 1 < n_samples; ++i) {
    const double secant = (half[i + 1] - half[i]) / t.h_;
    if (secant <= 0.0) {
      t.slopes_[i] = t.slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = t.slopes_[i] / secant, b = t.slopes_[i + 1] / secant;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      t.slopes_[i] = tau * a * secant;
      t.slopes_[i + 1] = tau * b * secant;
    }
  }
  return t;
}

double ProfileTable::value(double s) const noexcept {
  const double a = std::abs(s);
  if (a >= s_max_) return s < 0 ? -1.0 : 1.0;
  const auto i = std::min(static_cast<std::size_t>(a / h_), half_ - 2);
  const double x = (a - static_cast<double>(i) * h_) / h_;
  const double y0 = theta_[half_ - 1 + i], y1 = theta_[half_ + i];
  const double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;
  const double x2 = x * x, x3 = x2 * x;
  const double v = (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * y1 + (x3 - x2) * m1;
  return s < 0 ? -v : v;
}

double ProfileTable::derivative(double s) const noexcept {
  const double a = std::abs(s);
  if (a >= s_max_) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(a / h_), half_ - 2);
  const double x = (a - static_cast<double>(i) * h_) / h_;
  const double y0 = theta_[half_ - 1 + i], y1 = theta_[half_ + i];
  const double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;
  const double x2 = x * x;
  const double dv = (6 * x2 - 6 * x) * y0 + (3 * x2 - 4 * x + 1) * m0 + (-6 * x2 + 6 * x) * y1 + (3 * x2 - 2 * x) * m1;
  return dv / h_;
}

}  // namespace acrel
