#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acrel {

enum class PotentialKind { standard_quartic, polynomial };

// Symmetric double-well W with wells at +-1 and line tension int_{-1}^{1} sqrt(2W) = 2.
// Immutable after construction. Evaluations of W, sqrt(2W) and psi clamp their argument
// to [-1, 1]; the raw polynomial and its derivatives are available unclamped for the stepper.
class PotentialSpec {
 public:
  // Rejects coefficient lists that violate the double-well invariants. With normalize = true
  // the polynomial is rescaled so that the line tension is exactly 2 before validation.
  static PotentialSpec polynomial(std::vector<double> coefficients, std::string name = "polynomial",
                                  bool normalize = false);

  PotentialKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  // Ascending powers: W(s) = sum_k c_k s^k.
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  double W(double s) const noexcept;
  double dW(double s) const noexcept;
  double ddW(double s) const noexcept;

  double W_clamped(double u) const noexcept;
  double sqrt_2W(double u) const noexcept;
  // psi(u) = int_0^u sqrt(2W(s)) ds
  double psi(double u) const noexcept;

  double normalization() const noexcept { return normalization_; }
  double max_ddW_on_unit_interval() const noexcept { return max_ddW_; }
  // Empirical c in W(s) >= c min{|s-1|^2, |s+1|^2}, sampled on [-3, 3].
  double lower_bound_constant() const noexcept { return lower_bound_; }
  bool closed_form_psi() const noexcept { return kind_ == PotentialKind::standard_quartic; }

 private:
  friend PotentialSpec make_standard_potential();
  PotentialSpec() = default;
  void finalize();

  PotentialKind kind_ = PotentialKind::polynomial;
  std::string name_;
  std::vector<double> coeffs_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<double> psi_table_;
  double normalization_ = 0.0;
  double max_ddW_ = 0.0;
  double lower_bound_ = 0.0;
};

// W(s) = 9/8 (1 - s^2)^2
PotentialSpec make_standard_potential();

// "standard" or "sextic" (normalized (1 - s^2)^2 (1 + s^2)); throws std::invalid_argument otherwise.
PotentialSpec potential_by_name(std::string_view name);
std::vector<std::string> shipped_potential_names();

inline double psi(const PotentialSpec& p, double u) { return p.psi(u); }

// Quadrature of sqrt(2W) over [a, b] with composite Gauss-Legendre.
double integrate_sqrt_2W(const PotentialSpec& p, double a, double b);

// Odd equilibrium profile theta' = sqrt(2W(theta)), theta(0) = 0, sampled on [-s_max, s_max]
// and evaluated by monotone cubic Hermite interpolation; clamped to +-1 outside.
class ProfileTable {
 public:
  double value(double s) const noexcept;
  double derivative(double s) const noexcept;
  double operator()(double s) const noexcept { return value(s); }

  std::span<const double> abscissae() const noexcept { return s_; }
  std::span<const double> values() const noexcept { return theta_; }
  std::span<const double> derivatives() const noexcept { return dtheta_; }

  double s_max() const noexcept { return s_max_; }
  double spacing() const noexcept { return h_; }
  // 1 - theta(s_max): the error committed by clamping beyond the table.
  double tail_bound() const noexcept { return tail_bound_; }
  // Step-doubling estimate of the integration error.
  double integration_error() const noexcept { return integration_error_; }

 private:
  friend ProfileTable solve_profile(const PotentialSpec&, double, std::size_t);

  std::vector<double> s_;
  std::vector<double> theta_;
  std::vector<double> dtheta_;
  std::vector<double> slopes_;  // limited Hermite slopes on the non-negative half
  std::size_t half_ = 0;        // samples on [0, s_max]
  double h_ = 0.0;
  double s_max_ = 0.0;
  double tail_bound_ = 0.0;
  double integration_error_ = 0.0;
};

// n_samples counts points on [0, s_max]; requires s_max >= 5 and n_samples >= 64.
ProfileTable solve_profile(const PotentialSpec& p, double s_max = 8.0, std::size_t n_samples = 2049);

}  // namespace acrel
