#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "acrel/geometry.hpp"
#include "acrel/grid.hpp"
#include "acrel/kernels.hpp"
#include "acrel/potential.hpp"

namespace acrel {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Every functional evaluated on one snapshot. The first thirteen members are the CSV row.
struct EntropyBreakdown {
  double t = 0.0;
  double gl_energy = 0.0;
  double dissipation = 0.0;
  double rel_entropy = 0.0;
  double equipartition_defect = 0.0;
  double misalignment = 0.0;
  double tilt_excess = 0.0;
  double dist_weighted_energy = 0.0;
  double defect_sq_curvature = 0.0;
  double defect_sq_velocity = 0.0;
  double err_L1 = 0.0;
  double err_weighted = 0.0;
  double identity_residual = kNaN;

  // Right-hand side of the entropy evolution identity at t, and the centred dE/dt it is compared to.
  double identity_rhs = kNaN;
  double rel_entropy_rate = kNaN;
  double grad_psi_mass = 0.0;
  double psi_min = 0.0;
  double psi_max = 0.0;
  std::size_t young_violations = 0;
  std::size_t clamped = 0;
};

inline constexpr std::array<const char*, 13> kDiagnosticColumns = {
    "t",           "gl_energy",           "dissipation",        "rel_entropy",        "equipartition_defect",
    "misalignment", "tilt_excess",        "dist_weighted_energy", "defect_sq_curvature", "defect_sq_velocity",
    "err_L1",      "err_weighted",        "identity_residual"};

std::array<double, 13> csv_row(const EntropyBreakdown& b);

struct DiagnosticContext {
  const PotentialSpec& potential;
  double epsilon;
  const InterfaceTrajectory& trajectory;
  CutoffSpec cutoff;
  double s0;  // scale of the weight tau(dist/s0) in err_weighted
  kernels::Exec exec = kernels::Exec::parallel;
};

// Pointwise fields derived from a snapshot. Vectors are in R^d; on radial grids they point along
// the first axis, matching Grid::point.
struct DerivedFields {
  std::vector<Vec3> grad_u;
  std::vector<double> grad_norm;
  std::vector<Vec3> normal;  // grad u / |grad u|, or e_1 below the gradient floor
  std::vector<double> laplacian;
  std::vector<double> psi;
  std::vector<double> grad_psi_norm;
  std::vector<Vec3> curvature;  // H_eps
  std::vector<double> chi;      // cell average of the exact phase indicator
  double gradient_floor = 0.0;
};

// Average of chi = sign(dist) over each grid cell: exact on radial shells and for planes in 1-D,
// sub-sampled in 2-D cells the interface crosses. Since |psi| <= 1, |psi - chi| = 1 - psi chi is
// linear in chi, so this removes the O(h) error of sampling the jump at cell centres.
std::vector<double> cell_average_indicator(const InterfaceTrajectory& traj, const Grid& grid, double t);

DerivedFields derive_fields(const ScalarField& u, const DiagnosticContext& ctx, double t);

// (1/2) sum over cell faces of (jump of u)^2 / h times the face area: the energy whose gradient is the
// finite-volume Laplacian used by the stepper.
double dirichlet_energy(const ScalarField& u, kernels::Exec exec = kernels::Exec::parallel);

// Ginzburg-Landau energy with the face-difference gradient term, so that the semi-discrete flow
// satisfies dE/dt = -D exactly. E[u|I] and the coercivity integrals use nodal central gradients,
// since their pointwise inequalities need one |grad u| shared by every term.
double gl_energy(const ScalarField& u, double eps, const PotentialSpec& p,
                 kernels::Exec exec = kernels::Exec::parallel);
double dissipation(const ScalarField& u, double eps, const PotentialSpec& p,
                   kernels::Exec exec = kernels::Exec::parallel);

// Relative entropy with all coercivity integrals, curvature/velocity defects and interface errors.
// With with_identity the right-hand side of the evolution identity is assembled as well.
EntropyBreakdown relative_entropy(const ScalarField& u, const DiagnosticContext& ctx, double t,
                                  bool with_identity = false);

// Assembled right-hand side of d/dt E[u|I] (all eight integral groups).
double identity_rhs(const ScalarField& u, const DiagnosticContext& ctx, double t);

struct InterfaceErrors {
  double l1 = 0.0;
  double weighted = 0.0;
};
InterfaceErrors interface_errors(const ScalarField& u, double eps, const PotentialSpec& p,
                                 const InterfaceTrajectory& traj, double t, double s0);

// Monotone C^2 truncation of the identity: tau(s) = s on |s| <= 1/2, quintic blend to sign(s) at |s| = 1.
double tau(double s);
double tau_prime(double s);

struct CoercivityItem {
  std::string name;
  double lhs = 0.0;
  double bound = 0.0;
  bool ok = true;
};

struct CoercivityReport {
  std::array<CoercivityItem, 4> items;  // control_a .. control_d
  double distance_constant = 0.0;       // C(I) used for control_d
  bool pass = true;                     // control_a..c
  bool distance_flagged = false;        // control_d exceeded (flagged, not failed)
  std::string describe() const;
};

inline constexpr double kCoercivitySlack = 1.1;
// Absolute floor absorbing rounding when E[u|I] is at machine-zero.
inline constexpr double kQuadratureFloor = 1e-10;

CoercivityReport coercivity_check(const EntropyBreakdown& b, const CutoffSpec& cutoff,
                                  double slack = kCoercivitySlack);

// Second-order derivative at t1 from three samples with possibly unequal spacing.
double centered_derivative(double t0, double f0, double t1, double f1, double t2, double f2);

struct IdentityCheck {
  double rate = 0.0;  // centred dE/dt
  double rhs = 0.0;
  double residual = 0.0;
};

IdentityCheck entropy_identity_residual(const ScalarField& prev, double t_prev, const ScalarField& mid, double t_mid,
                                        const ScalarField& next, double t_next, const DiagnosticContext& ctx);

}  // namespace acrel
