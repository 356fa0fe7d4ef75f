#include "acrel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acrel {

namespace {

Vec3 gradient_at(const DerivedFields& f, std::size_t i) { return f.grad_u[i]; }

double chi_of(double dist) { return dist > 0.0 ? 1.0 : (dist < 0.0 ? -1.0 : 0.0); }

// Gradient and Laplacian of u packed as vectors in R^d.
void differentiate(const ScalarField& u, kernels::Exec exec, std::vector<Vec3>& grad, std::vector<double>& lap) {
  const Grid& g = *u.grid;
  const std::size_t n = g.size();
  std::vector<double> gx(n, 0.0), gy(n, 0.0);
  lap.assign(n, 0.0);
  kernels::gradient(exec, g, u.values, gx, gy);
  kernels::laplacian(exec, g, u.values, lap);
  grad.assign(n, Vec3{});
  for (std::size_t i = 0; i < n; ++i) {
    grad[i][0] = gx[i];
    grad[i][1] = gy[i];
  }
}

}  // namespace

double dirichlet_energy(const ScalarField& u, kernels::Exec exec) {
  const Grid& g = *u.grid;
  const std::size_t n = g.n();
  const double h = g.h();
  const auto& v = u.values;
  if (g.is_radial()) {
    const auto faces = g.face_areas();
    const auto r = kernels::reduce<1>(exec, n - 1, [&](std::size_t i, std::array<double, 1>& a) {
      const double d = v[i + 1] - v[i];
      a[0] += faces[i] * d * d / h;
    });
    return 0.5 * r[0];
  }
  if (g.dim() == 1) {
    const auto r = kernels::reduce<1>(exec, n - 1, [&](std::size_t i, std::array<double, 1>& a) {
      const double d = v[i + 1] - v[i];
      a[0] += d * d / h;
    });
    return 0.5 * r[0];
  }
  // 2-D: each cell contributes its east and north faces, (du/h)^2 times the face-centred area h^2.
  const auto r = kernels::reduce<1>(exec, g.size(), [&](std::size_t idx, std::array<double, 1>& a) {
    const std::size_t ix = idx % n, iy = idx / n;
    if (ix + 1 < n) {
      const double d = v[idx + 1] - v[idx];
      a[0] += d * d;
    }
    if (iy + 1 < n) {
      const double d = v[idx + n] - v[idx];
      a[0] += d * d;
    }
  });
  return 0.5 * r[0];
}

std::vector<double> cell_average_indicator(const InterfaceTrajectory& traj, const Grid& grid, double t) {
  const std::size_t n = grid.size();
  const double h = grid.h();
  std::vector<double> chi(n);
  if (grid.is_radial()) {
    const double R = traj.radius(t);
    const int d = grid.dim();
    auto ball = [d](double r) { return std::pow(r, d); };
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid.coordinate(i);
      const double a = std::max(0.0, r - 0.5 * h), b = std::min(grid.L(), r + 0.5 * h);
      const double inner = ball(std::clamp(R, a, b)) - ball(a);
      const double total = ball(b) - ball(a);
      chi[i] = (2.0 * inner - total) / total;
    }
    return chi;
  }
  constexpr int kSub = 16;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = grid.point(i);
    const double dist = traj.signed_distance(x, t);
    if (std::abs(dist) >= h) {
      chi[i] = chi_of(dist);
    } else if (grid.dim() == 1) {
      // Planes in 1-D: dist is affine with slope +-1 across the cell.
      chi[i] = std::clamp(2.0 * dist / h, -1.0, 1.0);
    } else {
      double sum = 0.0;
      for (int a = 0; a < kSub; ++a)
        for (int b = 0; b < kSub; ++b) {
          Vec3 y = x;
          y[0] += h * ((a + 0.5) / kSub - 0.5);
          y[1] += h * ((b + 0.5) / kSub - 0.5);
          sum += chi_of(traj.signed_distance(y, t));
        }
      chi[i] = sum / (kSub * kSub);
    }
  }
  return chi;
}

std::array<double, 13> csv_row(const EntropyBreakdown& b) {
  return {b.t,           b.gl_energy,   b.dissipation,          b.rel_entropy,         b.equipartition_defect,
          b.misalignment, b.tilt_excess, b.dist_weighted_energy, b.defect_sq_curvature, b.defect_sq_velocity,
          b.err_L1,      b.err_weighted, b.identity_residual};
}

DerivedFields derive_fields(const ScalarField& u, const DiagnosticContext& ctx, double t) {
  const Grid& g = *u.grid;
  const std::size_t n = g.size();
  const PotentialSpec& p = ctx.potential;
  const double eps = ctx.epsilon;
  DerivedFields f;
  differentiate(u, ctx.exec, f.grad_u, f.laplacian);
  f.grad_norm.resize(n);
  double gmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.grad_norm[i] = norm(f.grad_u[i]);
    gmax = std::max(gmax, f.grad_norm[i]);
  }
  f.gradient_floor = 1e-12 * (gmax + 1.0);
  f.normal.resize(n);
  f.psi.resize(n);
  f.grad_psi_norm.resize(n);
  f.curvature.resize(n);
  f.chi = cell_average_indicator(ctx.trajectory, g, t);
  for (std::size_t i = 0; i < n; ++i) {
    const double gn = f.grad_norm[i];
    f.normal[i] = gn < f.gradient_floor ? unit_vector(0) : (1.0 / gn) * gradient_at(f, i);
    const double v = u.values[i];
    f.psi[i] = p.psi(v);
    f.grad_psi_norm[i] = p.sqrt_2W(v) * gn;
    const double mu = eps * f.laplacian[i] - p.dW(v) / eps;
    f.curvature[i] = (-mu) * f.normal[i];
  }
  return f;
}

double gl_energy(const ScalarField& u, double eps, const PotentialSpec& p, kernels::Exec exec) {
  const auto w = u.grid->weights();
  const auto r = kernels::reduce<1>(exec, u.size(), [&](std::size_t i, std::array<double, 1>& acc) {
    acc[0] += w[i] * p.W_clamped(u.values[i]);
  });
  return eps * dirichlet_energy(u, exec) + r[0] / eps;
}

double dissipation(const ScalarField& u, double eps, const PotentialSpec& p, kernels::Exec exec) {
  std::vector<double> lap(u.size());
  kernels::laplacian(exec, *u.grid, u.values, lap);
  const auto w = u.grid->weights();
  const auto r = kernels::reduce<1>(exec, u.size(), [&](std::size_t i, std::array<double, 1>& acc) {
    const double mu = eps * lap[i] - p.dW(u.values[i]) / eps;
    acc[0] += w[i] * mu * mu / eps;
  });
  return r[0];
}

EntropyBreakdown relative_entropy(const ScalarField& u, const DiagnosticContext& ctx, double t, bool with_identity) {
  const Grid& g = *u.grid;
  const std::size_t n = g.size();
  const PotentialSpec& p = ctx.potential;
  const double eps = ctx.epsilon;
  const double sqrt_eps = std::sqrt(eps);
  const auto w = g.weights();
  const DerivedFields f = derive_fields(u, ctx, t);

  enum : std::size_t {
    kDiss, kRel, kEqui, kMis, kTilt, kDistW, kCurv, kVel, kL1, kWeighted, kPsiMass, kYoung, kRhs, kCount
  };
  const auto acc = kernels::reduce<kCount>(ctx.exec, n, [&](std::size_t i, std::array<double, kCount>& a) {
    const double v = u.values[i];
    const double wi = w[i];
    const double gn = f.grad_norm[i];
    const double W = p.W_clamped(v);
    const double s2W = p.sqrt_2W(v);
    const double gp = f.grad_psi_norm[i];
    const double e = 0.5 * eps * gn * gn + W / eps;
    const double mu = eps * f.laplacian[i] - p.dW(v) / eps;
    const Vec3& nrm = f.normal[i];
    const Vec3& He = f.curvature[i];
    const ExtendedFields x = extended_fields(ctx.trajectory, ctx.cutoff, g.point(i), t);
    const Vec3 tilt = nrm - x.xi;
    const double tilt2 = dot(tilt, tilt);
    const double equi = sqrt_eps * gn - s2W / sqrt_eps;
    const double d2 = std::min(x.signed_dist * x.signed_dist, 1.0);
    const Vec3 dcurv = He - (eps * gn) * x.curvature;
    const double dvel = dot(nrm, He) + x.div_xi * s2W;

    a[kDiss] += wi * mu * mu / eps;
    a[kRel] += wi * (e - dot(x.xi, nrm) * gp);
    a[kEqui] += wi * equi * equi;
    a[kMis] += wi * tilt2 * gp;
    a[kTilt] += wi * tilt2 * eps * gn * gn;
    a[kDistW] += wi * d2 * e;
    a[kCurv] += wi * dot(dcurv, dcurv) / (4.0 * eps);
    a[kVel] += wi * dvel * dvel / (4.0 * eps);
    a[kL1] += wi * (1.0 - f.psi[i] * f.chi[i]);
    a[kWeighted] += wi * (f.chi[i] - f.psi[i]) * tau(x.signed_dist / ctx.s0);
    a[kPsiMass] += wi * gp;
    const double young_lhs = eps * gn * gn;
    const double young_rhs = 2.0 * gp + 2.0 * equi * equi;
    if (young_lhs > young_rhs + 1e-12 * (young_lhs + young_rhs + 1.0)) a[kYoung] += 1.0;

    if (with_identity) {
      const Vec3& HI = x.curvature;
      const Mat3& J = x.grad_curvature;
      const double divH = x.div_curvature;
      const double divxi = x.div_xi;
      const double eg2 = eps * gn * gn;
      const Vec3 advected = x.dt_xi + apply(x.grad_xi, HI);
      double rhs = 0.0;
      rhs -= dot(dcurv, dcurv) / (2.0 * eps);
      rhs -= dvel * dvel / (2.0 * eps);
      rhs += 0.5 * dot(HI, HI) * eg2 + divxi * divxi * W / eps + dot(HI, nrm) * divxi * gp;
      rhs += divH * (0.5 * eg2 + W / eps - gp);
      rhs -= contract(J, nrm, nrm) * (eg2 - gp);
      rhs -= contract(J, tilt, tilt) * gp;
      rhs += divH * (1.0 - dot(x.xi, nrm)) * gp;
      rhs -= gp * dot(tilt, advected + apply_transposed(J, x.xi));
      rhs -= gp * dot(x.xi, advected);
      a[kRhs] += wi * rhs;
    }
  });

  EntropyBreakdown b;
  b.t = t;
  b.gl_energy = gl_energy(u, eps, p, ctx.exec);
  b.dissipation = acc[kDiss];
  b.rel_entropy = acc[kRel];
  b.equipartition_defect = acc[kEqui];
  b.misalignment = acc[kMis];
  b.tilt_excess = acc[kTilt];
  b.dist_weighted_energy = acc[kDistW];
  b.defect_sq_curvature = acc[kCurv];
  b.defect_sq_velocity = acc[kVel];
  b.err_L1 = acc[kL1];
  b.err_weighted = acc[kWeighted];
  b.grad_psi_mass = acc[kPsiMass];
  b.young_violations = static_cast<std::size_t>(acc[kYoung]);
  if (with_identity) b.identity_rhs = acc[kRhs];
  b.psi_min = n > 0 ? *std::min_element(f.psi.begin(), f.psi.end()) : 0.0;
  b.psi_max = n > 0 ? *std::max_element(f.psi.begin(), f.psi.end()) : 0.0;
  b.clamped = u.clamp_count;
  return b;
}

double identity_rhs(const ScalarField& u, const DiagnosticContext& ctx, double t) {
  return relative_entropy(u, ctx, t, true).identity_rhs;
}

InterfaceErrors interface_errors(const ScalarField& u, double eps, const PotentialSpec& p,
                                 const InterfaceTrajectory& traj, double t, double s0) {
  (void)eps;
  const Grid& g = *u.grid;
  const auto w = g.weights();
  const std::vector<double> chi_avg = cell_average_indicator(traj, g, t);
  const auto r = kernels::reduce<2>(kernels::Exec::parallel, u.size(), [&](std::size_t i, std::array<double, 2>& a) {
    const double d = traj.signed_distance(g.point(i), t);
    const double chi = chi_avg[i];
    const double ps = p.psi(u.values[i]);
    a[0] += w[i] * (1.0 - ps * chi);
    a[1] += w[i] * (chi - ps) * tau(d / s0);
  });
  return {r[0], r[1]};
}

double tau(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return s;
  if (a >= 1.0) return std::copysign(1.0, s);
  const double q = 2.0 * (a - 0.5);
  const double q2 = q * q;
  const double blend = q + 4.0 * q2 * q - 7.0 * q2 * q2 + 3.0 * q2 * q2 * q;
  return std::copysign(0.5 + 0.5 * blend, s);
}

double tau_prime(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double q = 2.0 * (a - 0.5);
  return (1.0 - q) * (1.0 - q) * (15.0 * q * q + 2.0 * q + 1.0);
}

CoercivityReport coercivity_check(const EntropyBreakdown& b, const CutoffSpec& cutoff, double slack) {
  CoercivityReport r;
  r.distance_constant = cutoff.distance_control_constant();
  const double E = std::max(b.rel_entropy, 0.0);
  auto item = [&](const char* name, double lhs, double factor) {
    CoercivityItem it;
    it.name = name;
    it.lhs = lhs;
    it.bound = factor * E * slack + kQuadratureFloor;
    it.ok = lhs <= it.bound;
    return it;
  };
  r.items[0] = item("control_a", b.equipartition_defect, 2.0);
  r.items[1] = item("control_b", b.misalignment, 2.0);
  r.items[2] = item("control_c", b.tilt_excess, 12.0);
  r.items[3] = item("control_d", b.dist_weighted_energy, r.distance_constant);
  r.pass = r.items[0].ok && r.items[1].ok && r.items[2].ok;
  r.distance_flagged = !r.items[3].ok;
  return r;
}

std::string CoercivityReport::describe() const {
  std::ostringstream os;
  os.precision(6);
  for (const auto& it : items) {
    os << it.name << ": " << it.lhs << " <= " << it.bound;
    if (it.ok)
      os << " ok\n";
    else
      os << " VIOLATED by " << it.lhs - it.bound << (it.name == "control_d" ? " (flagged)" : "") << "\n";
  }
  return os.str();
}

double centered_derivative(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double h0 = t1 - t0, h1 = t2 - t1;
  return (-h1 / (h0 * (h0 + h1))) * f0 + ((h1 - h0) / (h0 * h1)) * f1 + (h0 / (h1 * (h0 + h1))) * f2;
}

IdentityCheck entropy_identity_residual(const ScalarField& prev, double t_prev, const ScalarField& mid, double t_mid,
                                        const ScalarField& next, double t_next, const DiagnosticContext& ctx) {
  const double e0 = relative_entropy(prev, ctx, t_prev).rel_entropy;
  const double e2 = relative_entropy(next, ctx, t_next).rel_entropy;
  const EntropyBreakdown m = relative_entropy(mid, ctx, t_mid, true);
  IdentityCheck c;
  c.rate = centered_derivative(t_prev, e0, t_mid, m.rel_entropy, t_next, e2);
  c.rhs = m.identity_rhs;
  c.residual = std::abs(c.rate - c.rhs);
  return c;
}

}  // namespace acrel
