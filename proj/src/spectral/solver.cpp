#include "difftrio/spectral/solver.hpp"

#include "difftrio/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

namespace difftrio::spectral {

TauClosure::TauClosure(std::size_t n) : n_(n) {
  if (n < 2) throw ConfigurationError("Tau closure needs order n >= 2");
  const auto rows = static_cast<Eigen::Index>(n + 1);
  const auto free = static_cast<Eigen::Index>(n - 1);
  const double s = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
  p_ = Eigen::MatrixXd::Zero(rows, free);
  q_ = Eigen::MatrixXd::Zero(rows, 2);
  p_.topRows(free).setIdentity();
  // a_n = ((right - S_e) + s (left - S_a)) / 2, a_{n-1} = ((right - S_e) - s (left - S_a)) / 2
  for (Eigen::Index i = 0; i < free; ++i) {
    const double alt = (i % 2 == 0) ? 1.0 : -1.0;
    p_(rows - 1, i) = -0.5 * (1.0 + s * alt);
    p_(rows - 2, i) = -0.5 * (1.0 - s * alt);
  }
  q_(rows - 1, 0) = 0.5 * s;
  q_(rows - 1, 1) = 0.5;
  q_(rows - 2, 0) = -0.5 * s;
  q_(rows - 2, 1) = 0.5;
}

Coefficients TauClosure::expand(const Eigen::VectorXd& reduced, double left, double right) const {
  if (reduced.size() != static_cast<Eigen::Index>(n_ - 1)) throw ContractError("reduced state has wrong size");
  return p_ * reduced + q_ * Eigen::Vector2d(left, right);
}

TauLinearSystem assemble_tau_linear(double fo_mapped, std::size_t n, double u_left, double u_right) {
  const TauClosure closure(n);
  const auto free = static_cast<Eigen::Index>(n - 1);
  const Eigen::MatrixXd d2_top = second_derivative_operator(n).topRows(free);
  TauLinearSystem sys;
  sys.a = fo_mapped * d2_top * closure.p();
  sys.b = fo_mapped * d2_top * closure.q() * Eigen::Vector2d(u_left, u_right);
  return sys;
}

NonlinearTauRhs::NonlinearTauRhs(std::size_t n, std::size_t quadrature_nodes, double fo_mapped,
                                 core::ScaledConstitutive law)
    : closure_(n),
      grid_(GaussGrid::make(quadrature_nodes == 0 ? 2 * n : quadrature_nodes)),
      fo_mapped_(fo_mapped),
      law_(std::move(law)) {
  if (grid_.size() < n + 1) throw ConfigurationError("nonlinear projection needs at least n + 1 nodes");
  value_op_ = basis_matrix(grid_.nodes, n);
  first_op_ = value_op_ * first_derivative_operator(n);
  second_op_ = value_op_ * second_derivative_operator(n);
  const auto free = static_cast<Eigen::Index>(n - 1);
  const double m = static_cast<double>(grid_.size());
  project_ = value_op_.transpose().topRows(free) * (2.0 / m);
  project_.row(0) *= 0.5;
}

void NonlinearTauRhs::operator()(const Eigen::VectorXd& reduced, double left, double right,
                                 Eigen::VectorXd& out) const {
  const Coefficients a = closure_.expand(reduced, left, right);
  const Eigen::VectorXd v = value_op_ * a;
  const Eigen::VectorXd vx = first_op_ * a;
  const Eigen::VectorXd vxx = second_op_ * a;
  Eigen::VectorXd f(v.size());
  for (Eigen::Index q = 0; q < v.size(); ++q) {
    const double kappa = law_.kappa(v[q]);
    const double xi = law_.xi(v[q]);
    if (!(kappa > 0.0) || !(xi > 0.0)) {
      const double x_star = 0.5 * (grid_.nodes[static_cast<std::size_t>(q)] + 1.0);
      throw ConstitutiveRangeError("non-positive permeability or capacity at x* = " + std::to_string(x_star),
                                   x_star);
    }
    const double nu = kappa / xi;
    const double lambda = law_.kappa_derivative(v[q]) / xi;
    f[q] = fo_mapped_ * (nu * vxx[q] + lambda * vx[q] * vx[q]);
  }
  out.noalias() = project_ * f;
}

Eigen::VectorXd NonlinearTauRhs::from_full(const Coefficients& a) const {
  return a.head(static_cast<Eigen::Index>(closure_.reduced_size()));
}

Eigen::VectorXd rhs_spectral_nonlinear(const ChebState& state, const GaussGrid& grid, double fo_mapped,
                                       const core::ScaledConstitutive& law, double left, double right) {
  state.validate();
  const NonlinearTauRhs rhs(state.order(), grid.size(), fo_mapped, law);
  Eigen::VectorXd out;
  rhs(rhs.from_full(state.a), left, right, out);
  return out;
}

core::SolutionField solve_spectral(const core::DimensionlessProblem& p, std::size_t n, const ode::ToleranceSpec& tol,
                                   std::span<const double> x_out, std::span<const double> t_out,
                                   const SpectralOptions& options) {
  p.validate();
  if (n < 2) throw ConfigurationError("spectral order must be at least 2");
  for (double x : x_out)
    if (x < -1e-12 || x > 1.0 + 1e-12) throw DomainError("output node outside the unit wall");

  const auto start = std::chrono::steady_clock::now();
  const double fo_mapped = 4.0 * p.fo;
  const bool linear = p.constitutive.is_unit();
  const TimeScheme scheme =
      options.scheme == TimeScheme::automatic ? (linear ? TimeScheme::explicit_rk : TimeScheme::stiff) : options.scheme;

  const TauClosure closure(n);
  const ChebState initial = project_initial([&](double X) { return p.initial(0.5 * (X + 1.0)); }, n);
  const Eigen::VectorXd r0 = initial.a.head(static_cast<Eigen::Index>(n - 1));

  ode::OdeSystem sys;
  sys.dimension = n - 1;
  if (linear) {
    const TauLinearSystem unit_left = assemble_tau_linear(fo_mapped, n, 1.0, 0.0);
    const TauLinearSystem unit_right = assemble_tau_linear(fo_mapped, n, 0.0, 1.0);
    sys.rhs = [a = unit_left.a, bl = unit_left.b, br = unit_right.b, &p](double t, const Eigen::VectorXd& r,
                                                                         Eigen::VectorXd& out) {
      out.noalias() = a * r;
      out += p.left(t) * bl + p.right(t) * br;
    };
  } else {
    auto rhs = std::make_shared<NonlinearTauRhs>(n, options.quadrature_nodes, fo_mapped, p.constitutive);
    sys.rhs = [rhs, &p](double t, const Eigen::VectorXd& r, Eigen::VectorXd& out) {
      (*rhs)(r, p.left(t), p.right(t), out);
    };
  }

  const ode::Trajectory traj = scheme == TimeScheme::stiff
                                   ? ode::integrate_stiff(sys, 0.0, p.horizon, r0, tol, t_out)
                                   : ode::integrate_adaptive_rk(sys, 0.0, p.horizon, r0, tol, t_out);

  core::SolutionField field;
  field.solver_id = "Spectral";
  field.units = core::Units::dimensionless;
  field.x_nodes.assign(x_out.begin(), x_out.end());
  field.t_samples = traj.times;
  std::vector<double> X(x_out.size());
  for (std::size_t j = 0; j < x_out.size(); ++j) X[j] = std::clamp(to_chebyshev_domain(x_out[j]), -1.0, 1.0);
  const Eigen::MatrixXd basis = basis_matrix(X, n);
  field.values.resize(static_cast<Eigen::Index>(traj.times.size()), static_cast<Eigen::Index>(x_out.size()));
  field.chebyshev.reserve(traj.times.size());
  for (std::size_t m = 0; m < traj.times.size(); ++m) {
    const double t = traj.times[m];
    Coefficients a = closure.expand(traj.states[m], p.left(t), p.right(t));
    field.values.row(static_cast<Eigen::Index>(m)) = (basis * a).transpose();
    field.chebyshev.push_back(std::move(a));
  }
  field.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return field;
}

}  // namespace difftrio::spectral
