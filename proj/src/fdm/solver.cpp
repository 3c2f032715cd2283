#include "difftrio/fdm/solver.hpp"

#include "difftrio/errors.hpp"

#include <chrono>
#include <string>

namespace difftrio::fdm {

FdmGrid FdmGrid::uniform(std::size_t n_cells) {
  if (n_cells < 2) throw ConfigurationError("finite-difference grid needs at least two cells");
  FdmGrid g;
  g.n_cells = n_cells;
  g.dx = 1.0 / static_cast<double>(n_cells);
  g.nodes.resize(n_cells + 1);
  for (std::size_t j = 0; j <= n_cells; ++j) g.nodes[j] = static_cast<double>(j) / static_cast<double>(n_cells);
  return g;
}

namespace {

void check_sizes(std::span<const double> state, const FdmGrid& grid, std::span<double> out) {
  if (state.size() != grid.interior_size() || out.size() != state.size())
    throw ContractError("state size does not match the interior of the grid");
}

}  // namespace

void rhs_linear_heat(std::span<const double> state, double fo, const FdmGrid& grid, double u_left, double u_right,
                     std::span<double> out) {
  check_sizes(state, grid, out);
  const std::size_t n = state.size();
  const double coef = fo / (grid.dx * grid.dx);
  for (std::size_t j = 0; j < n; ++j) {
    const double west = j == 0 ? u_left : state[j - 1];
    const double east = j + 1 == n ? u_right : state[j + 1];
    out[j] = coef * (west - 2.0 * state[j] + east);
  }
}

void rhs_nonlinear_moisture(std::span<const double> state, double fo, const FdmGrid& grid,
                            const core::ScaledConstitutive& law, double v_left, double v_right,
                            std::span<double> out) {
  check_sizes(state, grid, out);
  const std::size_t n = state.size();
  const double coef = fo / (grid.dx * grid.dx);
  double west = v_left;
  double kappa_west = law.kappa(0.5 * (v_left + state[0]));
  for (std::size_t j = 0; j < n; ++j) {
    const double v = state[j];
    const double east = j + 1 == n ? v_right : state[j + 1];
    const double kappa_east = law.kappa(0.5 * (v + east));
    const double xi = law.xi(v);
    if (!(xi > 0.0)) {
      const double x = grid.nodes[j + 1];
      throw ConstitutiveRangeError("non-positive moisture capacity at x* = " + std::to_string(x), x);
    }
    out[j] = coef * (kappa_east * (east - v) - kappa_west * (v - west)) / xi;
    west = v;
    kappa_west = kappa_east;
  }
}

core::SolutionField solve_fdm(const core::DimensionlessProblem& p, const FdmGrid& grid, const ode::ToleranceSpec& tol,
                              std::span<const double> t_out) {
  p.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = grid.interior_size();
  const bool linear = p.constitutive.is_unit();

  ode::OdeSystem sys;
  sys.dimension = n;
  sys.rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    const std::span<const double> state(y.data(), n);
    const std::span<double> out(dydt.data(), n);
    if (linear)
      rhs_linear_heat(state, p.fo, grid, p.left(t), p.right(t), out);
    else
      rhs_nonlinear_moisture(state, p.fo, grid, p.constitutive, p.left(t), p.right(t), out);
  };

  Eigen::VectorXd y0(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) y0[static_cast<Eigen::Index>(j)] = p.initial(grid.nodes[j + 1]);

  const ode::Trajectory traj = ode::integrate_adaptive_rk(sys, 0.0, p.horizon, y0, tol, t_out);

  core::SolutionField field;
  field.solver_id = "FDM";
  field.units = core::Units::dimensionless;
  field.x_nodes = grid.nodes;
  field.t_samples = traj.times;
  field.values.resize(static_cast<Eigen::Index>(traj.times.size()), static_cast<Eigen::Index>(grid.nodes.size()));
  for (std::size_t m = 0; m < traj.times.size(); ++m) {
    const auto row = static_cast<Eigen::Index>(m);
    const double t = traj.times[m];
    field.values(row, 0) = p.left(t);
    field.values.row(row).segment(1, static_cast<Eigen::Index>(n)) = traj.states[m].transpose();
    field.values(row, static_cast<Eigen::Index>(n + 1)) = p.right(t);
  }
  field.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return field;
}

}  // namespace difftrio::fdm
