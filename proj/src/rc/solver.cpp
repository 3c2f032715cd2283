#include "difftrio/rc/solver.hpp"

#include "difftrio/errors.hpp"
#include "difftrio/ode/integrators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace difftrio::rc {

double RcChain::total_resistance() const {
  double total = 0.0;
  for (double rl : link_resistance) total += rl;
  return total;
}

namespace {

void check_links(std::size_t r) {
  if (r < 2) throw ConfigurationError("an RC chain needs at least two resistances (one capacitive node)");
}

}  // namespace

RcChain build_chain_heat(const core::HeatMaterial& m, double length, std::size_t r) {
  check_links(r);
  m.validate();
  if (!(length > 0.0)) throw ConfigurationError("wall thickness must be positive");
  RcChain chain;
  chain.r = r;
  chain.length = length;
  chain.dx = length / static_cast<double>(r);
  chain.link_resistance.assign(r, chain.dx / m.k);
  chain.node_capacity.assign(r - 1, m.volumetric_capacity() * chain.dx);
  return chain;
}

RcChain build_chain_moisture(const core::MoistureMaterial& m, double length, std::size_t r,
                             std::span<const double> pressures) {
  check_links(r);
  if (pressures.size() != r + 1) throw ContractError("vapour chain needs r + 1 nodal pressures");
  RcChain chain;
  chain.r = r;
  chain.length = length;
  chain.dx = length / static_cast<double>(r);
  std::vector<double> half(r + 1);
  for (std::size_t j = 0; j <= r; ++j) {
    const double kappa = m.kappa(pressures[j]);
    if (!(kappa > 0.0)) {
      const double x = chain.dx * static_cast<double>(j);
      throw ConstitutiveRangeError("non-positive vapour permeability at x = " + std::to_string(x), x);
    }
    half[j] = chain.dx / (2.0 * kappa);
  }
  chain.link_resistance.resize(r);
  for (std::size_t j = 0; j < r; ++j) chain.link_resistance[j] = half[j] + half[j + 1];
  chain.node_capacity.resize(r - 1);
  for (std::size_t j = 1; j < r; ++j) chain.node_capacity[j - 1] = m.xi(pressures[j]) * chain.dx;
  return chain;
}

void rhs_rc_heat(const RcChain& chain, std::span<const double> interior, double left, double right,
                 std::span<double> out) {
  const std::size_t n = chain.node_count();
  if (interior.size() != n || out.size() != n) throw ContractError("state size does not match the chain");
  for (std::size_t j = 0; j < n; ++j) {
    const double west = j == 0 ? left : interior[j - 1];
    const double east = j + 1 == n ? right : interior[j + 1];
    const double q_in = (west - interior[j]) / chain.link_resistance[j];
    const double q_out = (interior[j] - east) / chain.link_resistance[j + 1];
    out[j] = (q_in - q_out) / chain.node_capacity[j];
  }
}

void rhs_rc_moisture(const core::MoistureMaterial& m, double length, std::size_t r, std::span<const double> interior,
                     double left, double right, std::span<double> out) {
  if (interior.size() + 1 != r) throw ContractError("state size does not match the chain");
  std::vector<double> full(r + 1);
  full.front() = left;
  full.back() = right;
  std::copy(interior.begin(), interior.end(), full.begin() + 1);
  rhs_rc_heat(build_chain_moisture(m, length, r, full), interior, left, right, out);
}

double cfl_max_step(double fo, double dx_star) {
  if (!(fo > 0.0) || !(dx_star > 0.0)) throw ConfigurationError("CFL bound needs positive fo and dx");
  return dx_star * dx_star / (2.0 * fo);
}

double moisture_max_step(const core::MoistureMaterial& m, double dx, double p_min, double p_max) {
  const double kappa_max = std::max(m.kappa(p_min), m.kappa(p_max));
  double xi_min = std::min(m.xi(p_min), m.xi(p_max));
  for (const auto& [p, xi] : m.xi_points)
    if (p > p_min && p < p_max) xi_min = std::min(xi_min, xi);
  if (!(kappa_max > 0.0) || !(xi_min > 0.0))
    throw ConstitutiveRangeError("moisture properties not positive over the pressure range", 0.0);
  return xi_min * dx * dx / (2.0 * kappa_max);
}

namespace {

double stability_limit(const core::DiffusionProblem& p, std::size_t r) {
  const double dx = p.length / static_cast<double>(r);
  if (p.physics == core::Physics::heat) {
    const auto& m = p.heat();
    return m.volumetric_capacity() * dx * dx / (2.0 * m.k);
  }
  const auto [lo, hi] = p.value_range();
  return moisture_max_step(p.moisture(), dx, lo, hi);
}

}  // namespace

double resolve_time_step(const core::DiffusionProblem& p, std::size_t r, const DtPolicy& policy) {
  check_links(r);
  const double limit = stability_limit(p, r);
  if (policy.kind == DtPolicy::Kind::automatic) {
    if (!(policy.cfl_fraction > 0.0) || policy.cfl_fraction > 1.0)
      throw ConfigurationError("CFL fraction must lie in (0, 1]");
    return policy.cfl_fraction * limit;
  }
  if (!(policy.dt > 0.0)) throw ConfigurationError("fixed time step must be positive");
  if (policy.dt > limit)
    throw StabilityError("time step " + std::to_string(policy.dt) + " s exceeds the stability limit " +
                         std::to_string(limit) + " s");
  return policy.dt;
}

std::string solver_name(std::size_t r) { return "R" + std::to_string(r) + "C"; }

core::SolutionField solve_rc(const core::DiffusionProblem& p, std::size_t r, const DtPolicy& policy,
                             std::span<const double> t_out) {
  p.validate();
  const double dt = resolve_time_step(p, r, policy);
  const auto start = std::chrono::steady_clock::now();
  const auto steps = static_cast<std::size_t>(std::ceil(p.horizon / dt * (1.0 - 1e-12)));

  ode::OdeSystem sys;
  sys.dimension = r - 1;
  if (p.physics == core::Physics::heat) {
    const RcChain chain = build_chain_heat(p.heat(), p.length, r);
    sys.rhs = [chain, &p](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
      rhs_rc_heat(chain, {y.data(), chain.node_count()}, p.left(t), p.right(t), {dydt.data(), chain.node_count()});
    };
  } else {
    // links refreshed from the current pressures at every evaluation
    const auto& m = p.moisture();
    std::vector<double> half(r + 1), full(r + 1);
    const double dx = p.length / static_cast<double>(r);
    sys.rhs = [&m, &p, r, dx, half, full](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) mutable {
      full.front() = p.left(t);
      full.back() = p.right(t);
      for (std::size_t j = 1; j < r; ++j) full[j] = y[static_cast<Eigen::Index>(j - 1)];
      for (std::size_t j = 0; j <= r; ++j) {
        const double kappa = m.kappa(full[j]);
        if (!(kappa > 0.0))
          throw ConstitutiveRangeError("non-positive vapour permeability", dx * static_cast<double>(j));
        half[j] = dx / (2.0 * kappa);
      }
      for (std::size_t j = 1; j < r; ++j) {
        const double q_in = (full[j - 1] - full[j]) / (half[j - 1] + half[j]);
        const double q_out = (full[j] - full[j + 1]) / (half[j] + half[j + 1]);
        dydt[static_cast<Eigen::Index>(j - 1)] = (q_in - q_out) / (m.xi(full[j]) * dx);
      }
    };
  }

  Eigen::VectorXd y0(static_cast<Eigen::Index>(r - 1));
  for (std::size_t j = 1; j < r; ++j)
    y0[static_cast<Eigen::Index>(j - 1)] = p.initial.at(static_cast<double>(j) / static_cast<double>(r));

  const ode::Trajectory traj = ode::integrate_euler_fixed(sys, 0.0, p.horizon, y0, steps, t_out);

  core::SolutionField field;
  field.solver_id = solver_name(r);
  field.units = core::Units::physical;
  field.x_nodes.resize(r + 1);
  for (std::size_t j = 0; j <= r; ++j) field.x_nodes[j] = p.length * static_cast<double>(j) / static_cast<double>(r);
  field.t_samples = traj.times;
  field.values.resize(static_cast<Eigen::Index>(traj.times.size()), static_cast<Eigen::Index>(r + 1));
  for (std::size_t m = 0; m < traj.times.size(); ++m) {
    const auto row = static_cast<Eigen::Index>(m);
    const double t = traj.times[m];
    field.values(row, 0) = p.left(t);
    field.values.row(row).segment(1, static_cast<Eigen::Index>(r - 1)) = traj.states[m].transpose();
    field.values(row, static_cast<Eigen::Index>(r)) = p.right(t);
  }
  field.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return field;
}

}  // namespace difftrio::rc
