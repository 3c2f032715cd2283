#pragma once

#include "difftrio/core/model.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace difftrio::rc {

/**
 * Chain of r equal-length links between r + 1 nodes at x_j = j L / r. The two
 * end nodes carry the Dirichlet signals; the r - 1 interior nodes carry a
 * capacity C_j dx. Link j joins node j to node j + 1.
 */
struct RcChain {
  std::size_t r{0};
  double length{0.0};
  double dx{0.0};
  std::vector<double> link_resistance;  ///< r values [K.m2/W] or [Pa.s.m2/kg]
  std::vector<double> node_capacity;    ///< r - 1 values, C_j dx

  std::size_t node_count() const { return r - 1; }
  double total_resistance() const;
};

/// Uniform links R = (L / r) / k and capacities rho c L / r. Throws ConfigurationError for r < 2.
RcChain build_chain_heat(const core::HeatMaterial& m, double length, std::size_t r);

/**
 * Vapour chain for the current nodal pressures `pressures` (r + 1 values, ends
 * included): half resistances R_j = dx / (2 kappa(P_j)), link j carries
 * R_j + R_{j+1}, capacities xi(P_j) dx. Throws ConstitutiveRangeError if kappa <= 0.
 */
RcChain build_chain_moisture(const core::MoistureMaterial& m, double length, std::size_t r,
                             std::span<const double> pressures);

/// C_j dx dT_j/dt = (T_{j+1} - T_j) / R_{j,j+1} - (T_j - T_{j-1}) / R_{j-1,j} with clamped ends.
void rhs_rc_heat(const RcChain& chain, std::span<const double> interior, double left, double right,
                 std::span<double> out);

/// Rebuilds the vapour chain from the current pressures and evaluates the node balance.
void rhs_rc_moisture(const core::MoistureMaterial& m, double length, std::size_t r, std::span<const double> interior,
                     double left, double right, std::span<double> out);

/// Explicit Euler limit dt* = dx*^2 / (2 fo).
double cfl_max_step(double fo, double dx_star);

/**
 * Frozen-coefficient bound for the vapour chain, min xi dx^2 / (2 kappa_max)
 * over [p_min, p_max]. Heuristic: the nonlinear scheme has no closed-form limit.
 */
double moisture_max_step(const core::MoistureMaterial& m, double dx, double p_min, double p_max);

struct DtPolicy {
  enum class Kind { automatic, fixed };
  Kind kind{Kind::automatic};
  double cfl_fraction{0.5};  ///< automatic: fraction of the stability limit
  double dt{0.0};            ///< fixed: step in seconds

  static DtPolicy automatic_fraction(double fraction) { return {Kind::automatic, fraction, 0.0}; }
  static DtPolicy fixed_step(double seconds) { return {Kind::fixed, 0.5, seconds}; }
};

/// Physical time step [s] chosen by `policy`; throws StabilityError when a fixed step exceeds the limit.
double resolve_time_step(const core::DiffusionProblem& p, std::size_t r, const DtPolicy& policy);

std::string solver_name(std::size_t r);

/**
 * Explicit Euler integration of the chain in physical units. The step is
 * shortened so that an integer number of steps reaches the horizon. Output
 * times `t_out` are in seconds.
 */
core::SolutionField solve_rc(const core::DiffusionProblem& p, std::size_t r, const DtPolicy& policy,
                             std::span<const double> t_out);

}  // namespace difftrio::rc
