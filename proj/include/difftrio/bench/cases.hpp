#pragma once

#include "difftrio/core/model.hpp"
#include "difftrio/ode/integrators.hpp"
#include "difftrio/rc/solver.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace difftrio::bench {

enum class SolverKind { rc, fdm, spectral };

struct SolverSpec {
  SolverKind kind{SolverKind::fdm};
  std::size_t r{0};      ///< rc: resistance count
  std::size_t n{0};      ///< spectral: order
  std::size_t cells{0};  ///< fdm: intervals
  rc::DtPolicy dt;       ///< rc only
  ode::ToleranceSpec tol{1e-4, 1e-4};
  std::size_t quadrature_nodes{0};  ///< spectral, nonlinear only

  std::string label() const;
  void validate() const;

  static SolverSpec rc_chain(std::size_t r);
  static SolverSpec finite_difference(std::size_t cells);
  static SolverSpec chebyshev(std::size_t n);
};

/// Concrete slab under daily and 3-hourly temperature swings, 24 h.
core::DiffusionProblem case_heat();

/// Vapour diffusion with pressure-dependent permeability, relative-humidity signals at 25 °C, 72 h.
core::DiffusionProblem case_moisture();

/**
 * Half-metre wall over the span of two sampled surface temperature series,
 * started from the linear profile between their first values.
 */
core::DiffusionProblem case_annual(const core::BoundarySignal& left, const core::BoundarySignal& right);

/// Relative humidity 0.5 at 25 °C [Pa].
double moisture_initial_pressure();

/// R2C, R3C, R100C, FDM and the spectral solver with the case's order and grid.
std::vector<SolverSpec> default_solvers(int case_id);

}  // namespace difftrio::bench
