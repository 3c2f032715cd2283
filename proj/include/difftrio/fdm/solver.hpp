#pragma once

#include "difftrio/core/model.hpp"
#include "difftrio/ode/integrators.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace difftrio::fdm {

/// Uniform grid on the unit wall: nodes x_j = j dx, j = 0..n_cells.
struct FdmGrid {
  std::size_t n_cells{0};
  double dx{0.0};
  std::vector<double> nodes;

  /// Throws ConfigurationError for fewer than two cells.
  static FdmGrid uniform(std::size_t n_cells);
  std::size_t interior_size() const { return n_cells - 1; }
};

/// du_j/dt = fo (u_{j-1} - 2 u_j + u_{j+1}) / dx^2 on interior nodes, u_0 = u_left, u_N = u_right.
void rhs_linear_heat(std::span<const double> state, double fo, const FdmGrid& grid, double u_left, double u_right,
                     std::span<double> out);

/**
 * xi*(v_j) dv_j/dt = fo [kappa*(v_{j+1/2}) (v_{j+1} - v_j) - kappa*(v_{j-1/2}) (v_j - v_{j-1})] / dx^2
 * with kappa* at a half node taken at the mean of its two neighbours.
 * Throws ConstitutiveRangeError when xi*(v_j) <= 0.
 */
void rhs_nonlinear_moisture(std::span<const double> state, double fo, const FdmGrid& grid,
                            const core::ScaledConstitutive& law, double v_left, double v_right, std::span<double> out);

/**
 * Method-of-lines solve with the adaptive Dormand-Prince integrator. The field
 * is reported on all grid nodes, boundary columns filled from the exact signals.
 */
core::SolutionField solve_fdm(const core::DimensionlessProblem& p, const FdmGrid& grid, const ode::ToleranceSpec& tol,
                              std::span<const double> t_out);

}  // namespace difftrio::fdm
