#pragma once

#include "difftrio/bench/cases.hpp"
#include "difftrio/core/model.hpp"
#include "difftrio/metrics/metrics.hpp"

#include <string>
#include <vector>

namespace difftrio::bench {

/// Dimensionless lattice shared by every solver of a run.
struct OutputGrid {
  std::vector<double> x;
  std::vector<double> t;

  /// `cells` + 1 uniform nodes on [0, 1] and `per_unit` samples per unit of t*.
  static OutputGrid uniform(std::size_t cells, double horizon, double per_unit);
};

struct SolverRun {
  SolverSpec spec;
  core::SolutionField native;   ///< dimensionless, on the solver's own nodes
  core::SolutionField on_grid;  ///< dimensionless, on the common lattice
  double cpu_seconds{0.0};
  bool ok{false};
  std::string error;
};

/**
 * Solves with one solver and brings the result onto `grid`. When `min_timing`
 * is positive the solve is repeated until that many seconds have elapsed and
 * the mean is kept as cost. Solver errors are caught into `error`.
 */
SolverRun run_solver(const core::DiffusionProblem& p, const core::DimensionlessProblem& dp, const SolverSpec& spec,
                     const OutputGrid& grid, double min_timing = 0.0);

metrics::FluxMethod flux_method(const SolverSpec& spec);

/// Dimensionless field and flux errors, scd and cost against a spectral `reference` on the same lattice.
metrics::ErrorReport evaluate(const SolverRun& run, const core::SolutionField& reference,
                              const core::DimensionlessProblem& dp);

}  // namespace difftrio::bench
