#include "difftrio/bench/pipeline.hpp"

#include "difftrio/errors.hpp"
#include "difftrio/fdm/solver.hpp"
#include "difftrio/rc/solver.hpp"
#include "difftrio/spectral/solver.hpp"

namespace difftrio::bench {

OutputGrid OutputGrid::uniform(std::size_t cells, double horizon, double per_unit) {
  if (cells < 1) throw ConfigurationError("output grid needs at least one cell");
  OutputGrid g;
  g.x.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) g.x[j] = static_cast<double>(j) / static_cast<double>(cells);
  g.t = core::uniform_samples(horizon, per_unit);
  return g;
}

namespace {

core::SolutionField solve_native(const core::DiffusionProblem& p, const core::DimensionlessProblem& dp,
                                 const SolverSpec& spec, const OutputGrid& grid) {
  switch (spec.kind) {
    case SolverKind::rc: {
      std::vector<double> t_seconds(grid.t.size());
      for (std::size_t m = 0; m < grid.t.size(); ++m) t_seconds[m] = grid.t[m] * p.t_ref;
      t_seconds.back() = p.horizon;
      return core::nondimensionalize_field(rc::solve_rc(p, spec.r, spec.dt, t_seconds), p);
    }
    case SolverKind::fdm:
      return fdm::solve_fdm(dp, fdm::FdmGrid::uniform(spec.cells), spec.tol, grid.t);
    case SolverKind::spectral: {
      spectral::SpectralOptions opt;
      opt.quadrature_nodes = spec.quadrature_nodes;
      return spectral::solve_spectral(dp, spec.n, spec.tol, grid.x, grid.t, opt);
    }
  }
  throw ConfigurationError("unknown solver kind");
}

}  // namespace

SolverRun run_solver(const core::DiffusionProblem& p, const core::DimensionlessProblem& dp, const SolverSpec& spec,
                     const OutputGrid& grid, double min_timing) {
  SolverRun run;
  run.spec = spec;
  try {
    spec.validate();
    run.native = solve_native(p, dp, spec, grid);
    run.cpu_seconds = run.native.cpu_seconds;
    if (min_timing > 0.0 && run.cpu_seconds < min_timing)
      run.cpu_seconds = metrics::time_call([&] { (void)solve_native(p, dp, spec, grid); }, min_timing);
    run.native.solver_id = spec.label();
    run.on_grid = metrics::resample(run.native, grid.x, grid.t);
    run.ok = true;
  } catch (const std::exception& e) {
    run.ok = false;
    run.error = e.what();
  }
  return run;
}

metrics::FluxMethod flux_method(const SolverSpec& spec) {
  return spec.kind == SolverKind::spectral ? metrics::FluxMethod::spectral : metrics::FluxMethod::grid;
}

metrics::ErrorReport evaluate(const SolverRun& run, const core::SolutionField& reference,
                              const core::DimensionlessProblem& dp) {
  if (!run.ok) throw ContractError("cannot evaluate a failed run");
  metrics::ErrorReport rep;
  rep.x = run.on_grid.x_nodes;
  rep.eps2_profile = metrics::eps2_profile(run.on_grid, reference);
  rep.eps_inf = metrics::eps_inf(rep.eps2_profile);
  rep.scd = metrics::scd(run.on_grid, reference);
  const auto law = dp.constitutive;
  const metrics::Permeability kappa = [law](double v) { return law.kappa(v); };
  rep.flux_eps_inf = metrics::flux_error(run.native, flux_method(run.spec), reference, kappa).eps_inf;
  rep.r_cpu_ms_per_h = metrics::r_cpu_ms_per_h(run.cpu_seconds, dp.horizon * dp.t_ref);
  return rep;
}

}  // namespace difftrio::bench
