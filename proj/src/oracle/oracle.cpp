#include "difftrio/oracle/oracle.hpp"

#include "difftrio/errors.hpp"
#include "difftrio/fdm/solver.hpp"
#include "difftrio/metrics/metrics.hpp"
#include "difftrio/spectral/solver.hpp"

#include <future>
#include <sstream>

namespace difftrio::oracle {

ReferenceLevel resolve_level(const ReferenceLevel& level, bool linear) {
  ReferenceLevel out = level;
  if (out.spectral_n == 0) out.spectral_n = linear ? 24 : 32;
  if (out.threshold == 0.0) out.threshold = linear ? 1e-6 : 1e-5;
  if (out.fdm_cells < 2 || out.spectral_n < 2 || !(out.spectral_tol > 0.0) || !(out.fdm_tol > 0.0))
    throw ConfigurationError("invalid reference level");
  return out;
}

Reference reference_solution(const core::DimensionlessProblem& p, const ReferenceLevel& level,
                             std::span<const double> x_out, std::span<const double> t_out, bool concurrent) {
  p.validate();
  const ReferenceLevel lv = resolve_level(level, p.constitutive.is_unit());
  const fdm::FdmGrid grid = fdm::FdmGrid::uniform(lv.fdm_cells);
  const ode::ToleranceSpec spectral_tol{lv.spectral_tol, lv.spectral_tol};
  const ode::ToleranceSpec fdm_tol{lv.fdm_tol, lv.fdm_tol};

  auto run_spectral = [&] { return spectral::solve_spectral(p, lv.spectral_n, spectral_tol, x_out, t_out); };
  auto run_fdm = [&] { return fdm::solve_fdm(p, grid, fdm_tol, t_out); };

  core::SolutionField spec;
  core::SolutionField fd;
  if (concurrent) {
    auto fut = std::async(std::launch::async, run_fdm);
    spec = run_spectral();
    fd = fut.get();
  } else {
    spec = run_spectral();
    fd = run_fdm();
  }

  const core::SolutionField spec_on_fd = metrics::resample(spec, grid.nodes, fd.t_samples);
  const double cross = metrics::eps_inf(metrics::eps2_profile(fd, spec_on_fd));

  Reference ref;
  ref.certificate = {cross, lv.threshold, lv.spectral_n, lv.fdm_cells, spec.cpu_seconds, fd.cpu_seconds,
                     cross < lv.threshold};
  if (!ref.certificate.certified) {
    std::ostringstream msg;
    msg << "reference not certified: spectral n=" << lv.spectral_n << " and FDM " << lv.fdm_cells
        << " cells differ by " << cross << " (threshold " << lv.threshold << ")";
    throw OracleDivergenceError(msg.str(), cross);
  }
  ref.field = std::move(spec);
  ref.field.solver_id = "Oracle";
  return ref;
}

}  // namespace difftrio::oracle
