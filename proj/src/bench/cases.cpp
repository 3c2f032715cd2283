#include "difftrio/bench/cases.hpp"

#include "difftrio/errors.hpp"

#include <cmath>
#include <numbers>

namespace difftrio::bench {

std::string SolverSpec::label() const {
  switch (kind) {
    case SolverKind::rc:
      return rc::solver_name(r);
    case SolverKind::fdm:
      return "FDM";
    case SolverKind::spectral:
      return "Spectral";
  }
  return "?";
}

void SolverSpec::validate() const {
  tol.validate();
  if (kind == SolverKind::rc && r < 2) throw ConfigurationError("RC solver needs r >= 2");
  if (kind == SolverKind::fdm && cells < 2) throw ConfigurationError("FDM solver needs at least 2 cells");
  if (kind == SolverKind::spectral && n < 2) throw ConfigurationError("spectral solver needs order n >= 2");
}

SolverSpec SolverSpec::rc_chain(std::size_t r) {
  SolverSpec s;
  s.kind = SolverKind::rc;
  s.r = r;
  return s;
}

SolverSpec SolverSpec::finite_difference(std::size_t cells) {
  SolverSpec s;
  s.kind = SolverKind::fdm;
  s.cells = cells;
  return s;
}

SolverSpec SolverSpec::chebyshev(std::size_t n) {
  SolverSpec s;
  s.kind = SolverKind::spectral;
  s.n = n;
  return s;
}

core::DiffusionProblem case_heat() {
  constexpr double hour = 3600.0;
  core::DiffusionProblem p;
  p.physics = core::Physics::heat;
  p.material = core::HeatMaterial{2.0, 1000.0, 2000.0};
  p.length = 0.1;
  p.left = core::BoundarySignal::sinusoid(20.0, {{10.0, 24.0 * hour}});
  p.right = core::BoundarySignal::sinusoid(20.0, {{4.0, 3.0 * hour}});
  p.initial = core::InitialCondition::uniform(20.0);
  p.horizon = 24.0 * hour;
  return p;
}

double moisture_initial_pressure() { return 0.5 * core::saturation_pressure(25.0); }

core::DiffusionProblem case_moisture() {
  constexpr double hour = 3600.0;
  const double p_sat = core::saturation_pressure(25.0);
  core::DiffusionProblem p;
  p.physics = core::Physics::moisture;
  p.material = core::MoistureMaterial{6.72e-13, 3e-10, {{0.0, 1.88e-2}}};
  p.length = 0.1;
  p.left = core::BoundarySignal::sinusoid(0.5 * p_sat, {{0.4 * p_sat, 12.0 * hour}});
  p.right = core::BoundarySignal::sinusoid(0.5 * p_sat, {{0.1 * p_sat, 6.0 * hour}});
  p.initial = core::InitialCondition::uniform(moisture_initial_pressure());
  p.horizon = 72.0 * hour;
  return p;
}

core::DiffusionProblem case_annual(const core::BoundarySignal& left, const core::BoundarySignal& right) {
  if (left.kind() != core::BoundarySignal::Kind::sampled || right.kind() != core::BoundarySignal::Kind::sampled)
    throw ConfigurationError("annual case needs sampled boundary series");
  core::DiffusionProblem p;
  p.physics = core::Physics::heat;
  p.material = core::HeatMaterial{2.48, 2.8e6, 1.0};
  p.length = 0.5;
  p.left = left;
  p.right = right;
  p.initial = core::InitialCondition::linear(left.values().front(), right.values().front());
  p.horizon = std::min(left.times().back(), right.times().back());
  return p;
}

std::vector<SolverSpec> default_solvers(int case_id) {
  std::vector<SolverSpec> s{SolverSpec::rc_chain(2), SolverSpec::rc_chain(3), SolverSpec::rc_chain(100)};
  switch (case_id) {
    case 1:
      s.push_back(SolverSpec::finite_difference(100));
      s.push_back(SolverSpec::chebyshev(6));
      break;
    case 2:
      s.push_back(SolverSpec::finite_difference(100));
      s.push_back(SolverSpec::chebyshev(10));
      break;
    case 3:
      s.push_back(SolverSpec::finite_difference(50));
      s.push_back(SolverSpec::chebyshev(12));
      break;
    default:
      throw ConfigurationError("unknown case " + std::to_string(case_id));
  }
  return s;
}

}  // namespace difftrio::bench
