#include "properties.hpp"
#include "support.hpp"

#include "difftrio/bench/cases.hpp"
#include "difftrio/errors.hpp"
#include "difftrio/fdm/solver.hpp"
#include "difftrio/rc/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace difftrio;
using doctest::Approx;

TEST_CASE("heat chain resistances and capacities") {
  const core::HeatMaterial m{2.0, 1000.0, 2000.0};
  const auto c2 = rc::build_chain_heat(m, 0.1, 2);
  REQUIRE(c2.link_resistance.size() == 2);
  CHECK(c2.link_resistance[0] == Approx(0.025));
  CHECK(c2.node_capacity.size() == 1);
  CHECK(c2.node_capacity[0] == Approx(2e6 * 0.05));
  CHECK(c2.total_resistance() == Approx(0.05));
  const auto c100 = rc::build_chain_heat(m, 0.1, 100);
  CHECK(c100.link_resistance[42] == Approx(5e-4));
  CHECK(c100.total_resistance() == Approx(0.05));
  CHECK_THROWS_AS(rc::build_chain_heat(m, 0.1, 1), ConfigurationError);
}

TEST_CASE("vapour chain uses half resistances") {
  const core::MoistureMaterial m{1e-12, 1e-10, {{0.0, 2e-2}}};
  const std::vector<double> p{0.0, 100.0, 300.0};
  const auto chain = rc::build_chain_moisture(m, 0.1, 2, p);
  const double dx = 0.05;
  CHECK(chain.link_resistance[0] == Approx(dx / (2 * m.kappa(0.0)) + dx / (2 * m.kappa(100.0))));
  CHECK(chain.link_resistance[1] == Approx(dx / (2 * m.kappa(100.0)) + dx / (2 * m.kappa(300.0))));
  CHECK(chain.node_capacity[0] == Approx(2e-2 * dx));
  const core::MoistureMaterial bad{-1e-12, 1e-10, {{0.0, 2e-2}}};
  CHECK_THROWS_AS(rc::build_chain_moisture(bad, 0.1, 2, std::vector<double>{0.0, 100.0, 300.0}),
                  ConstitutiveRangeError);
}

TEST_CASE("CFL limits") {
  CHECK(rc::cfl_max_step(0.36, 0.5) == Approx(0.34722).epsilon(1e-4));
  CHECK(rc::cfl_max_step(0.36, 0.01) == Approx(1.3889e-4).epsilon(1e-4));
  CHECK_THROWS_AS(rc::cfl_max_step(0.0, 0.1), ConfigurationError);
}

TEST_CASE("RC node balance equals the FDM right-hand side") {
  CHECK(testing::rc_fdm_rhs_discrepancy(1) < 1e-12);
  CHECK(testing::rc_fdm_rhs_discrepancy(2) < 1e-12);
}

TEST_CASE("vapour chain with constant permeability equals the FDM right-hand side") {
  core::DiffusionProblem p = bench::case_moisture();
  p.material = core::MoistureMaterial{0.0, 3e-10, {{0.0, 1.88e-2}}};
  const auto dp = core::nondimensionalize(p);
  const std::size_t r = 7;
  std::vector<double> pv{1500, 1600, 1400, 1700, 1550, 1450}, v(6), rc_out(6), fdm_out(6);
  for (std::size_t j = 0; j < 6; ++j) v[j] = pv[j] / dp.value_scale;
  rc::rhs_rc_moisture(p.moisture(), p.length, r, pv, 1200.0, 1800.0, rc_out);
  fdm::rhs_nonlinear_moisture(v, dp.fo, fdm::FdmGrid::uniform(r), dp.constitutive, 1200.0 / dp.value_scale,
                              1800.0 / dp.value_scale, fdm_out);
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(rc_out[j] == Approx(fdm_out[j] * dp.value_scale / p.t_ref).epsilon(1e-12));
}

TEST_CASE("CFL bracketing") {
  // below about seven links the highest chain mode sits under the bound with room to spare
  for (std::size_t r : {10, 20, 100}) {
    CHECK(testing::cfl_growth(r, 0.99, 10000) <= 1.0);
    CHECK(testing::cfl_growth(r, 1.05, 10000) > 1e6);
  }
}

TEST_CASE("time step policies") {
  const auto p = bench::case_heat();
  const double dx = 0.1 / 10;
  const double limit = 2e6 * dx * dx / 4.0;
  CHECK(rc::resolve_time_step(p, 10, rc::DtPolicy{}) == Approx(0.5 * limit));
  CHECK(rc::resolve_time_step(p, 10, rc::DtPolicy::automatic_fraction(0.9)) == Approx(0.9 * limit));
  CHECK(rc::resolve_time_step(p, 10, rc::DtPolicy::fixed_step(10.0)) == 10.0);
  CHECK_THROWS_AS(rc::resolve_time_step(p, 10, rc::DtPolicy::fixed_step(1.05 * limit)), StabilityError);
  CHECK_THROWS_AS(rc::resolve_time_step(p, 10, rc::DtPolicy::automatic_fraction(1.5)), ConfigurationError);
  const std::vector<double> t{0.0, p.horizon};
  CHECK_THROWS_AS(rc::solve_rc(p, 10, rc::DtPolicy::fixed_step(1.05 * limit), t), StabilityError);
}

TEST_CASE("three-resistance chain follows the three-cell FDM solution") {
  const auto p = bench::case_heat();
  const auto dp = core::nondimensionalize(p);
  const auto t = core::uniform_samples(dp.horizon, 1.0);
  std::vector<double> ts(t.size());
  for (std::size_t m = 0; m < t.size(); ++m) ts[m] = t[m] * p.t_ref;
  const auto rc_field = core::nondimensionalize_field(rc::solve_rc(p, 3, rc::DtPolicy::automatic_fraction(0.05), ts), p);
  const auto fdm_field = fdm::solve_fdm(dp, fdm::FdmGrid::uniform(3), {1e-10, 1e-10}, t);
  REQUIRE(rc_field.values.cols() == fdm_field.values.cols());
  CHECK((rc_field.values - fdm_field.values).cwiseAbs().maxCoeff() < 2e-3);
  for (std::size_t j = 0; j < rc_field.x_nodes.size(); ++j) CHECK(rc_field.x_nodes[j] == Approx(fdm_field.x_nodes[j]));
}

TEST_CASE("RC output names and boundary columns") {
  const auto p = bench::case_heat();
  const std::vector<double> t{0.0, 3600.0 * 6, p.horizon};
  const auto f = rc::solve_rc(p, 2, rc::DtPolicy{}, t);
  CHECK(f.solver_id == "R2C");
  CHECK(f.values(1, 0) == Approx(30.0));
  CHECK(f.values(0, 1) == Approx(20.0));
  CHECK(f.x_nodes.back() == Approx(0.1));
}
