#include "difftrio/bench/cases.hpp"
#include "difftrio/core/model.hpp"
#include "difftrio/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace difftrio;
using doctest::Approx;

TEST_CASE("fourier numbers of the presets") {
  CHECK(core::fourier_number(bench::case_heat()) == Approx(0.36).epsilon(1e-12));

  const auto bc = core::BoundarySignal::sampled({0.0, 3600.0, 7200.0}, {10.0, 10.0, 10.0});
  const auto annual = bench::case_annual(bc, bc);
  CHECK(core::fourier_number(annual) == Approx(2.48 * 3600.0 / (2.8e6 * 0.25)).epsilon(1e-12));
  CHECK(core::fourier_number(annual) == Approx(1.3e-2).epsilon(0.02));
}

TEST_CASE("heat material invariants") {
  core::DiffusionProblem p = bench::case_heat();
  p.material = core::HeatMaterial{0.0, 1000.0, 2000.0};
  CHECK_THROWS_AS(core::nondimensionalize(p), InvalidProblemError);
  p.material = core::HeatMaterial{2.0, -1.0, 2000.0};
  CHECK_THROWS_AS(core::nondimensionalize(p), InvalidProblemError);
}

TEST_CASE("sinusoidal boundary signal") {
  const auto p = bench::case_heat();
  CHECK(core::sample_boundary(p.left, 6 * 3600.0, p.horizon) == Approx(30.0).epsilon(1e-12));
  CHECK(core::sample_boundary(p.left, 0.0, p.horizon) == Approx(20.0));
  CHECK_THROWS_AS(core::sample_boundary(p.left, p.horizon * 1.01, p.horizon), OutOfRangeError);
  CHECK_THROWS_AS(core::sample_boundary(p.left, -1.0, p.horizon), OutOfRangeError);
}

TEST_CASE("sampled boundary signal interpolates linearly") {
  const auto s = core::BoundarySignal::sampled({0.0, 3600.0}, {5.0, 7.0});
  CHECK(core::sample_boundary(s, 1800.0, 3600.0) == Approx(6.0));
  CHECK(s(3600.0) == 7.0);
  CHECK_THROWS_AS(s(4000.0), OutOfRangeError);
  CHECK_THROWS(core::BoundarySignal::sampled({0.0, 0.0}, {1.0, 2.0}));
}

TEST_CASE("scaled signals keep their shape") {
  const auto s = core::BoundarySignal::sinusoid(20.0, {{10.0, 24 * 3600.0}});
  const auto d = s.scaled(20.0, 3600.0);
  for (double t : {0.0, 1.5, 6.0, 17.25}) CHECK(d(t) == Approx(s(t * 3600.0) / 20.0).epsilon(1e-14));
  const auto [lo, hi] = s.bounds();
  CHECK(lo == Approx(10.0));
  CHECK(hi == Approx(30.0));
}

TEST_CASE("initial conditions") {
  const auto lin = core::InitialCondition::linear(0.0, 1.0);
  CHECK(lin.at(0.5) == Approx(0.5));
  CHECK(lin.reference() == Approx(0.5));
  const auto u = core::InitialCondition::uniform(20.0);
  CHECK(u.at(0.3) == 20.0);
  CHECK(u.reference() == 20.0);
}

TEST_CASE("nondimensional heat problem") {
  const auto d = core::nondimensionalize(bench::case_heat());
  CHECK(d.fo == Approx(0.36));
  CHECK(d.horizon == Approx(24.0));
  CHECK(d.initial(0.4) == Approx(1.0));
  CHECK(d.left(6.0) == Approx(1.5));
  CHECK(d.constitutive.is_unit());
  CHECK(d.constitutive.kappa(0.7) == 1.0);
  CHECK(d.constitutive.xi(0.7) == 1.0);
}

TEST_CASE("nondimensional moisture problem") {
  const auto p = bench::case_moisture();
  const auto d = core::nondimensionalize(p);
  const double p0 = bench::moisture_initial_pressure();
  CHECK(p0 == Approx(0.5 * core::saturation_pressure(25.0)));
  CHECK(core::saturation_pressure(25.0) == Approx(3167.2).epsilon(1e-4));
  CHECK(d.constitutive.kappa(1.0) == Approx(1.0));
  CHECK(d.constitutive.xi(1.0) == Approx(1.0));
  const double slope = p.moisture().kappa_slope * p0 / p.moisture().kappa(p0);
  CHECK(d.constitutive.kappa_derivative(0.3) == Approx(slope));
  CHECK(d.fo == Approx(p.moisture().kappa(p0) * 3600.0 / (1.88e-2 * 0.01)));
  CHECK(d.left(3.0) == Approx(1.8));
}

TEST_CASE("redimensionalize inverts nondimensionalize_field") {
  const auto p = bench::case_heat();
  core::SolutionField f;
  f.x_nodes = {0.0, 0.5, 1.0};
  f.t_samples = {0.0, 1.0};
  f.values = Eigen::MatrixXd::Constant(2, 3, 1.25);
  const auto phys = core::redimensionalize(f, p);
  CHECK(phys.x_nodes[1] == Approx(0.05));
  CHECK(phys.t_samples[1] == Approx(3600.0));
  CHECK(phys.values(1, 1) == Approx(25.0));
  const auto back = core::nondimensionalize_field(phys, p);
  CHECK(back.values(1, 2) == Approx(1.25));
  CHECK(back.x_nodes[2] == Approx(1.0));
}

TEST_CASE("uniform samples") {
  const auto t = core::uniform_samples(24.0, 1.0);
  REQUIRE(t.size() == 25);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 24.0);
}

TEST_CASE("moisture material rejects non-positive coefficients") {
  core::MoistureMaterial m{-1e-12, 3e-10, {{0.0, 1.88e-2}}};
  CHECK_THROWS_AS(m.validate(0.0, 1000.0), InvalidProblemError);
  core::MoistureMaterial ok{6.72e-13, 3e-10, {{0.0, 1.88e-2}}};
  CHECK_NOTHROW(ok.validate(0.0, 3500.0));
}
