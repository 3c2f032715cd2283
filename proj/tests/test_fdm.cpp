#include "properties.hpp"
#include "support.hpp"

#include "difftrio/bench/cases.hpp"
#include "difftrio/errors.hpp"
#include "difftrio/fdm/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace difftrio;
using doctest::Approx;

namespace {

double laplacian_error(std::size_t cells) {
  const auto grid = fdm::FdmGrid::uniform(cells);
  std::vector<double> u(grid.interior_size()), out(grid.interior_size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::sin(std::numbers::pi * grid.nodes[j + 1]);
  fdm::rhs_linear_heat(u, 1.0, grid, 0.0, 0.0, out);
  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    worst = std::max(worst, std::abs(out[j] + std::numbers::pi * std::numbers::pi * u[j]));
  return worst;
}

double sine_decay_error(std::size_t cells) {
  const double fo = 0.1;
  const auto dp = testing::sine_decay(fo, 1.0);
  const auto t = core::uniform_samples(dp.horizon, 4.0);
  const auto grid = fdm::FdmGrid::uniform(cells);
  const auto f = fdm::solve_fdm(dp, grid, {1e-12, 1e-12}, t);
  double worst = 0.0;
  for (std::size_t m = 0; m < t.size(); ++m)
    for (std::size_t j = 0; j < grid.nodes.size(); ++j)
      worst = std::max(worst, std::abs(f.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) -
                                       testing::sine_decay_exact(fo, grid.nodes[j], t[m])));
  return worst;
}

}  // namespace

TEST_CASE("uniform grid") {
  const auto g = fdm::FdmGrid::uniform(4);
  CHECK(g.nodes.size() == 5);
  CHECK(g.dx == Approx(0.25));
  CHECK(g.interior_size() == 3);
  CHECK_THROWS_AS(fdm::FdmGrid::uniform(1), ConfigurationError);
}

TEST_CASE("discrete Laplacian of sin(pi x) converges at second order") {
  const double e1 = laplacian_error(10);
  const double e2 = laplacian_error(20);
  const double e3 = laplacian_error(40);
  CHECK(std::log2(e1 / e2) == Approx(2.0).epsilon(0.05));
  CHECK(std::log2(e2 / e3) == Approx(2.0).epsilon(0.05));
}

TEST_CASE("manufactured sine decay converges at second order in space") {
  const double e1 = sine_decay_error(10);
  const double e2 = sine_decay_error(20);
  const double e3 = sine_decay_error(40);
  CHECK(std::log2(e1 / e2) == Approx(2.0).epsilon(0.05));
  CHECK(std::log2(e2 / e3) == Approx(2.0).epsilon(0.05));
}

TEST_CASE("steady linear profile is preserved") { CHECK(testing::steady_profile_drift() < 1e-8); }

TEST_CASE("maximum principle on the heat preset") {
  const auto dp = core::nondimensionalize(bench::case_heat());
  const auto t = core::uniform_samples(dp.horizon, 4.0);
  const auto f = fdm::solve_fdm(dp, fdm::FdmGrid::uniform(50), {1e-6, 1e-6}, t);
  // boundary values span [0.5, 1.5] and the initial field is 1
  CHECK(f.values.minCoeff() >= 0.5 - 1e-6);
  CHECK(f.values.maxCoeff() <= 1.5 + 1e-6);
}

TEST_CASE("nonlinear right-hand side with a unit law is the linear one") {
  const auto grid = fdm::FdmGrid::uniform(12);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.5, 1.5);
  std::vector<double> u(grid.interior_size()), a(u.size()), b(u.size());
  for (auto& v : u) v = d(rng);
  fdm::rhs_linear_heat(u, 0.36, grid, 1.1, 0.9, a);
  fdm::rhs_nonlinear_moisture(u, 0.36, grid, core::ScaledConstitutive{}, 1.1, 0.9, b);
  for (std::size_t j = 0; j < u.size(); ++j) CHECK(b[j] == Approx(a[j]).epsilon(1e-13));
}

TEST_CASE("a uniform state is an equilibrium of the nonlinear right-hand side") {
  const auto dp = core::nondimensionalize(bench::case_moisture());
  const auto grid = fdm::FdmGrid::uniform(20);
  std::vector<double> u(grid.interior_size(), 1.0), out(u.size());
  fdm::rhs_nonlinear_moisture(u, dp.fo, grid, dp.constitutive, 1.0, 1.0, out);
  for (double v : out) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("FDM rejects a non-positive capacity") {
  core::MoistureMaterial m{0.0, 3e-10, {{0.0, 1.88e-2}, {1000.0, 1.88e-2}, {2000.0, -1.0}}};
  const auto law = core::ScaledConstitutive::moisture(m, 1000.0);
  const auto grid = fdm::FdmGrid::uniform(4);
  std::vector<double> u{1.0, 2.5, 1.0}, out(3);
  CHECK_THROWS_AS(fdm::rhs_nonlinear_moisture(u, 1.0, grid, law, 1.0, 1.0, out), ConstitutiveRangeError);
}
