#include "properties.hpp"
#include "support.hpp"

#include "difftrio/errors.hpp"
#include "difftrio/fdm/solver.hpp"
#include "difftrio/oracle/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace difftrio;
using doctest::Approx;

TEST_CASE("default levels") {
  const auto lin = oracle::resolve_level({}, true);
  CHECK(lin.spectral_n == 24);
  CHECK(lin.threshold == 1e-6);
  const auto nonlin = oracle::resolve_level({}, false);
  CHECK(nonlin.spectral_n == 32);
  CHECK(nonlin.threshold == 1e-5);
  oracle::ReferenceLevel custom;
  custom.spectral_n = 10;
  custom.threshold = 1e-3;
  CHECK(oracle::resolve_level(custom, true).spectral_n == 10);
  CHECK(oracle::resolve_level(custom, true).threshold == 1e-3);
}

TEST_CASE("oracle reproduces the decaying sine mode") { CHECK(testing::sine_decay_oracle_error() < 1e-8); }

TEST_CASE("certificate reports the disagreement it measured") {
  const auto dp = testing::sine_decay(0.1, 1.0);
  const auto x = testing::linspace(0.0, 1.0, 11);
  const auto t = core::uniform_samples(dp.horizon, 2.0);
  oracle::ReferenceLevel level;
  level.spectral_n = 16;
  level.fdm_cells = 40;
  level.threshold = 1e-2;
  const auto ref = oracle::reference_solution(dp, level, x, t, false);
  CHECK(ref.certificate.certified);
  CHECK(ref.certificate.fdm_cells == 40);
  CHECK(ref.field.solver_id == "Oracle");

  // the spectral side is exact to far below the FDM error, so the cross error is the FDM error
  const auto grid = fdm::FdmGrid::uniform(40);
  const auto f = fdm::solve_fdm(dp, grid, {level.fdm_tol, level.fdm_tol}, t);
  double fdm_error = 0.0;
  for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
    double sum = 0.0;
    for (std::size_t m = 1; m < t.size(); ++m) {
      const double d = f.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) -
                       testing::sine_decay_exact(0.1, grid.nodes[j], t[m]);
      sum += d * d;
    }
    fdm_error = std::max(fdm_error, std::sqrt(sum / static_cast<double>(t.size() - 1)));
  }
  CHECK(ref.certificate.cross_eps_inf == Approx(fdm_error).epsilon(0.01));
}

TEST_CASE("divergent solves are refused") {
  const auto dp = testing::sine_decay(0.1, 1.0);
  const auto x = testing::linspace(0.0, 1.0, 11);
  const auto t = core::uniform_samples(dp.horizon, 2.0);
  oracle::ReferenceLevel level;
  level.spectral_n = 16;
  level.fdm_cells = 10;
  level.threshold = 1e-9;
  bool thrown = false;
  try {
    (void)oracle::reference_solution(dp, level, x, t);
  } catch (const OracleDivergenceError& e) {
    thrown = true;
    CHECK(e.cross_error() > 1e-9);
  }
  CHECK(thrown);
}

TEST_CASE("sequential and concurrent certification agree") {
  const auto dp = testing::sine_decay(0.1, 1.0);
  const auto x = testing::linspace(0.0, 1.0, 11);
  const auto t = core::uniform_samples(dp.horizon, 2.0);
  oracle::ReferenceLevel level;
  level.spectral_n = 12;
  level.fdm_cells = 40;
  level.threshold = 1e-2;
  const auto a = oracle::reference_solution(dp, level, x, t, true);
  const auto b = oracle::reference_solution(dp, level, x, t, false);
  CHECK(a.certificate.cross_eps_inf == b.certificate.cross_eps_inf);
  CHECK(a.field.values == b.field.values);
}
