#include "properties.hpp"
#include "support.hpp"

#include "difftrio/bench/cases.hpp"
#include "difftrio/errors.hpp"
#include "difftrio/spectral/chebyshev.hpp"
#include "difftrio/spectral/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace difftrio;
using namespace difftrio::spectral;
using doctest::Approx;

namespace {

Coefficients coeffs(std::initializer_list<double> v) {
  Coefficients a(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) a[i++] = x;
  return a;
}

Coefficients random_coeffs(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Coefficients a(static_cast<Eigen::Index>(n + 1));
  for (auto& v : a) v = d(rng);
  return a;
}

}  // namespace

TEST_CASE("Clenshaw evaluation") {
  CHECK(cheb_eval(coeffs({0, 0, 1}), 0.5) == Approx(-0.5));
  CHECK(cheb_eval(coeffs({1, 2, 3}), 1.0) == Approx(6.0));
  CHECK(cheb_eval(coeffs({1, 2, 3}), -1.0) == Approx(2.0));
  CHECK_THROWS_AS(cheb_eval(coeffs({1, 2}), 1.5), DomainError);
}

TEST_CASE("derivative recurrences") {
  const auto d1 = derivative_coeffs_first(coeffs({0, 1, 0, 1}));
  CHECK(d1.isApprox(coeffs({4, 0, 6, 0})));
  const auto d2 = derivative_coeffs_second(coeffs({0, 0, 1}));
  CHECK(d2.isApprox(coeffs({4, 0, 0})));
}

TEST_CASE("derivative recurrences agree with central differences") {
  CHECK(testing::chebyshev_fd_discrepancy(1) < 1e-8);
  CHECK(testing::chebyshev_fd_discrepancy(2) < 1e-8);
}

TEST_CASE("second derivative is the first derivative applied twice") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2, 5, 12, 20}) {
    const auto a = random_coeffs(n, rng);
    const auto twice = derivative_coeffs_first(derivative_coeffs_first(a));
    CHECK((twice - derivative_coeffs_second(a)).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + twice.cwiseAbs().maxCoeff()));
    CHECK((first_derivative_operator(n) * a - derivative_coeffs_first(a)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((second_derivative_operator(n) * a - derivative_coeffs_second(a)).cwiseAbs().maxCoeff() <
          1e-9 * (1.0 + twice.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("Gauss grid and basis matrix") {
  const auto g = GaussGrid::make(9);
  double total = 0.0;
  for (double w : g.weights) total += w;
  CHECK(total == Approx(std::numbers::pi));
  std::mt19937_64 rng(4);
  const auto a = random_coeffs(6, rng);
  const Eigen::MatrixXd b = basis_matrix(g.nodes, 6);
  const Eigen::VectorXd values = b * a;
  for (std::size_t q = 0; q < g.size(); ++q)
    CHECK(values[static_cast<Eigen::Index>(q)] == Approx(cheb_eval(a, g.nodes[q])));
}

TEST_CASE("projection of X^2") {
  const auto s = project_initial([](double x) { return x * x; }, 2);
  CHECK(s.a.isApprox(coeffs({0.5, 0, 0.5}), 1e-12));
}

TEST_CASE("projection is idempotent on polynomials") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2, 6, 12}) {
    const auto a = random_coeffs(n, rng);
    const auto s = project_initial([&](double x) { return cheb_eval(a, x); }, n);
    CHECK((s.a - a).cwiseAbs().maxCoeff() < 1e-12);
    const auto g = GaussGrid::make(2 * n);
    std::vector<double> samples;
    for (double x : g.nodes) samples.push_back(cheb_eval(a, x));
    CHECK((project_samples(g, samples, n) - a).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Tau closure honours the boundary values") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (std::size_t n : {2, 3, 6, 11}) {
    const TauClosure tau(n);
    Eigen::VectorXd r(static_cast<Eigen::Index>(n - 1));
    for (auto& v : r) v = d(rng);
    const double left = d(rng);
    const double right = d(rng);
    const auto a = tau.expand(r, left, right);
    CHECK(std::abs(cheb_eval(a, -1.0) - left) < 1e-10);
    CHECK(std::abs(cheb_eval(a, 1.0) - right) < 1e-10);
    CHECK((a.head(static_cast<Eigen::Index>(n - 1)) - r).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("linear Tau system keeps a steady linear profile") {
  const std::size_t n = 8;
  const auto sys = assemble_tau_linear(4 * 0.36, n, 1.5, 0.5);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n - 1));
  r[0] = 1.0;   // mean
  r[1] = -0.5;  // slope in X
  CHECK((sys.a * r + sys.b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("nonlinear right-hand side reduces to the linear one for a unit law") {
  const std::size_t n = 9;
  const double fo_mapped = 4 * 0.36;
  const NonlinearTauRhs rhs(n, 0, fo_mapped, core::ScaledConstitutive{});
  const auto lin = assemble_tau_linear(fo_mapped, n, 1.2, 0.8);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-0.2, 0.2);
  Eigen::VectorXd r(static_cast<Eigen::Index>(n - 1));
  for (auto& v : r) v = d(rng);
  r[0] += 1.0;
  Eigen::VectorXd out(r.size());
  rhs(r, 1.2, 0.8, out);
  CHECK((out - (lin.a * r + lin.b)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("spectral solution of the decaying sine") {
  const double fo = 0.1;
  const auto dp = testing::sine_decay(fo, 2.0);
  const auto x = testing::linspace(0.0, 1.0, 21);
  const auto t = core::uniform_samples(dp.horizon, 2.0);
  const auto f = solve_spectral(dp, 16, {1e-11, 1e-11}, x, t);
  double worst = 0.0;
  for (std::size_t m = 0; m < t.size(); ++m)
    for (std::size_t j = 0; j < x.size(); ++j)
      worst = std::max(worst, std::abs(f.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) -
                                       testing::sine_decay_exact(fo, x[j], t[m])));
  CHECK(worst < 1e-8);
  REQUIRE(f.chebyshev.size() == t.size());
}

TEST_CASE("spectral error on the heat preset decays faster than a power of n") {
  const auto dp = core::nondimensionalize(bench::case_heat());
  const auto x = testing::linspace(0.0, 1.0, 101);
  const auto t = core::uniform_samples(dp.horizon, 1.0);
  const ode::ToleranceSpec tol{1e-11, 1e-11};
  const auto ref = solve_spectral(dp, 28, tol, x, t);
  const std::vector<std::size_t> orders{4, 6, 8, 10};
  std::vector<double> err;
  for (std::size_t n : orders) {
    const auto f = solve_spectral(dp, n, tol, x, t);
    err.push_back((f.values - ref.values).cwiseAbs().maxCoeff());
  }
  // the local algebraic rate keeps growing with n, which no fixed power law does
  double previous_rate = 0.0;
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double rate = std::log(err[i - 1] / err[i]) / std::log(double(orders[i]) / double(orders[i - 1]));
    CHECK(rate > previous_rate);
    previous_rate = rate;
  }
  CHECK(err.back() < 1e-9);
}

TEST_CASE("nonlinear spectral solve stays close to a fine spectral solve") {
  const auto dp = core::nondimensionalize(bench::case_moisture());
  const auto x = testing::linspace(0.0, 1.0, 41);
  const auto t = core::uniform_samples(12.0, 1.0);
  auto short_dp = dp;
  short_dp.horizon = 12.0;
  const auto coarse = solve_spectral(short_dp, 12, {1e-8, 1e-8}, x, t);
  const auto fine = solve_spectral(short_dp, 24, {1e-9, 1e-9}, x, t);
  CHECK((coarse.values - fine.values).cwiseAbs().maxCoeff() < 1e-3);
}
