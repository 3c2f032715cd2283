#include "difftrio/errors.hpp"
#include "difftrio/ode/integrators.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <vector>

using namespace difftrio;
using doctest::Approx;

namespace {

ode::OdeSystem linear_system(const Eigen::MatrixXd& a) {
  ode::OdeSystem sys;
  sys.dimension = static_cast<std::size_t>(a.rows());
  sys.rhs = [a](double, const ode::Vector& y, ode::Vector& dy) { dy = a * y; };
  return sys;
}

ode::OdeSystem decay() { return linear_system(Eigen::MatrixXd::Constant(1, 1, -1.0)); }

// exp(A t) y0 through the eigendecomposition of a symmetric A.
Eigen::VectorXd exact_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd lambda = (eig.eigenvalues() * t).array().exp();
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose() * y0;
}

Eigen::MatrixXd second_difference(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = -2.0;
    if (i > 0) a(i, i - 1) = 1.0;
    if (i + 1 < n) a(i, i + 1) = 1.0;
  }
  return a;
}

ode::OdeSystem oscillator() {
  ode::OdeSystem sys;
  sys.dimension = 2;
  sys.rhs = [](double, const ode::Vector& y, ode::Vector& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  return sys;
}

}  // namespace

TEST_CASE("explicit Euler step on u' = -u") {
  const ode::Vector y = ode::step_euler_explicit(decay(), 0.0, ode::Vector::Ones(1), 0.1);
  CHECK(y[0] == Approx(0.9).epsilon(1e-15));
  CHECK_THROWS_AS(ode::step_euler_explicit(decay(), 0.0, ode::Vector::Ones(1), 0.0), ConfigurationError);
}

TEST_CASE("explicit Euler detects a non-finite derivative") {
  ode::OdeSystem sys;
  sys.dimension = 1;
  sys.rhs = [](double, const ode::Vector&, ode::Vector& dy) { dy[0] = std::nan(""); };
  CHECK_THROWS_AS(ode::step_euler_explicit(sys, 0.0, ode::Vector::Ones(1), 0.1), IntegrationError);
}

TEST_CASE("fixed-step Euler converges at first order to the matrix exponential") {
  const Eigen::MatrixXd a = second_difference(6);
  const ode::Vector y0 = ode::Vector::LinSpaced(6, 1.0, 2.0);
  const Eigen::VectorXd exact = exact_linear(a, y0, 1.0);
  const std::vector<double> out{1.0};
  double previous = 0.0;
  for (std::size_t steps : {100, 200, 400}) {
    const auto traj = ode::integrate_euler_fixed(linear_system(a), 0.0, 1.0, y0, steps, out);
    const double err = (traj.states.back() - exact).norm();
    if (previous > 0.0) CHECK(previous / err == Approx(2.0).epsilon(0.05));
    previous = err;
  }
}

TEST_CASE("fixed-step Euler interpolates outputs linearly between steps") {
  const std::vector<double> out{0.0, 0.05, 0.1};
  const auto traj = ode::integrate_euler_fixed(decay(), 0.0, 0.1, ode::Vector::Ones(1), 1, out);
  CHECK(traj.states[1][0] == Approx(0.95));
  CHECK(traj.states[2][0] == Approx(0.9));
}

TEST_CASE("adaptive RK reaches exp(-1)") {
  ode::ToleranceSpec tol{1e-6, 1e-6};
  const std::vector<double> out{0.0, 1.0};
  const auto traj = ode::integrate_adaptive_rk(decay(), 0.0, 1.0, ode::Vector::Ones(1), tol, out);
  CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) < 1e-5);
}

TEST_CASE("adaptive RK matches the matrix exponential of a diffusion matrix") {
  const Eigen::MatrixXd a = second_difference(8) * 4.0;
  const ode::Vector y0 = ode::Vector::LinSpaced(8, -1.0, 3.0);
  ode::ToleranceSpec tol{1e-9, 1e-9};
  const std::vector<double> out{0.25, 0.5};
  const auto traj = ode::integrate_adaptive_rk(linear_system(a), 0.0, 0.5, y0, tol, out);
  CHECK((traj.states[0] - exact_linear(a, y0, 0.25)).lpNorm<Eigen::Infinity>() < 1e-7);
  CHECK((traj.states[1] - exact_linear(a, y0, 0.5)).lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("adaptive RK is at least fourth order on the harmonic oscillator") {
  const double period = 2.0 * std::numbers::pi;
  const std::vector<double> out{period};
  auto error = [&](double h) {
    ode::ToleranceSpec tol{1.0, 1.0};
    tol.initial_step = h;
    tol.max_step = h;
    const auto traj = ode::integrate_adaptive_rk(oscillator(), 0.0, period, ode::Vector::Unit(2, 0), tol, out);
    return (traj.states.back() - ode::Vector::Unit(2, 0)).norm();
  };
  const double coarse = error(period / 40.0);
  const double fine = error(period / 80.0);
  CHECK(std::log2(coarse / fine) > 3.8);
}

TEST_CASE("dense output agrees with the trajectory between steps") {
  ode::ToleranceSpec tol{1e-10, 1e-10};
  std::vector<double> out;
  for (int i = 0; i <= 50; ++i) out.push_back(0.02 * i * 2.0 * std::numbers::pi);
  const auto traj = ode::integrate_adaptive_rk(oscillator(), 0.0, out.back(), ode::Vector::Unit(2, 0), tol, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(std::abs(traj.states[i][0] - std::cos(out[i])) < 1e-7);
    CHECK(std::abs(traj.states[i][1] + std::sin(out[i])) < 1e-7);
  }
}

TEST_CASE("stiff scalar u' = -1000 (u - cos t)") {
  ode::OdeSystem sys;
  sys.dimension = 1;
  sys.rhs = [](double t, const ode::Vector& y, ode::Vector& dy) { dy[0] = -1000.0 * (y[0] - std::cos(t)); };
  const double b = 1000.0 / (1e6 + 1.0);
  const double a = 1000.0 * b;
  auto exact = [&](double t) { return a * std::cos(t) + b * std::sin(t) - a * std::exp(-1000.0 * t); };
  const std::vector<double> out{0.001, 0.01, 0.5, 1.0};
  ode::ToleranceSpec tol{1e-6, 1e-6};

  const auto stiff = ode::integrate_stiff(sys, 0.0, 1.0, ode::Vector::Zero(1), tol, out);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(stiff.states[i][0] - exact(out[i])) < 1e-4);

  const auto rk = ode::integrate_adaptive_rk(sys, 0.0, 1.0, ode::Vector::Zero(1), tol, out);
  CHECK(std::abs(rk.states.back()[0] - exact(1.0)) < 1e-4);
  // the explicit method is held to its stability bound, the implicit one is not
  CHECK(stiff.stats.accepted * 3 < rk.stats.accepted);
}

TEST_CASE("stiff integrator on a linear diffusion system") {
  const Eigen::MatrixXd a = second_difference(10) * 100.0;
  const ode::Vector y0 = ode::Vector::Ones(10);
  ode::ToleranceSpec tol{1e-8, 1e-8};
  const std::vector<double> out{0.01, 0.1};
  const auto traj = ode::integrate_stiff(linear_system(a), 0.0, 0.1, y0, tol, out);
  CHECK((traj.states[0] - exact_linear(a, y0, 0.01)).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK((traj.states[1] - exact_linear(a, y0, 0.1)).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("numeric Jacobian of a linear system") {
  Eigen::MatrixXd a(2, 2);
  a << -3.0, 1.0, 2.0, -5.0;
  const auto sys = linear_system(a);
  const ode::Vector y = ode::Vector::Constant(2, 0.7);
  ode::Vector f(2);
  sys.rhs(0.0, y, f);
  CHECK((ode::numeric_jacobian(sys, 0.0, y, f) - a).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("tolerances are validated") {
  const std::vector<double> out{1.0};
  CHECK_THROWS_AS(ode::integrate_adaptive_rk(decay(), 0.0, 1.0, ode::Vector::Ones(1), {-1.0, 1e-3}, out),
                  ConfigurationError);
  CHECK_THROWS_AS(ode::integrate_stiff(decay(), 0.0, 1.0, ode::Vector::Ones(1), {1e-3, 0.0}, out),
                  ConfigurationError);
}
