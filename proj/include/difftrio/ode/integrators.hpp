#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace difftrio::ode {

using Vector = Eigen::VectorXd;

enum class JacobianPolicy { numeric, none };

/// y' = rhs(t, y). `rhs` writes into a preallocated vector of size `dimension`.
struct OdeSystem {
  std::size_t dimension{0};
  std::function<void(double t, const Vector& y, Vector& dydt)> rhs;
  JacobianPolicy jacobian{JacobianPolicy::numeric};
};

struct ToleranceSpec {
  double abs_tol{1e-4};
  double rel_tol{1e-4};
  double initial_step{0.0};  ///< 0 selects a starting step automatically
  double max_step{std::numeric_limits<double>::infinity()};

  void validate() const;
};

struct IntegrationStats {
  std::size_t accepted{0};
  std::size_t rejected{0};
  std::size_t rhs_evaluations{0};
  std::size_t jacobians{0};
  std::size_t factorizations{0};
};

/// States at the requested output times.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  IntegrationStats stats;
};

/// state + dt * rhs(t, state). Throws IntegrationError if the derivative is not finite.
Vector step_euler_explicit(const OdeSystem& sys, double t, const Vector& state, double dt);

/**
 * Fixed-step explicit Euler from t0 to t1 with `steps` equal steps; outputs are
 * linearly interpolated between the two steps that bracket each output time.
 */
Trajectory integrate_euler_fixed(const OdeSystem& sys, double t0, double t1, const Vector& state0,
                                 std::size_t steps, std::span<const double> output_times);

/**
 * Dormand-Prince 5(4) with PI step control and the free fourth-order dense output.
 * A step is accepted when |err_i| <= abs_tol + rel_tol * max(|y_i|, |y_new_i|) for every i.
 * Throws StiffnessError when the step falls below 1e-14 (t1 - t0).
 */
Trajectory integrate_adaptive_rk(const OdeSystem& sys, double t0, double t1, const Vector& state0,
                                 const ToleranceSpec& tol, std::span<const double> output_times);

/**
 * TR-BDF2 (trapezoidal stage followed by BDF2, gamma = 2 - sqrt(2)): one-step,
 * L-stable and second order. Both stages share the iteration matrix
 * I - (gamma h / 2) J with a finite-difference Jacobian; the local error
 * estimate is filtered through that matrix. Output uses cubic Hermite
 * interpolation between accepted steps. Throws StiffSolveError when Newton fails
 * to converge even with a fresh Jacobian at the minimum step.
 */
Trajectory integrate_stiff(const OdeSystem& sys, double t0, double t1, const Vector& state0,
                           const ToleranceSpec& tol, std::span<const double> output_times);

/// Forward-difference Jacobian of `sys` at (t, y); `f0` is rhs(t, y).
Eigen::MatrixXd numeric_jacobian(const OdeSystem& sys, double t, const Vector& y, const Vector& f0);

}  // namespace difftrio::ode
