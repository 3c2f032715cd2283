#pragma once

#include "difftrio/core/model.hpp"
#include "difftrio/ode/integrators.hpp"
#include "difftrio/spectral/chebyshev.hpp"

#include <cstddef>
#include <span>

namespace difftrio::spectral {

/**
 * Tau boundary closure. The two highest coefficients are eliminated from the
 * constraints sum (-1)^i a_i = left (X = -1) and sum a_i = right (X = 1), so
 * a = P r + Q (left, right) for the n - 1 free coefficients r = (a_0..a_{n-2}).
 */
class TauClosure {
public:
  explicit TauClosure(std::size_t n);

  std::size_t order() const { return n_; }
  std::size_t reduced_size() const { return n_ - 1; }
  Coefficients expand(const Eigen::VectorXd& reduced, double left, double right) const;
  const Eigen::MatrixXd& p() const { return p_; }
  const Eigen::MatrixXd& q() const { return q_; }

private:
  std::size_t n_;
  Eigen::MatrixXd p_;  ///< (n+1) x (n-1)
  Eigen::MatrixXd q_;  ///< (n+1) x 2
};

/// Reduced linear system r' = A r + b.
struct TauLinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

/**
 * Tau-Galerkin rows r_i' = fo_mapped * (second-derivative coefficients)_i for
 * i = 0..n-2 with the boundary rows eliminated. `fo_mapped` is 4 Fo for a wall
 * mapped from x* in [0, 1] onto X in [-1, 1].
 */
TauLinearSystem assemble_tau_linear(double fo_mapped, std::size_t n, double u_left, double u_right);

/**
 * Pseudo-spectral right-hand side of v_t = fo_mapped (nu(v) v_XX + lambda(v) v_X^2),
 * nu = kappa* / xi*, lambda = (d kappa* / dv) / xi*, evaluated at Chebyshev-Gauss
 * nodes and projected back onto the basis. Returns the n - 1 free coefficient rates.
 */
class NonlinearTauRhs {
public:
  NonlinearTauRhs(std::size_t n, std::size_t quadrature_nodes, double fo_mapped, core::ScaledConstitutive law);

  const TauClosure& closure() const { return closure_; }
  const GaussGrid& grid() const { return grid_; }
  /// Throws ConstitutiveRangeError (location x* in [0, 1]) where kappa* or xi* is not positive.
  void operator()(const Eigen::VectorXd& reduced, double left, double right, Eigen::VectorXd& out) const;
  Eigen::VectorXd from_full(const Coefficients& a) const;

private:
  TauClosure closure_;
  GaussGrid grid_;
  double fo_mapped_;
  core::ScaledConstitutive law_;
  Eigen::MatrixXd value_op_;   ///< T(X_q)
  Eigen::MatrixXd first_op_;   ///< T(X_q) D1
  Eigen::MatrixXd second_op_;  ///< T(X_q) D2
  Eigen::MatrixXd project_;    ///< rows 0..n-2 of the discrete projection
};

/// One-shot form of NonlinearTauRhs for a Tau-consistent full coefficient vector.
Eigen::VectorXd rhs_spectral_nonlinear(const ChebState& state, const GaussGrid& grid, double fo_mapped,
                                       const core::ScaledConstitutive& law, double left, double right);

enum class TimeScheme { automatic, explicit_rk, stiff };

struct SpectralOptions {
  std::size_t quadrature_nodes{0};  ///< 0 selects 2n
  TimeScheme scheme{TimeScheme::automatic};
};

/**
 * Solves the dimensionless problem with order `n`, sampling the field at
 * `x_out` (in [0, 1]) and `t_out`. Linear problems use the adaptive RK, nonlinear
 * ones the stiff integrator unless `options.scheme` says otherwise.
 */
core::SolutionField solve_spectral(const core::DimensionlessProblem& p, std::size_t n, const ode::ToleranceSpec& tol,
                                   std::span<const double> x_out, std::span<const double> t_out,
                                   const SpectralOptions& options = {});

/// Maps x* in [0, 1] to X in [-1, 1].
inline double to_chebyshev_domain(double x_star) { return 2.0 * x_star - 1.0; }

}  // namespace difftrio::spectral
