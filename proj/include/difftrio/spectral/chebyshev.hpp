#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace difftrio::spectral {

using Coefficients = Eigen::VectorXd;

/// Coefficients a_0..a_n of sum a_i T_i(X) on X in [-1, 1].
struct ChebState {
  Coefficients a;

  std::size_t order() const { return a.size() == 0 ? 0 : static_cast<std::size_t>(a.size() - 1); }
  /// Throws ContractError when n < 2 or a coefficient is not finite.
  void validate() const;
};

/// Chebyshev-Gauss nodes cos(pi (2q + 1) / (2m)) with the constant weight pi / m.
struct GaussGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  static GaussGrid make(std::size_t m);
  std::size_t size() const { return nodes.size(); }
};

/// Clenshaw evaluation of sum a_i T_i(X); throws DomainError outside [-1, 1].
double cheb_eval(const Coefficients& a, double X);

/// Coefficients of the first derivative in the same basis (last entry zero).
Coefficients derivative_coeffs_first(const Coefficients& a);
/// Coefficients of the second derivative in the same basis (last two entries zero).
Coefficients derivative_coeffs_second(const Coefficients& a);

/// Matrix D such that D a = derivative_coeffs_second(a).
Eigen::MatrixXd second_derivative_operator(std::size_t n);
/// Matrix D such that D a = derivative_coeffs_first(a).
Eigen::MatrixXd first_derivative_operator(std::size_t n);

/// T_i(X_q) for q over `points`, i = 0..n.
Eigen::MatrixXd basis_matrix(std::span<const double> points, std::size_t n);

/**
 * Weighted projection a_i = 2 / (pi c_i) * integral u0 T_i / sqrt(1 - X^2),
 * evaluated with `m` Chebyshev-Gauss nodes (m = 0 picks 4 (n + 1)). Exact for
 * polynomials of degree <= n whenever m >= n + 1.
 */
ChebState project_initial(const std::function<double(double)>& u0, std::size_t n, std::size_t m = 0);

/// Discrete projection of samples taken at the nodes of `grid` onto T_0..T_n.
Coefficients project_samples(const GaussGrid& grid, std::span<const double> samples, std::size_t n);

}  // namespace difftrio::spectral
