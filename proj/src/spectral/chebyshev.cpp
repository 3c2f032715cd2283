#include "difftrio/spectral/chebyshev.hpp"

#include "difftrio/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace difftrio::spectral {

namespace {

double c_weight(Eigen::Index i) { return i == 0 ? 2.0 : 1.0; }

}  // namespace

void ChebState::validate() const {
  if (a.size() < 3) throw ContractError("Chebyshev state needs order n >= 2");
  if (!a.allFinite()) throw ContractError("Chebyshev coefficients must be finite");
}

GaussGrid GaussGrid::make(std::size_t m) {
  if (m == 0) throw ConfigurationError("Gauss grid needs at least one node");
  GaussGrid g;
  g.nodes.resize(m);
  g.weights.assign(m, std::numbers::pi / static_cast<double>(m));
  for (std::size_t q = 0; q < m; ++q)
    g.nodes[q] = std::cos(std::numbers::pi * (2.0 * static_cast<double>(q) + 1.0) / (2.0 * static_cast<double>(m)));
  return g;
}

double cheb_eval(const Coefficients& a, double X) {
  if (!(X >= -1.0 - 1e-12 && X <= 1.0 + 1e-12))
    throw DomainError("Chebyshev evaluation point " + std::to_string(X) + " outside [-1, 1]");
  if (a.size() == 0) return 0.0;
  // Clenshaw: b_k = a_k + 2 X b_{k+1} - b_{k+2}
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = a.size() - 1; k >= 1; --k) {
    const double b0 = a[k] + 2.0 * X * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + X * b1 - b2;
}

Coefficients derivative_coeffs_first(const Coefficients& a) {
  const Eigen::Index size = a.size();
  Coefficients d = Coefficients::Zero(size);
  for (Eigen::Index i = 0; i + 1 < size; ++i) {
    double s = 0.0;
    for (Eigen::Index p = i + 1; p < size; p += 2) s += static_cast<double>(p) * a[p];
    d[i] = 2.0 / c_weight(i) * s;
  }
  return d;
}

Coefficients derivative_coeffs_second(const Coefficients& a) {
  const Eigen::Index size = a.size();
  Coefficients d = Coefficients::Zero(size);
  for (Eigen::Index i = 0; i + 2 < size; ++i) {
    double s = 0.0;
    const double ii = static_cast<double>(i) * static_cast<double>(i);
    for (Eigen::Index p = i + 2; p < size; p += 2) {
      const double pp = static_cast<double>(p);
      s += pp * (pp * pp - ii) * a[p];
    }
    d[i] = s / c_weight(i);
  }
  return d;
}

namespace {

template <class Op>
Eigen::MatrixXd operator_matrix(std::size_t n, Op op) {
  const auto size = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd m(size, size);
  for (Eigen::Index j = 0; j < size; ++j) m.col(j) = op(Coefficients::Unit(size, j));
  return m;
}

}  // namespace

Eigen::MatrixXd second_derivative_operator(std::size_t n) {
  return operator_matrix(n, [](const Coefficients& e) { return derivative_coeffs_second(e); });
}

Eigen::MatrixXd first_derivative_operator(std::size_t n) {
  return operator_matrix(n, [](const Coefficients& e) { return derivative_coeffs_first(e); });
}

Eigen::MatrixXd basis_matrix(std::span<const double> points, std::size_t n) {
  const auto cols = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd t(static_cast<Eigen::Index>(points.size()), cols);
  for (std::size_t q = 0; q < points.size(); ++q) {
    const auto row = static_cast<Eigen::Index>(q);
    const double x = points[q];
    t(row, 0) = 1.0;
    if (cols > 1) t(row, 1) = x;
    for (Eigen::Index i = 2; i < cols; ++i) t(row, i) = 2.0 * x * t(row, i - 1) - t(row, i - 2);
  }
  return t;
}

Coefficients project_samples(const GaussGrid& grid, std::span<const double> samples, std::size_t n) {
  if (samples.size() != grid.size()) throw ContractError("sample count does not match the Gauss grid");
  const Eigen::MatrixXd t = basis_matrix(grid.nodes, n);
  const Eigen::Map<const Eigen::VectorXd> f(samples.data(), static_cast<Eigen::Index>(samples.size()));
  Coefficients a = t.transpose() * f;
  // a_i = 2 / (pi c_i) * sum_q w_q f_q T_i(X_q), w_q = pi / m
  const double m = static_cast<double>(grid.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] *= 2.0 / (c_weight(i) * m);
  return a;
}

ChebState project_initial(const std::function<double(double)>& u0, std::size_t n, std::size_t m) {
  if (m == 0) m = 4 * (n + 1);
  if (m < n + 1) throw ConfigurationError("projection needs at least n + 1 quadrature nodes");
  const GaussGrid grid = GaussGrid::make(m);
  std::vector<double> f(m);
  for (std::size_t q = 0; q < m; ++q) f[q] = u0(grid.nodes[q]);
  return ChebState{project_samples(grid, f, n)};
}

}  // namespace difftrio::spectral
