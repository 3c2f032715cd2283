#include "difftrio/metrics/metrics.hpp"

#include "difftrio/errors.hpp"
#include "difftrio/spectral/chebyshev.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace difftrio::metrics {

namespace {

struct Bracket {
  std::size_t lo{0};
  double w{0.0};  // weight of lo + 1
};

Bracket locate(const std::vector<double>& grid, double v, const char* axis) {
  const double span = grid.back() - grid.front();
  const double slop = 1e-9 * std::max(1.0, std::abs(span));
  if (v < grid.front() - slop || v > grid.back() + slop)
    throw OutOfRangeError(std::string(axis) + " = " + std::to_string(v) + " lies outside the sampled range");
  if (grid.size() == 1) return {0, 0.0};
  auto it = std::upper_bound(grid.begin(), grid.end(), v);
  std::size_t hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - grid.begin(), 1,
                                                                      static_cast<std::ptrdiff_t>(grid.size() - 1)));
  const std::size_t lo = hi - 1;
  const double w = std::clamp((v - grid[lo]) / (grid[hi] - grid[lo]), 0.0, 1.0);
  return {lo, w};
}

Eigen::VectorXd coefficients_at(const core::SolutionField& f, double t) {
  const Bracket b = locate(f.t_samples, t, "t");
  if (b.w == 0.0 || f.t_samples.size() == 1) return f.chebyshev[b.lo];
  return (1.0 - b.w) * f.chebyshev[b.lo] + b.w * f.chebyshev[b.lo + 1];
}

double to_cheb(double x, double wall_length) { return std::clamp(2.0 * x / wall_length - 1.0, -1.0, 1.0); }

void check_same_grid(const core::SolutionField& a, const core::SolutionField& b) {
  if (a.x_nodes.size() != b.x_nodes.size() || a.t_samples.size() != b.t_samples.size())
    throw ContractError("fields are not on a common grid");
  for (std::size_t j = 0; j < a.x_nodes.size(); ++j)
    if (std::abs(a.x_nodes[j] - b.x_nodes[j]) > 1e-9 * std::max(1.0, std::abs(b.x_nodes[j])))
      throw ContractError("fields are not on a common spatial grid");
  for (std::size_t m = 0; m < a.t_samples.size(); ++m)
    if (std::abs(a.t_samples[m] - b.t_samples[m]) > 1e-9 * std::max(1.0, std::abs(b.t_samples[m])))
      throw ContractError("fields are not on a common time grid");
}

}  // namespace

core::SolutionField resample(const core::SolutionField& f, std::span<const double> x, std::span<const double> t,
                             double wall_length) {
  f.validate();
  core::SolutionField out;
  out.solver_id = f.solver_id;
  out.cpu_seconds = f.cpu_seconds;
  out.units = f.units;
  out.x_nodes.assign(x.begin(), x.end());
  out.t_samples.assign(t.begin(), t.end());
  out.values.resize(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(x.size()));

  if (!f.chebyshev.empty()) {
    std::vector<double> X(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) X[j] = to_cheb(x[j], wall_length);
    const auto n = static_cast<std::size_t>(f.chebyshev.front().size() - 1);
    const Eigen::MatrixXd basis = spectral::basis_matrix(X, n);
    out.chebyshev.reserve(t.size());
    for (std::size_t m = 0; m < t.size(); ++m) {
      Eigen::VectorXd a = coefficients_at(f, t[m]);
      out.values.row(static_cast<Eigen::Index>(m)) = (basis * a).transpose();
      out.chebyshev.push_back(std::move(a));
    }
    return out;
  }

  std::vector<Bracket> bx(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) bx[j] = locate(f.x_nodes, x[j], "x");
  for (std::size_t m = 0; m < t.size(); ++m) {
    const Bracket bt = locate(f.t_samples, t[m], "t");
    const auto r0 = static_cast<Eigen::Index>(bt.lo);
    const auto r1 = static_cast<Eigen::Index>(std::min(bt.lo + 1, f.t_samples.size() - 1));
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto c0 = static_cast<Eigen::Index>(bx[j].lo);
      const auto c1 = static_cast<Eigen::Index>(std::min(bx[j].lo + 1, f.x_nodes.size() - 1));
      const double lo = (1.0 - bx[j].w) * f.values(r0, c0) + bx[j].w * f.values(r0, c1);
      const double hi = (1.0 - bx[j].w) * f.values(r1, c0) + bx[j].w * f.values(r1, c1);
      out.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = (1.0 - bt.w) * lo + bt.w * hi;
    }
  }
  return out;
}

std::vector<double> eps2_profile(const core::SolutionField& sol, const core::SolutionField& ref) {
  check_same_grid(sol, ref);
  const Eigen::Index rows = sol.values.rows();
  if (rows < 2) throw ContractError("error profile needs at least two time samples");
  const Eigen::MatrixXd diff = sol.values.bottomRows(rows - 1) - ref.values.bottomRows(rows - 1);
  std::vector<double> eps(sol.x_nodes.size());
  for (Eigen::Index j = 0; j < diff.cols(); ++j)
    eps[static_cast<std::size_t>(j)] = std::sqrt(diff.col(j).squaredNorm() / static_cast<double>(rows - 1));
  return eps;
}

double eps_inf(std::span<const double> eps2) {
  if (eps2.empty()) throw ContractError("empty error profile");
  return *std::max_element(eps2.begin(), eps2.end());
}

double scd(const core::SolutionField& sol, const core::SolutionField& ref) {
  check_same_grid(sol, ref);
  const Eigen::Index last = sol.values.rows() - 1;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < sol.values.cols(); ++j) {
    const double r = ref.values(last, j);
    if (r == 0.0)
      throw UndefinedScdError("reference vanishes at x = " + std::to_string(ref.x_nodes[static_cast<std::size_t>(j)]));
    worst = std::max(worst, std::abs((sol.values(last, j) - r) / r));
  }
  if (worst == 0.0) return scd_cap;
  return std::min(scd_cap, -std::log10(worst));
}

FluxSeries flux(const core::SolutionField& f, FluxMethod method, const Permeability& kappa, double x0,
                double wall_length) {
  f.validate();
  FluxSeries out;
  out.t_samples = f.t_samples;
  out.x0 = x0;
  out.q.resize(f.t_samples.size());

  if (method == FluxMethod::spectral) {
    if (f.chebyshev.empty()) throw ContractError("spectral flux needs Chebyshev coefficients");
    if (x0 < -1e-12 * wall_length || x0 > wall_length * (1.0 + 1e-12))
      throw LocationError("x0 = " + std::to_string(x0) + " lies outside the wall");
    const double X = to_cheb(x0, wall_length);
    for (std::size_t m = 0; m < f.t_samples.size(); ++m) {
      const Eigen::VectorXd& a = f.chebyshev[m];
      const double u = spectral::cheb_eval(a, X);
      const double dudx = spectral::cheb_eval(spectral::derivative_coeffs_first(a), X) * 2.0 / wall_length;
      out.q[m] = -kappa(u) * dudx;
    }
    return out;
  }

  const auto& xs = f.x_nodes;
  const double slop = 1e-9 * std::max(1.0, std::abs(xs.back() - xs.front()));
  const auto it = std::find_if(xs.begin(), xs.end(), [&](double x) { return std::abs(x - x0) <= slop; });
  if (it == xs.end()) throw LocationError("x0 = " + std::to_string(x0) + " is not a grid node");
  const auto j = static_cast<Eigen::Index>(it - xs.begin());
  const Eigen::Index a = j == 0 ? 0 : j - 1;
  const Eigen::Index b = a + 1;
  const double dx = xs[static_cast<std::size_t>(b)] - xs[static_cast<std::size_t>(a)];
  for (Eigen::Index m = 0; m < f.values.rows(); ++m) {
    const double ua = f.values(m, a);
    const double ub = f.values(m, b);
    out.q[static_cast<std::size_t>(m)] = -kappa(0.5 * (ua + ub)) * (ub - ua) / dx;
  }
  return out;
}

FluxError flux_error(const core::SolutionField& sol, FluxMethod method, const core::SolutionField& ref,
                     const Permeability& kappa, double wall_length) {
  if (sol.t_samples.size() != ref.t_samples.size() || sol.t_samples.size() < 2)
    throw ContractError("flux comparison needs matching time samples");
  FluxError err;
  err.x = sol.x_nodes;
  err.eps2.resize(sol.x_nodes.size());
  const std::size_t samples = sol.t_samples.size() - 1;
  for (std::size_t j = 0; j < sol.x_nodes.size(); ++j) {
    const double x0 = sol.x_nodes[j];
    const FluxSeries q = flux(sol, method, kappa, x0, wall_length);
    const FluxSeries q_ref = flux(ref, FluxMethod::spectral, kappa, x0, wall_length);
    double sum = 0.0;
    for (std::size_t m = 1; m < q.q.size(); ++m) sum += (q.q[m] - q_ref.q[m]) * (q.q[m] - q_ref.q[m]);
    err.eps2[j] = std::sqrt(sum / static_cast<double>(samples));
  }
  err.eps_inf = eps_inf(err.eps2);
  return err;
}

double conduction_load(const FluxSeries& q, double t1, double t2) {
  const auto& t = q.t_samples;
  if (t.size() < 2 || q.q.size() != t.size()) throw ContractError("flux series needs at least two samples");
  if (!(t1 < t2)) throw OutOfRangeError("load interval must satisfy t1 < t2");
  const double slop = 1e-9 * std::max(1.0, std::abs(t.back() - t.front()));
  if (t1 < t.front() - slop || t2 > t.back() + slop) throw OutOfRangeError("load interval outside the flux series");
  auto value_at = [&](double s) {
    const Bracket b = locate(t, s, "t");
    return (1.0 - b.w) * q.q[b.lo] + b.w * q.q[std::min(b.lo + 1, t.size() - 1)];
  };
  double total = 0.0;
  double prev_t = t1;
  double prev_q = value_at(t1);
  for (std::size_t m = 0; m < t.size(); ++m) {
    if (t[m] <= t1) continue;
    if (t[m] >= t2) break;
    total += 0.5 * (prev_q + q.q[m]) * (t[m] - prev_t);
    prev_t = t[m];
    prev_q = q.q[m];
  }
  total += 0.5 * (prev_q + value_at(t2)) * (t2 - prev_t);
  return total;
}

std::vector<double> aggregate(std::span<const double> t, std::span<const double> values, double window) {
  if (t.size() != values.size()) throw ContractError("series lengths differ");
  if (t.empty() || !(window > 0.0)) throw OutOfRangeError("aggregation needs samples and a positive window");
  if (t.size() > 1) {
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t m = 1; m < t.size(); ++m)
      if (std::abs(t[m] - t[m - 1] - dt) > 1e-6 * dt) throw ContractError("aggregation needs uniform sampling");
  }
  const double start = t.front();
  const double slop = 1e-9 * window;
  std::vector<double> means;
  std::size_t m = 0;
  for (std::size_t k = 0;; ++k) {
    const double lo = start + window * static_cast<double>(k);
    const double hi = lo + window;
    if (hi > t.back() + (t.size() > 1 ? t[1] - t[0] : 0.0) + slop) break;
    double sum = 0.0;
    std::size_t count = 0;
    while (m < t.size() && t[m] < hi - slop) {
      if (t[m] >= lo - slop) {
        sum += values[m];
        ++count;
      }
      ++m;
    }
    if (count == 0) throw OutOfRangeError("empty aggregation window starting at " + std::to_string(lo));
    means.push_back(sum / static_cast<double>(count));
  }
  if (means.empty()) throw OutOfRangeError("series shorter than one aggregation window");
  return means;
}

std::vector<double> window_loads(const FluxSeries& q, double window) {
  if (q.t_samples.empty() || !(window > 0.0)) throw OutOfRangeError("load windows need samples and a positive window");
  std::vector<double> loads;
  const double start = q.t_samples.front();
  for (std::size_t k = 0;; ++k) {
    const double lo = start + window * static_cast<double>(k);
    const double hi = lo + window;
    if (hi > q.t_samples.back() + 1e-9 * window) break;
    loads.push_back(conduction_load(q, lo, hi));
  }
  return loads;
}

double r_cpu_ms_per_h(double cpu_seconds, double horizon_seconds) {
  if (!(horizon_seconds > 0.0)) throw ContractError("horizon must be positive");
  return cpu_seconds * 1000.0 / (horizon_seconds / 3600.0);
}

double time_call(const std::function<void()>& fn, double min_total, int max_repeats) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  int repeats = 0;
  double elapsed = 0.0;
  do {
    fn();
    ++repeats;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < min_total && repeats < max_repeats);
  return elapsed / repeats;
}

}  // namespace difftrio::metrics
