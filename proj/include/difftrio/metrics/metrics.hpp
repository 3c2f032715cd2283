#pragma once

#include "difftrio/core/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace difftrio::metrics {

/// Accuracy and cost of one solver against a reference.
struct ErrorReport {
  std::vector<double> x;
  std::vector<double> eps2_profile;
  double eps_inf{0.0};
  double flux_eps_inf{0.0};
  double scd{0.0};
  double r_cpu_ms_per_h{0.0};
};

struct FluxSeries {
  std::vector<double> t_samples;
  std::vector<double> q;
  double x0{0.0};
};

enum class FluxMethod { grid, spectral };

/// Permeability as a function of the field value: k, kappa(P) or kappa*(v).
using Permeability = std::function<double(double)>;

inline constexpr double scd_cap = 16.0;

/**
 * Field sampled on (x, t). Spectral fields are evaluated from their
 * coefficients; other fields are interpolated linearly in x and t.
 * `wall_length` is the extent the coefficients are expanded over.
 */
core::SolutionField resample(const core::SolutionField& f, std::span<const double> x, std::span<const double> t,
                             double wall_length = 1.0);

/// sqrt(mean over t_m, m >= 1, of (u - u_ref)^2) per node. Throws ContractError on grid mismatch.
std::vector<double> eps2_profile(const core::SolutionField& sol, const core::SolutionField& ref);

double eps_inf(std::span<const double> eps2);

/**
 * -log10 of the sup-norm relative error of the final-time profiles, capped at
 * `scd_cap`. Throws UndefinedScdError where the reference vanishes.
 */
double scd(const core::SolutionField& sol, const core::SolutionField& ref);

/**
 * q = -kappa(u) du/dx at x0. Grid fields use a one-sided difference (forward at
 * the first node, backward elsewhere) with kappa at the mean of the two values and
 * throw LocationError when x0 is not a node. Spectral fields differentiate
 * their coefficients.
 */
FluxSeries flux(const core::SolutionField& f, FluxMethod method, const Permeability& kappa, double x0,
                double wall_length = 1.0);

/// Per-position RMS-over-time flux errors and their maximum, at every node of `sol`.
struct FluxError {
  std::vector<double> x;
  std::vector<double> eps2;
  double eps_inf{0.0};
};
FluxError flux_error(const core::SolutionField& sol, FluxMethod method, const core::SolutionField& ref,
                     const Permeability& kappa, double wall_length = 1.0);

/// Trapezoidal integral of q over [t1, t2]; throws OutOfRangeError outside the series.
double conduction_load(const FluxSeries& q, double t1, double t2);

/// Means over consecutive windows of length `window` starting at the first sample; partial windows dropped.
std::vector<double> aggregate(std::span<const double> t, std::span<const double> values, double window);

/// Loads over consecutive full windows of length `window`.
std::vector<double> window_loads(const FluxSeries& q, double window);

/// Milliseconds of computation per simulated hour.
double r_cpu_ms_per_h(double cpu_seconds, double horizon_seconds);

/// Wall-clock seconds of one call of `fn`, averaged over repeats until at least `min_total` seconds elapsed.
double time_call(const std::function<void()>& fn, double min_total = 0.2, int max_repeats = 200);

}  // namespace difftrio::metrics
