#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace difftrio::core {

enum class Physics { heat, moisture };

/**
 * Thermal properties of a single-layer wall (SI).
 * Invariants: k > 0, rho > 0, c > 0.
 */
struct HeatMaterial {
  double k{0.0};    ///< conductivity [W/(m.K)]
  double rho{0.0};  ///< density [kg/m3]
  double c{0.0};    ///< specific heat [J/(kg.K)]

  void validate() const;
  double volumetric_capacity() const { return rho * c; }
};

/**
 * Isothermal vapour transport properties.
 *
 * Permeability is affine in the vapour pressure, kappa(P) = slope * P + intercept [s].
 * Capacity xi(P) [s2/m2] is piecewise linear through `xi_points` (P, xi), held
 * constant beyond the first and last points; a single point means a constant capacity.
 */
struct MoistureMaterial {
  double kappa_slope{0.0};
  double kappa_intercept{0.0};
  std::vector<std::pair<double, double>> xi_points;

  double kappa(double p) const { return kappa_slope * p + kappa_intercept; }
  double kappa_derivative(double /*p*/) const { return kappa_slope; }
  double xi(double p) const;

  /// Throws InvalidProblemError unless kappa and xi are positive on [p_min, p_max].
  void validate(double p_min, double p_max) const;
};

/// Saturation vapour pressure [Pa] at `celsius`, Magnus-type fit 611.21 exp(17.502 T / (240.97 + T)).
double saturation_pressure(double celsius);

struct Harmonic {
  double amplitude{0.0};
  double period{1.0};  ///< same time unit as the signal
};

/**
 * Dirichlet boundary value as a function of time: either a mean plus a sum of
 * sines, or a series of samples interpolated linearly.
 */
class BoundarySignal {
public:
  enum class Kind { sinusoid, sampled };

  BoundarySignal() = default;

  static BoundarySignal constant(double value);
  static BoundarySignal sinusoid(double mean, std::vector<Harmonic> harmonics);
  /// Times must be strictly increasing; at least one sample.
  static BoundarySignal sampled(std::vector<double> times, std::vector<double> values);

  Kind kind() const { return kind_; }
  double mean() const { return mean_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

  /// Unchecked for sinusoids; throws OutOfRangeError outside the sampled span.
  double operator()(double t) const;

  /// Signal g'(s) = g(s * time_scale) / value_scale.
  BoundarySignal scaled(double value_scale, double time_scale) const;

  /// Lower and upper bounds of the signal over all time (sampled: over the samples).
  std::pair<double, double> bounds() const;

private:
  Kind kind_{Kind::sinusoid};
  double mean_{0.0};
  std::vector<Harmonic> harmonics_;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Value of `b` at `t`; throws OutOfRangeError unless 0 <= t <= horizon.
double sample_boundary(const BoundarySignal& b, double t, double horizon);

/**
 * Initial field, given as values at uniformly spaced positions over the wall
 * (one value means uniform) and interpolated linearly in between.
 */
class InitialCondition {
public:
  InitialCondition() = default;

  static InitialCondition uniform(double value);
  static InitialCondition linear(double left, double right);
  static InitialCondition profile(std::vector<double> values);

  bool is_uniform() const { return values_.size() == 1; }
  /// Scale used to nondimensionalize: the value itself, or the profile mean.
  double reference() const;
  /// Value at fraction s in [0, 1] of the thickness.
  double at(double s) const;
  const std::vector<double>& values() const { return values_; }

private:
  std::vector<double> values_{0.0};
};

/// Dimensional problem: heat in degrees Celsius, moisture in Pa, seconds, metres.
struct DiffusionProblem {
  Physics physics{Physics::heat};
  std::variant<HeatMaterial, MoistureMaterial> material;
  double length{0.0};
  BoundarySignal left;
  BoundarySignal right;
  InitialCondition initial;
  double horizon{0.0};  ///< tau [s]
  double t_ref{3600.0};

  const HeatMaterial& heat() const;
  const MoistureMaterial& moisture() const;
  /// Smallest and largest value the field can take (maximum principle bounds).
  std::pair<double, double> value_range() const;
  void validate() const;
};

/**
 * Scaled permeability kappa*(v), capacity xi*(v) and the slope of kappa* in v.
 * The unit law (heat) returns 1, 1, 0.
 */
class ScaledConstitutive {
public:
  ScaledConstitutive() = default;
  /// Scales by kappa(p_ref) and xi(p_ref) so that kappa*(1) = xi*(1) = 1.
  static ScaledConstitutive moisture(MoistureMaterial material, double p_ref);

  bool is_unit() const { return !material_; }
  double kappa(double v) const;
  double kappa_derivative(double v) const;
  double xi(double v) const;

  double p_ref() const { return p_ref_; }
  double kappa_ref() const { return kappa_ref_; }
  double xi_ref() const { return xi_ref_; }

private:
  std::shared_ptr<const MoistureMaterial> material_;
  double p_ref_{1.0};
  double kappa_ref_{1.0};
  double xi_ref_{1.0};
};

/// Problem on x* in [0, 1], t* in [0, horizon]; all signals divided by `value_scale`.
struct DimensionlessProblem {
  Physics physics{Physics::heat};
  double fo{0.0};
  BoundarySignal left;
  BoundarySignal right;
  std::function<double(double)> initial;  ///< u(x*, 0)
  double horizon{0.0};                    ///< tau / t_ref
  ScaledConstitutive constitutive;

  // scaling factors
  double value_scale{1.0};
  double length{1.0};
  double t_ref{1.0};

  void validate() const;
};

DimensionlessProblem nondimensionalize(const DiffusionProblem& p);

/// Fourier number k t_ref / (rho c L^2) or kappa(P0) t_ref / (xi(P0) L^2).
double fourier_number(const DiffusionProblem& p);

enum class Units { dimensionless, physical };

/**
 * Space-time samples of the primary field. `values(m, j)` is the field at
 * `t_samples[m]`, `x_nodes[j]`. Spectral solvers additionally keep the
 * Chebyshev coefficients of each sample, expanded over the whole wall mapped onto [-1, 1].
 */
struct SolutionField {
  std::vector<double> x_nodes;
  std::vector<double> t_samples;
  Eigen::MatrixXd values;
  std::string solver_id;
  double cpu_seconds{0.0};
  Units units{Units::dimensionless};
  std::vector<Eigen::VectorXd> chebyshev;

  void validate() const;
};

/// Uniform samples 0, dt, ..., horizon with `per_unit` samples per time unit (at least 2).
std::vector<double> uniform_samples(double horizon, double per_unit);

/// Multiplies values by the scale, x by L and t by t_ref.
SolutionField redimensionalize(const SolutionField& field, const DiffusionProblem& p);
/// Inverse of redimensionalize.
SolutionField nondimensionalize_field(const SolutionField& field, const DiffusionProblem& p);

}  // namespace difftrio::core
