#include "difftrio/core/model.hpp"

#include "difftrio/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace difftrio::core {

namespace {

double interpolate_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  auto hi = std::upper_bound(xs.begin(), xs.end(), x);
  if (hi == xs.begin()) return ys.front();
  if (hi == xs.end()) return ys.back();
  const auto i = static_cast<std::size_t>(hi - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - w) * ys[i - 1] + w * ys[i];
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

void HeatMaterial::validate() const {
  if (!(k > 0.0) || !(rho > 0.0) || !(c > 0.0))
    throw InvalidProblemError("heat material requires k, rho, c > 0");
}

double MoistureMaterial::xi(double p) const {
  if (xi_points.empty()) throw InvalidProblemError("moisture capacity has no points");
  if (xi_points.size() == 1 || p <= xi_points.front().first) return xi_points.front().second;
  if (p >= xi_points.back().first) return xi_points.back().second;
  auto hi = std::upper_bound(xi_points.begin(), xi_points.end(), p,
                             [](double value, const auto& pt) { return value < pt.first; });
  const auto& [p1, x1] = *hi;
  const auto& [p0, x0] = *(hi - 1);
  const double w = (p - p0) / (p1 - p0);
  return (1.0 - w) * x0 + w * x1;
}

void MoistureMaterial::validate(double p_min, double p_max) const {
  if (xi_points.empty()) throw InvalidProblemError("moisture capacity has no points");
  for (std::size_t i = 1; i < xi_points.size(); ++i)
    if (!(xi_points[i].first > xi_points[i - 1].first))
      throw InvalidProblemError("moisture capacity table must have increasing pressures");
  for (const auto& [p, x] : xi_points)
    if (!(x > 0.0)) throw InvalidProblemError("moisture capacity must be positive");
  // affine: positive on an interval iff positive at both ends
  if (!(kappa(p_min) > 0.0) || !(kappa(p_max) > 0.0))
    throw InvalidProblemError("moisture permeability must be positive over the pressure range");
}

double saturation_pressure(double celsius) {
  return 611.21 * std::exp(17.502 * celsius / (240.97 + celsius));
}

BoundarySignal BoundarySignal::constant(double value) { return sinusoid(value, {}); }

BoundarySignal BoundarySignal::sinusoid(double mean, std::vector<Harmonic> harmonics) {
  for (const auto& h : harmonics)
    if (!(h.period > 0.0)) throw InvalidProblemError("sinusoid period must be positive");
  BoundarySignal s;
  s.kind_ = Kind::sinusoid;
  s.mean_ = mean;
  s.harmonics_ = std::move(harmonics);
  s.times_.clear();
  s.values_.clear();
  return s;
}

BoundarySignal BoundarySignal::sampled(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size())
    throw InvalidProblemError("sampled signal needs matching, non-empty times and values");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidProblemError("sampled times must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidProblemError("sampled values must be finite");
  BoundarySignal s;
  s.kind_ = Kind::sampled;
  s.mean_ = 0.0;
  s.harmonics_.clear();
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  return s;
}

double BoundarySignal::operator()(double t) const {
  if (kind_ == Kind::sinusoid) {
    double v = mean_;
    for (const auto& h : harmonics_) v += h.amplitude * std::sin(2.0 * std::numbers::pi * t / h.period);
    return v;
  }
  const double span = times_.back() - times_.front();
  const double slop = 1e-9 * std::max(1.0, span);
  if (t < times_.front() - slop || t > times_.back() + slop)
    throw OutOfRangeError("time " + std::to_string(t) + " outside sampled signal span");
  return interpolate_linear(times_, values_, t);
}

BoundarySignal BoundarySignal::scaled(double value_scale, double time_scale) const {
  if (kind_ == Kind::sinusoid) {
    std::vector<Harmonic> hs;
    hs.reserve(harmonics_.size());
    for (const auto& h : harmonics_) hs.push_back({h.amplitude / value_scale, h.period / time_scale});
    return sinusoid(mean_ / value_scale, std::move(hs));
  }
  std::vector<double> ts(times_.size()), vs(values_.size());
  std::transform(times_.begin(), times_.end(), ts.begin(), [&](double t) { return t / time_scale; });
  std::transform(values_.begin(), values_.end(), vs.begin(), [&](double v) { return v / value_scale; });
  return sampled(std::move(ts), std::move(vs));
}

std::pair<double, double> BoundarySignal::bounds() const {
  if (kind_ == Kind::sinusoid) {
    double amp = 0.0;
    for (const auto& h : harmonics_) amp += std::abs(h.amplitude);
    return {mean_ - amp, mean_ + amp};
  }
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return {*lo, *hi};
}

double sample_boundary(const BoundarySignal& b, double t, double horizon) {
  const double slop = 1e-12 * std::max(1.0, horizon);
  if (t < -slop || t > horizon + slop)
    throw OutOfRangeError("time " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]");
  return b(std::clamp(t, 0.0, horizon));
}

InitialCondition InitialCondition::uniform(double value) { return profile({value}); }

InitialCondition InitialCondition::linear(double left, double right) { return profile({left, right}); }

InitialCondition InitialCondition::profile(std::vector<double> values) {
  if (values.empty()) throw InvalidProblemError("initial profile is empty");
  InitialCondition ic;
  ic.values_ = std::move(values);
  return ic;
}

double InitialCondition::reference() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

double InitialCondition::at(double s) const {
  if (values_.size() == 1) return values_.front();
  const double pos = std::clamp(s, 0.0, 1.0) * static_cast<double>(values_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

const HeatMaterial& DiffusionProblem::heat() const {
  if (const auto* m = std::get_if<HeatMaterial>(&material)) return *m;
  throw InvalidProblemError("problem does not carry a heat material");
}

const MoistureMaterial& DiffusionProblem::moisture() const {
  if (const auto* m = std::get_if<MoistureMaterial>(&material)) return *m;
  throw InvalidProblemError("problem does not carry a moisture material");
}

std::pair<double, double> DiffusionProblem::value_range() const {
  auto [lo, hi] = left.bounds();
  auto [rlo, rhi] = right.bounds();
  lo = std::min(lo, rlo);
  hi = std::max(hi, rhi);
  for (double v : initial.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

void DiffusionProblem::validate() const {
  if (!(length > 0.0)) throw InvalidProblemError("wall thickness must be positive");
  if (!(horizon > 0.0)) throw InvalidProblemError("horizon must be positive");
  if (!(t_ref > 0.0)) throw InvalidProblemError("reference time must be positive");
  if (!(initial.reference() > 0.0))
    throw InvalidProblemError("initial value must be positive to serve as scale");
  if (physics == Physics::heat) {
    heat().validate();
  } else {
    auto [lo, hi] = value_range();
    if (!(lo > 0.0)) throw InvalidProblemError("vapour pressure must stay positive");
    moisture().validate(lo, hi);
  }
  for (const auto* b : {&left, &right}) {
    if (b->kind() == BoundarySignal::Kind::sampled) {
      const double slop = 1e-9 * horizon;
      if (b->times().front() > slop || b->times().back() < horizon - slop)
        throw InvalidProblemError("sampled boundary signal does not cover [0, horizon]");
    }
  }
}

ScaledConstitutive ScaledConstitutive::moisture(MoistureMaterial material, double p_ref) {
  ScaledConstitutive s;
  s.p_ref_ = p_ref;
  s.kappa_ref_ = material.kappa(p_ref);
  s.xi_ref_ = material.xi(p_ref);
  if (!(s.kappa_ref_ > 0.0) || !(s.xi_ref_ > 0.0))
    throw InvalidProblemError("reference permeability and capacity must be positive");
  s.material_ = std::make_shared<const MoistureMaterial>(std::move(material));
  return s;
}

double ScaledConstitutive::kappa(double v) const {
  return material_ ? material_->kappa(v * p_ref_) / kappa_ref_ : 1.0;
}

double ScaledConstitutive::kappa_derivative(double v) const {
  return material_ ? material_->kappa_derivative(v * p_ref_) * p_ref_ / kappa_ref_ : 0.0;
}

double ScaledConstitutive::xi(double v) const { return material_ ? material_->xi(v * p_ref_) / xi_ref_ : 1.0; }

void DimensionlessProblem::validate() const {
  if (!(fo > 0.0)) throw InvalidProblemError("Fourier number must be positive");
  if (!(horizon > 0.0)) throw InvalidProblemError("horizon must be positive");
  if (!initial) throw InvalidProblemError("initial profile missing");
}

double fourier_number(const DiffusionProblem& p) {
  if (p.physics == Physics::heat) {
    const auto& m = p.heat();
    return m.k * p.t_ref / (m.volumetric_capacity() * p.length * p.length);
  }
  const auto& m = p.moisture();
  const double p0 = p.initial.reference();
  return m.kappa(p0) * p.t_ref / (m.xi(p0) * p.length * p.length);
}

DimensionlessProblem nondimensionalize(const DiffusionProblem& p) {
  p.validate();
  const double scale = p.initial.reference();
  DimensionlessProblem d;
  d.physics = p.physics;
  d.fo = fourier_number(p);
  d.left = p.left.scaled(scale, p.t_ref);
  d.right = p.right.scaled(scale, p.t_ref);
  d.initial = [ic = p.initial, scale](double s) { return ic.at(s) / scale; };
  d.horizon = p.horizon / p.t_ref;
  if (p.physics == Physics::moisture) d.constitutive = ScaledConstitutive::moisture(p.moisture(), scale);
  d.value_scale = scale;
  d.length = p.length;
  d.t_ref = p.t_ref;
  return d;
}

void SolutionField::validate() const {
  if (x_nodes.size() < 2 || t_samples.empty()) throw ContractError("solution field needs a grid");
  if (values.rows() != static_cast<Eigen::Index>(t_samples.size()) ||
      values.cols() != static_cast<Eigen::Index>(x_nodes.size()))
    throw ContractError("solution field matrix does not match its grid");
  for (std::size_t j = 1; j < x_nodes.size(); ++j)
    if (!(x_nodes[j] > x_nodes[j - 1])) throw ContractError("x nodes must be ascending");
  if (!values.allFinite()) throw ContractError("solution field has non-finite values");
  if (!chebyshev.empty() && chebyshev.size() != t_samples.size())
    throw ContractError("chebyshev coefficients do not match the time samples");
}

std::vector<double> uniform_samples(double horizon, double per_unit) {
  if (!(horizon > 0.0) || !(per_unit > 0.0)) throw ConfigurationError("sampling needs positive horizon and rate");
  const auto intervals = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(horizon * per_unit)));
  std::vector<double> t(intervals + 1);
  for (std::size_t m = 0; m <= intervals; ++m)
    t[m] = horizon * static_cast<double>(m) / static_cast<double>(intervals);
  return t;
}

namespace {

SolutionField rescale(const SolutionField& f, double value_factor, double x_factor, double t_factor,
                      Units units) {
  SolutionField out = f;
  out.values *= value_factor;
  for (auto& x : out.x_nodes) x *= x_factor;
  for (auto& t : out.t_samples) t *= t_factor;
  for (auto& a : out.chebyshev) a *= value_factor;
  out.units = units;
  return out;
}

}  // namespace

SolutionField redimensionalize(const SolutionField& field, const DiffusionProblem& p) {
  field.validate();
  if (field.units != Units::dimensionless) throw ContractError("field is already dimensional");
  if (!close(field.x_nodes.front(), 0.0, 1e-9) || !close(field.x_nodes.back(), 1.0, 1e-9))
    throw ContractError("field does not span the unit wall");
  if (field.t_samples.back() > p.horizon / p.t_ref * (1.0 + 1e-9))
    throw ContractError("field extends beyond the problem horizon");
  return rescale(field, p.initial.reference(), p.length, p.t_ref, Units::physical);
}

SolutionField nondimensionalize_field(const SolutionField& field, const DiffusionProblem& p) {
  field.validate();
  if (field.units != Units::physical) throw ContractError("field is already dimensionless");
  if (!close(field.x_nodes.front(), 0.0, 1e-9) || !close(field.x_nodes.back(), p.length, 1e-9))
    throw ContractError("field does not span the wall thickness");
  if (field.t_samples.back() > p.horizon * (1.0 + 1e-9))
    throw ContractError("field extends beyond the problem horizon");
  return rescale(field, 1.0 / p.initial.reference(), 1.0 / p.length, 1.0 / p.t_ref, Units::dimensionless);
}

}  // namespace difftrio::core
