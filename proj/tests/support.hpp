#pragma once

#include "difftrio/core/model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace difftrio::testing {

inline std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

/// u_t = fo u_xx, u = 0 at both ends, u(x, 0) = sin(pi x); exact exp(-fo pi^2 t) sin(pi x).
inline core::DimensionlessProblem sine_decay(double fo, double horizon) {
  core::DimensionlessProblem p;
  p.physics = core::Physics::heat;
  p.fo = fo;
  p.left = core::BoundarySignal::constant(0.0);
  p.right = core::BoundarySignal::constant(0.0);
  p.initial = [](double x) { return std::sin(std::numbers::pi * x); };
  p.horizon = horizon;
  return p;
}

inline double sine_decay_exact(double fo, double x, double t) {
  return std::exp(-fo * std::numbers::pi * std::numbers::pi * t) * std::sin(std::numbers::pi * x);
}

/// Steady problem with fixed ends and a linear initial profile between them.
inline core::DimensionlessProblem steady_linear(double left, double right, double fo, double horizon) {
  core::DimensionlessProblem p;
  p.physics = core::Physics::heat;
  p.fo = fo;
  p.left = core::BoundarySignal::constant(left);
  p.right = core::BoundarySignal::constant(right);
  p.initial = [left, right](double x) { return left + (right - left) * x; };
  p.horizon = horizon;
  return p;
}

}  // namespace difftrio::testing
