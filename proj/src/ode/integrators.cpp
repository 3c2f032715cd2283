#include "difftrio/ode/integrators.hpp"

#include "difftrio/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace difftrio::ode {

namespace {

constexpr double kUnderflowFraction = 1e-14;

void check_outputs(double t0, double t1, std::span<const double> out) {
  if (!(t1 > t0)) throw ConfigurationError("integration interval must satisfy t0 < t1");
  const double slop = 1e-12 * std::max(1.0, std::abs(t1 - t0));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < t0 - slop || out[i] > t1 + slop)
      throw ConfigurationError("output time " + std::to_string(out[i]) + " outside integration interval");
    if (i > 0 && out[i] < out[i - 1]) throw ConfigurationError("output times must be ascending");
  }
}

void evaluate(const OdeSystem& sys, double t, const Vector& y, Vector& f, IntegrationStats& stats) {
  sys.rhs(t, y, f);
  ++stats.rhs_evaluations;
}

/// max_i |e_i| / (atol + rtol * max(|a_i|, |b_i|))
double error_norm(const Vector& e, const Vector& a, const Vector& b, const ToleranceSpec& tol) {
  double err = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
    err = std::max(err, std::abs(e[i]) / sc);
  }
  return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
}

/// Collects outputs whose time falls in (t_prev, t_new]; `interp(t)` supplies the state.
template <class Interp>
void emit_outputs(std::span<const double> out, std::size_t& next, double t_new, bool last, Trajectory& traj,
                  Interp&& interp) {
  while (next < out.size() && (out[next] <= t_new || last)) {
    traj.times.push_back(out[next]);
    traj.states.push_back(interp(std::min(out[next], t_new)));
    ++next;
  }
}

/// Starting step in the style of Hairer & Wanner for a method of the given order.
double initial_step(const OdeSystem& sys, double t0, double t1, const Vector& y0, const Vector& f0,
                    const ToleranceSpec& tol, int order, IntegrationStats& stats) {
  if (tol.initial_step > 0.0) return std::min(tol.initial_step, t1 - t0);
  const Vector zero = Vector::Zero(y0.size());
  const double d0 = error_norm(y0, y0, zero, tol);
  const double d1 = error_norm(f0, y0, zero, tol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t1 - t0);
  Vector y1 = y0 + h0 * f0;
  Vector f1(y0.size());
  evaluate(sys, t0 + h0, y1, f1, stats);
  const double d2 = error_norm(f1 - f0, y0, zero, tol) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / (order + 1));
  return std::min({100.0 * h0, h1, tol.max_step, t1 - t0});
}

}  // namespace

void ToleranceSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigurationError("tolerances must be positive");
  if (initial_step < 0.0 || !(max_step > 0.0)) throw ConfigurationError("invalid step bounds");
}

Vector step_euler_explicit(const OdeSystem& sys, double t, const Vector& state, double dt) {
  if (!(dt > 0.0)) throw ConfigurationError("Euler step must be positive");
  Vector f(state.size());
  sys.rhs(t, state, f);
  if (!f.allFinite()) throw IntegrationError("non-finite derivative at t = " + std::to_string(t), t);
  return state + dt * f;
}

Trajectory integrate_euler_fixed(const OdeSystem& sys, double t0, double t1, const Vector& state0,
                                 std::size_t steps, std::span<const double> output_times) {
  check_outputs(t0, t1, output_times);
  if (steps == 0) throw ConfigurationError("Euler integration needs at least one step");
  Trajectory traj;
  const double dt = (t1 - t0) / static_cast<double>(steps);
  Vector y = state0;
  Vector f(y.size());
  std::size_t next = 0;
  emit_outputs(output_times, next, t0, false, traj, [&](double) { return y; });
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + dt * static_cast<double>(s);
    evaluate(sys, t, y, f, traj.stats);
    if (!f.allFinite()) throw IntegrationError("non-finite derivative at t = " + std::to_string(t), t);
    Vector y_new = y + dt * f;
    const double t_new = s + 1 == steps ? t1 : t0 + dt * static_cast<double>(s + 1);
    emit_outputs(output_times, next, t_new, s + 1 == steps, traj, [&](double to) {
      const double w = (to - t) / (t_new - t);
      return Vector((1.0 - w) * y + w * y_new);
    });
    y = std::move(y_new);
    ++traj.stats.accepted;
  }
  return traj;
}

Trajectory integrate_adaptive_rk(const OdeSystem& sys, double t0, double t1, const Vector& state0,
                                 const ToleranceSpec& tol, std::span<const double> output_times) {
  tol.validate();
  check_outputs(t0, t1, output_times);

  // Dormand-Prince 5(4)
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
  // PI controller
  constexpr double beta = 0.04, expo = 0.2 - 0.75 * beta, safe = 0.9;
  constexpr double fac_min = 0.2, fac_max = 10.0;

  const auto n = static_cast<Eigen::Index>(state0.size());
  Trajectory traj;
  Vector y = state0, y1(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), err_vec(n);
  Vector r1(n), r2(n), r3(n), r4(n), r5(n);
  double t = t0;
  std::size_t next = 0;
  emit_outputs(output_times, next, t0, false, traj, [&](double) { return y; });

  evaluate(sys, t, y, k1, traj.stats);
  if (!k1.allFinite()) throw IntegrationError("non-finite derivative at start", t);
  double h = initial_step(sys, t0, t1, y, k1, tol, 5, traj.stats);
  const double h_floor = kUnderflowFraction * (t1 - t0);
  double fac_old = 1e-4;
  bool last = false;
  bool rejected_before = false;

  while (!last) {
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < h_floor) throw StiffnessError("step size underflow at t = " + std::to_string(t), t);

    tmp = y + h * a21 * k1;
    evaluate(sys, t + c2 * h, tmp, k2, traj.stats);
    tmp = y + h * (a31 * k1 + a32 * k2);
    evaluate(sys, t + c3 * h, tmp, k3, traj.stats);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    evaluate(sys, t + c4 * h, tmp, k4, traj.stats);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    evaluate(sys, t + c5 * h, tmp, k5, traj.stats);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double t_new = last ? t1 : t + h;
    evaluate(sys, t_new, tmp, k6, traj.stats);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    evaluate(sys, t_new, y1, k7, traj.stats);

    err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = (y1.allFinite() && k7.allFinite()) ? error_norm(err_vec, y, y1, tol)
                                                          : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      ++traj.stats.accepted;
      // dense output coefficients
      r1 = y;
      r2 = y1 - y;
      r3 = h * k1 - r2;
      r4 = r2 - h * k7 - r3;
      r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      const double t_old = t;
      const double h_used = h;
      emit_outputs(output_times, next, t_new, last, traj, [&](double to) {
        if (to >= t_new) return Vector(y1);
        const double th = (to - t_old) / h_used;
        const double th1 = 1.0 - th;
        return Vector(r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5))));
      });
      y = y1;
      k1 = k7;  // FSAL
      t = t_new;
      const double fac11 = std::pow(err, expo);
      double fac = fac11 / std::pow(fac_old, beta) / safe;
      fac = std::clamp(fac, 1.0 / fac_max, 1.0 / fac_min);
      double h_new = h / fac;
      if (rejected_before) h_new = std::min(h_new, h);
      fac_old = std::max(err, 1e-4);
      rejected_before = false;
      h = std::min(h_new, tol.max_step);
    } else {
      ++traj.stats.rejected;
      last = false;
      const double fac11 = std::isfinite(err) ? std::pow(err, expo) : 10.0;
      h = h / std::min(1.0 / fac_min, fac11 / safe);
      rejected_before = true;
    }
  }
  return traj;
}

Eigen::MatrixXd numeric_jacobian(const OdeSystem& sys, double t, const Vector& y, const Vector& f0) {
  const auto n = y.size();
  Eigen::MatrixXd jac(n, n);
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  const double scale = y.lpNorm<Eigen::Infinity>();
  Vector yp = y;
  Vector fp(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double delta = sqrt_eps * std::max({std::abs(y[j]), 1e-3 * scale, 1e-10});
    yp[j] = y[j] + delta;
    sys.rhs(t, yp, fp);
    jac.col(j) = (fp - f0) / (yp[j] - y[j]);
    yp[j] = y[j];
  }
  return jac;
}

Trajectory integrate_stiff(const OdeSystem& sys, double t0, double t1, const Vector& state0,
                           const ToleranceSpec& tol, std::span<const double> output_times) {
  tol.validate();
  check_outputs(t0, t1, output_times);
  if (sys.jacobian != JacobianPolicy::numeric)
    throw ConfigurationError("stiff integration requires a numeric Jacobian policy");

  const double gamma = 2.0 - std::sqrt(2.0);
  const double d = gamma / 2.0;
  const double w_gamma = 1.0 / (gamma * (2.0 - gamma));
  const double w_n = (1.0 - gamma) * (1.0 - gamma) / (gamma * (2.0 - gamma));
  // local truncation error constant
  const double err_const = (-3.0 * gamma * gamma + 4.0 * gamma - 2.0) / (12.0 * (2.0 - gamma));
  constexpr int kMaxNewton = 6;

  const auto n = static_cast<Eigen::Index>(state0.size());
  Trajectory traj;
  Vector y = state0, fy(n), yg(n), fg(n), y1(n), f1(n), rhs_const(n), res(n), delta(n), est(n);
  double t = t0;
  std::size_t next = 0;
  emit_outputs(output_times, next, t0, false, traj, [&](double) { return y; });

  evaluate(sys, t, y, fy, traj.stats);
  if (!fy.allFinite()) throw IntegrationError("non-finite derivative at start", t);
  double h = initial_step(sys, t0, t1, y, fy, tol, 2, traj.stats);
  const double h_floor = kUnderflowFraction * (t1 - t0);

  Eigen::MatrixXd jac = numeric_jacobian(sys, t, y, fy);
  traj.stats.rhs_evaluations += static_cast<std::size_t>(n);
  ++traj.stats.jacobians;
  bool jac_fresh = true;
  double h_factored = -1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;

  auto scaled_norm = [&](const Vector& v, const Vector& ref) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      m = std::max(m, std::abs(v[i]) / (tol.abs_tol + tol.rel_tol * std::abs(ref[i])));
    return m;
  };

  // Solves z - d h f(tz, z) = c for z, starting from z; returns false on divergence.
  auto newton = [&](double tz, Vector& z, Vector& fz, const Vector& c, int& iterations) {
    double prev = 0.0;
    for (int k = 0; k < kMaxNewton; ++k) {
      evaluate(sys, tz, z, fz, traj.stats);
      if (!fz.allFinite()) return false;
      res = z - d * h * fz - c;
      delta = lu.solve(-res);
      z += delta;
      iterations = k + 1;
      const double norm = scaled_norm(delta, z);
      if (!std::isfinite(norm)) return false;
      if (norm <= 1e-2) {
        evaluate(sys, tz, z, fz, traj.stats);
        return fz.allFinite();
      }
      if (k > 0) {
        const double rate = norm / prev;
        if (rate >= 0.9) return false;
        if (rate / (1.0 - rate) * norm <= 5e-2) {
          evaluate(sys, tz, z, fz, traj.stats);
          return fz.allFinite();
        }
      }
      prev = norm;
    }
    return false;
  };

  bool last = false;
  while (!last) {
    h = std::min(h, tol.max_step);
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < h_floor) throw StiffnessError("step size underflow at t = " + std::to_string(t), t);
    if (h != h_factored) {
      lu.compute(Eigen::MatrixXd::Identity(n, n) - d * h * jac);
      ++traj.stats.factorizations;
      h_factored = h;
    }

    const double tg = t + gamma * h;
    const double t_new = last ? t1 : t + h;
    int it1 = 0, it2 = 0;

    // trapezoidal stage
    rhs_const = y + d * h * fy;
    yg = y + gamma * h * fy;
    bool ok = newton(tg, yg, fg, rhs_const, it1);
    if (ok) {
      // BDF2 stage
      rhs_const = w_gamma * yg - w_n * y;
      y1 = yg + ((1.0 - gamma) / gamma) * (yg - y);
      ok = newton(t_new, y1, f1, rhs_const, it2);
    }

    if (!ok) {
      ++traj.stats.rejected;
      last = false;
      if (!jac_fresh) {
        jac = numeric_jacobian(sys, t, y, fy);
        traj.stats.rhs_evaluations += static_cast<std::size_t>(n);
        ++traj.stats.jacobians;
        jac_fresh = true;
        h_factored = -1.0;
      } else {
        h *= 0.25;
        if (h < h_floor)
          throw StiffSolveError("Newton iteration failed to converge at t = " + std::to_string(t), t);
      }
      continue;
    }

    est = (2.0 * err_const * h) * (fy / gamma - fg / (gamma * (1.0 - gamma)) + f1 / (1.0 - gamma));
    est = lu.solve(est);
    const double err = error_norm(est, y, y1, tol);
    double fac = err > 0.0 ? 0.9 * std::pow(err, -1.0 / 3.0) : 5.0;

    if (err <= 1.0) {
      ++traj.stats.accepted;
      const double t_old = t;
      const double h_used = t_new - t;
      const Vector y_old = y, f_old = fy;
      emit_outputs(output_times, next, t_new, last, traj, [&](double to) {
        if (to >= t_new) return Vector(y1);
        const double s = (to - t_old) / h_used;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return Vector(h00 * y_old + h10 * h_used * f_old + h01 * y1 + h11 * h_used * f1);
      });
      y = y1;
      fy = f1;
      t = t_new;
      if (it1 + it2 > 6) {
        jac = numeric_jacobian(sys, t, y, fy);
        traj.stats.rhs_evaluations += static_cast<std::size_t>(n);
        ++traj.stats.jacobians;
        h_factored = -1.0;
        jac_fresh = true;
      } else {
        jac_fresh = false;
      }
      fac = std::clamp(fac, 0.2, 5.0);
      // keep the factorization when the change would be marginal
      if (fac < 1.0 || fac > 1.2) h *= fac;
    } else {
      ++traj.stats.rejected;
      last = false;
      h *= std::clamp(fac, 0.1, 0.9);
    }
  }
  return traj;
}

}  // namespace difftrio::ode
