#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tcpgds/activation.hpp"
#include "tcpgds/fischer_burmeister.hpp"
#include "tcpgds/problem.hpp"

namespace tcpgds {

/// The flow model: problem, residual-shaping activation, and the positive
/// scaling gain gamma. Gamma is the reciprocal of a hardware time constant;
/// it only relabels the physical time axis, so integration happens in the
/// scaled clock tau = gamma * t and gamma never enters the vector field.
struct GdsModel {
  GdsModel(TcpProblem problem_, ActivationSpec activation_, double gamma_)
      : problem(std::move(problem_)), activation(activation_), gamma(gamma_) {
    if (!(gamma > 0.0)) throw std::invalid_argument("GdsModel: gamma must be positive");
  }

  TcpProblem problem;
  ActivationSpec activation;
  double gamma;
};

/// dx/dtau = -V^T f(Phi(x)): the gradient flow in scaled time.
inline Vector scaled_flow_field(const GdsModel& model, std::span<const double> x) {
  Vector shaped = apply_vector(model.activation, residual(model.problem, x));
  Vector g = multiply_transposed(generalized_jacobian(model.problem, x), shaped);
  for (double& v : g) v = -v;
  return g;
}

/// dx/dt = -gamma V^T f(Phi(x)): the flow in physical time.
inline Vector flow_field(const GdsModel& model, std::span<const double> x) {
  Vector g = scaled_flow_field(model, x);
  for (double& v : g) v *= model.gamma;
  return g;
}

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::rk45_adaptive;
  double step = 1e-2;        // fixed step, or initial step for the adaptive method
  double t_max = 100.0;      // horizon in scaled time
  double res_tol = 1e-8;     // stopping residual norm
  std::size_t max_steps = 1'000'000;
  std::size_t record_every = 1;  // trajectory thinning
  double rel_tol = 1e-8;     // adaptive local error control
  double abs_tol = 1e-10;

  void validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("IntegratorConfig: step must be positive");
    if (!(t_max > 0.0)) throw std::invalid_argument("IntegratorConfig: t_max must be positive");
    if (!(res_tol > 0.0)) throw std::invalid_argument("IntegratorConfig: res_tol must be positive");
    if (max_steps < 1) throw std::invalid_argument("IntegratorConfig: max_steps must be >= 1");
    if (record_every < 1) throw std::invalid_argument("IntegratorConfig: record_every must be >= 1");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("IntegratorConfig: error tolerances must be positive");
  }
};

enum class TerminationStatus { converged, horizon_reached, step_failure };

inline const char* to_string(TerminationStatus status) {
  switch (status) {
    case TerminationStatus::converged: return "converged";
    case TerminationStatus::horizon_reached: return "horizon_reached";
    case TerminationStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

/// Recorded flow history in the scaled clock. times is strictly increasing;
/// residuals[k] is the residual norm at states[k]; the last recorded point is
/// always the final integrator state regardless of thinning.
struct Trajectory {
  std::vector<double> times;    // scaled time tau
  std::vector<Vector> states;
  std::vector<double> residuals;
  TerminationStatus status = TerminationStatus::horizon_reached;
  std::size_t steps_taken = 0;  // accepted steps
  std::string diagnostic;       // set on step_failure

  const Vector& final_state() const { return states.back(); }
  double final_residual() const { return residuals.back(); }
  double final_time() const { return times.back(); }
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  // Difference between the 5th- and embedded 4th-order weights.
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
};

class TrajectoryRecorder {
 public:
  TrajectoryRecorder(Trajectory& traj, std::size_t record_every)
      : traj_(traj), record_every_(record_every) {}

  void record_initial(const Vector& x, double res) { push(0.0, x, res); }

  void record_step(std::size_t accepted_steps, double tau, const Vector& x, double res) {
    if (accepted_steps % record_every_ == 0) push(tau, x, res);
  }

  void record_final(double tau, const Vector& x, double res) {
    if (!traj_.times.empty() && traj_.times.back() == tau) return;  // already recorded
    push(tau, x, res);
  }

 private:
  void push(double tau, const Vector& x, double res) {
    traj_.times.push_back(tau);
    traj_.states.push_back(x);
    traj_.residuals.push_back(res);
  }

  Trajectory& traj_;
  std::size_t record_every_;
};

inline double error_norm(const Vector& err, const Vector& y_old, const Vector& y_new,
                         double rel_tol, double abs_tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    double scale = abs_tol + rel_tol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
    double r = err[i] / scale;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace detail

/// Integrates dx/dtau = -V^T f(Phi(x)) from x0 until the residual norm drops
/// to cfg.res_tol (converged), the scaled horizon t_max is reached, the step
/// budget runs out (horizon_reached), or the step size underflows or the
/// state stops being finite (step_failure).
inline Trajectory integrate(const GdsModel& model, Vector x0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (x0.size() != static_cast<std::size_t>(model.problem.dim()))
    throw std::invalid_argument("integrate: x0 length does not match problem dimension");
  if (!all_finite(x0)) throw std::invalid_argument("integrate: x0 has non-finite entries");

  Trajectory traj;
  detail::TrajectoryRecorder recorder(traj, cfg.record_every);

  const std::size_t n = x0.size();
  Vector x = std::move(x0);
  double res = residual_norm(model.problem, x);
  recorder.record_initial(x, res);
  if (res <= cfg.res_tol) {
    traj.status = TerminationStatus::converged;
    return traj;
  }

  auto field = [&model](const Vector& y) { return scaled_flow_field(model, y); };
  double tau = 0.0;

  auto finish = [&](TerminationStatus status, std::string diagnostic = {}) {
    traj.status = status;
    traj.diagnostic = std::move(diagnostic);
    recorder.record_final(tau, x, res);
    return traj;
  };

  if (cfg.method == IntegratorMethod::rk4_fixed) {
    Vector k1(n), k2(n), k3(n), k4(n), probe(n);
    while (traj.steps_taken < cfg.max_steps) {
      double h = std::min(cfg.step, cfg.t_max - tau);
      k1 = field(x);
      for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + 0.5 * h * k1[i];
      k2 = field(probe);
      for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + 0.5 * h * k2[i];
      k3 = field(probe);
      for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + h * k3[i];
      k4 = field(probe);
      for (std::size_t i = 0; i < n; ++i)
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      tau += h;
      ++traj.steps_taken;
      if (!all_finite(x)) return finish(TerminationStatus::step_failure,
                                        "non-finite state after fixed step");
      res = residual_norm(model.problem, x);
      recorder.record_step(traj.steps_taken, tau, x, res);
      if (res <= cfg.res_tol) return finish(TerminationStatus::converged);
      if (tau >= cfg.t_max) return finish(TerminationStatus::horizon_reached);
    }
    return finish(TerminationStatus::horizon_reached, "step budget exhausted");
  }

  // Adaptive Dormand-Prince 5(4) with FSAL.
  using T = detail::Dopri5;
  constexpr double kSafety = 0.9;
  constexpr double kShrinkLimit = 0.2;
  constexpr double kGrowLimit = 5.0;

  Vector k1 = field(x), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Vector y_new(n), err(n), probe(n);
  double h = std::min(cfg.step, cfg.t_max);
  bool rejected_last = false;

  while (traj.steps_taken < cfg.max_steps) {
    h = std::min(h, cfg.t_max - tau);
    double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(tau), 1.0);
    if (!(h > floor))
      return finish(TerminationStatus::step_failure,
                    "step size underflow at tau=" + std::to_string(tau));

    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + h * T::a21 * k1[i];
    k2 = field(probe);
    for (std::size_t i = 0; i < n; ++i)
      probe[i] = x[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
    k3 = field(probe);
    for (std::size_t i = 0; i < n; ++i)
      probe[i] = x[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    k4 = field(probe);
    for (std::size_t i = 0; i < n; ++i)
      probe[i] = x[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
    k5 = field(probe);
    for (std::size_t i = 0; i < n; ++i)
      probe[i] = x[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] +
                             T::a65 * k5[i]);
    k6 = field(probe);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = x[i] + h * (T::b1 * k1[i] + T::b3 * k3[i] + T::b4 * k4[i] + T::b5 * k5[i] +
                             T::b6 * k6[i]);
    k7 = field(y_new);

    if (!all_finite(y_new) || !all_finite(k7)) {
      h *= 0.5;
      rejected_last = true;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                    T::e6 * k6[i] + T::e7 * k7[i]);
    double err_norm = detail::error_norm(err, x, y_new, cfg.rel_tol, cfg.abs_tol);

    if (err_norm <= 1.0) {
      tau += h;
      x = y_new;
      k1 = k7;  // FSAL
      ++traj.steps_taken;
      res = residual_norm(model.problem, x);
      recorder.record_step(traj.steps_taken, tau, x, res);
      if (res <= cfg.res_tol) return finish(TerminationStatus::converged);
      if (tau >= cfg.t_max) return finish(TerminationStatus::horizon_reached);
      double grow = rejected_last ? 1.0 : kGrowLimit;
      double factor = err_norm == 0.0 ? grow
                                      : std::clamp(kSafety * std::pow(err_norm, -0.2),
                                                   kShrinkLimit, grow);
      h *= factor;
      rejected_last = false;
    } else {
      h *= std::clamp(kSafety * std::pow(err_norm, -0.2), kShrinkLimit, 1.0);
      rejected_last = true;
    }
  }
  return finish(TerminationStatus::horizon_reached, "step budget exhausted");
}

/// Descent audit over a recorded trajectory: checks the merit sequence
/// (half squared residuals) is nonincreasing up to 1e-10 * (1 + initial
/// merit). A violation indicates the discretization stepped too far, not a
/// defect of the flow itself.
struct LyapunovReport {
  bool monotone = true;
  std::size_t first_violation = npos;
  double max_uptick = 0.0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline LyapunovReport lyapunov_audit(const Trajectory& traj) {
  if (traj.residuals.empty()) throw std::invalid_argument("lyapunov_audit: empty trajectory");
  auto level = [&](std::size_t k) { return 0.5 * traj.residuals[k] * traj.residuals[k]; };
  const double tolerance = 1e-10 * (1.0 + level(0));
  LyapunovReport report;
  for (std::size_t k = 0; k + 1 < traj.residuals.size(); ++k) {
    double uptick = level(k + 1) - level(k);
    if (uptick > tolerance) {
      if (report.monotone) {
        report.monotone = false;
        report.first_violation = k + 1;
      }
      report.max_uptick = std::max(report.max_uptick, uptick);
    }
  }
  return report;
}

}  // namespace tcpgds
