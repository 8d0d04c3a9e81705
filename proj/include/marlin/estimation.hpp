#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "marlin/angles.hpp"
#include "marlin/errors.hpp"
#include "marlin/measurement.hpp"
#include "marlin/types.hpp"

namespace marlin {

/// Filter state: mean, covariance and the time they refer to. Covariances
/// are kept symmetric by the operations that produce them.
struct GaussianBelief {
  VecX mean;
  MatX covariance;
  double timestamp{0.0};
};

/// Unscented-transform parameters plus per-step process noise. Q is the
/// noise added over one step of length dt; partial steps scale it linearly.
struct UkfConfig {
  double alpha{0.1};
  double beta{2.0};
  double kappa{0.0};
  MatX process_noise;
  double dt{0.02};
};

/// Discrete linear prediction model: one step of x -> A x with additive Q.
struct LkfConfig {
  MatX transition;      // discrete A over one dt step
  MatX process_noise;   // Q per step
  double dt{0.02};
  std::vector<int> state_angle_indices;
};

/// Continuous-time dynamics for the UKF with the state's angle entries.
struct UkfModel {
  std::function<void(const VecX&, VecX&)> derivative;
  std::vector<int> state_angle_indices;
};

/// Measurement function for the UKF with the measurement's angle channels.
struct MeasurementModel {
  std::function<VecX(const VecX&)> h;
  std::vector<int> angle_channels;
};

/// Linear measurement y = H x for the LKF.
struct LinearMeasurementModel {
  MatX h;
  std::vector<int> angle_channels;
};

namespace detail {

inline void symmetrize(MatX& m) { m = 0.5 * (m + m.transpose()).eval(); }

/// Cholesky factor of P, adding escalating diagonal jitter on failure.
/// Gives up after three attempts.
inline MatX cholesky_with_jitter(const MatX& p) {
  Eigen::LLT<MatX> llt(p);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  double jitter = 1e-12 * std::max(p.trace(), 1e-300);
  for (int attempt = 0; attempt < 3; ++attempt) {
    MatX padded = p + jitter * MatX::Identity(p.rows(), p.cols());
    llt.compute(padded);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    jitter *= 10.0;
  }
  throw CovarianceNotPdError("covariance not positive definite after jitter attempts");
}

inline void wrap_indices(VecX& v, const std::vector<int>& idx) {
  for (int i : idx) v[i] = wrap_angle(v[i]);
}

/// Weighted mean of column vectors where the listed entries are angles.
/// Angle entries are averaged as offsets from the first column.
inline VecX angle_aware_mean(const MatX& points, const VecX& weights,
                             const std::vector<int>& angle_indices) {
  VecX mean = points * weights;
  for (int a : angle_indices) {
    const double ref = points(a, 0);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      acc += weights[j] * wrap_angle(points(a, j) - ref);
    }
    mean[a] = wrap_angle(ref + acc);
  }
  return mean;
}

/// Residuals of columns about a mean, wrapping the listed angle entries.
inline MatX residuals_about(const MatX& points, const VecX& mean,
                            const std::vector<int>& angle_indices) {
  MatX d = points.colwise() - mean;
  for (int a : angle_indices) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) d(a, j) = wrap_angle(d(a, j));
  }
  return d;
}

struct SigmaPoints {
  MatX points;   // n x (2n+1)
  VecX wm;       // mean weights
  VecX wc;       // covariance weights
};

inline SigmaPoints make_sigma_points(const GaussianBelief& belief, const UkfConfig& cfg) {
  const auto n = belief.mean.size();
  const double lambda = cfg.alpha * cfg.alpha * (static_cast<double>(n) + cfg.kappa) -
                        static_cast<double>(n);
  const double scale = static_cast<double>(n) + lambda;
  if (!(scale > 0.0)) throw ConfigError("sigma point scaling must be positive");

  SigmaPoints sp;
  sp.points.resize(n, 2 * n + 1);
  sp.wm = VecX::Constant(2 * n + 1, 1.0 / (2.0 * scale));
  sp.wc = sp.wm;
  sp.wm[0] = lambda / scale;
  sp.wc[0] = lambda / scale + (1.0 - cfg.alpha * cfg.alpha + cfg.beta);

  const MatX l = cholesky_with_jitter(belief.covariance) * std::sqrt(scale);
  sp.points.col(0) = belief.mean;
  for (Eigen::Index i = 0; i < n; ++i) {
    sp.points.col(1 + i) = belief.mean + l.col(i);
    sp.points.col(1 + n + i) = belief.mean - l.col(i);
  }
  return sp;
}

}  // namespace detail

/// Classical fourth-order Runge-Kutta step.
template <class Derivative>
VecX rk4_step(Derivative&& deriv, const VecX& state, double dt) {
  if (!(dt > 0.0)) throw DomainError("rk4 step size must be positive");
  const VecX k1 = deriv(state);
  const VecX k2 = deriv((state + 0.5 * dt * k1).eval());
  const VecX k3 = deriv((state + 0.5 * dt * k2).eval());
  const VecX k4 = deriv((state + dt * k3).eval());
  return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {

/// In-place RK4 using a shared scratch block to avoid reallocation.
inline void rk4_step_inplace(const std::function<void(const VecX&, VecX&)>& deriv, VecX& x,
                             double dt, VecX& k1, VecX& k2, VecX& k3, VecX& k4, VecX& tmp) {
  deriv(x, k1);
  tmp = x + (0.5 * dt) * k1;
  deriv(tmp, k2);
  tmp = x + (0.5 * dt) * k2;
  deriv(tmp, k3);
  tmp = x + dt * k3;
  deriv(tmp, k4);
  x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// UKF prediction over an arbitrary horizon. The horizon is split into steps
/// no longer than cfg.dt; each step propagates fresh sigma points through
/// RK4 and adds process noise scaled by the step length.
inline GaussianBelief ukf_predict(const GaussianBelief& belief, const UkfModel& model,
                                  const UkfConfig& cfg, double horizon_dt) {
  if (horizon_dt < 0.0) throw DomainError("prediction horizon must be non-negative");
  if (!(cfg.dt > 0.0)) throw ConfigError("filter step must be positive");
  GaussianBelief out = belief;
  if (horizon_dt == 0.0) return out;

  const auto n = belief.mean.size();
  if (cfg.process_noise.rows() != n || cfg.process_noise.cols() != n) {
    throw DimensionMismatchError("process noise dimension does not match state");
  }

  double remaining = horizon_dt;
  VecX k1(n), k2(n), k3(n), k4(n), tmp(n);
  while (remaining > 1e-12) {
    const double h = std::min(remaining, cfg.dt);
    detail::SigmaPoints sp = detail::make_sigma_points(out, cfg);
    for (Eigen::Index j = 0; j < sp.points.cols(); ++j) {
      VecX col = sp.points.col(j);
      detail::rk4_step_inplace(model.derivative, col, h, k1, k2, k3, k4, tmp);
      sp.points.col(j) = col;
    }
    out.mean = detail::angle_aware_mean(sp.points, sp.wm, model.state_angle_indices);
    const MatX d = detail::residuals_about(sp.points, out.mean, model.state_angle_indices);
    out.covariance = d * sp.wc.asDiagonal() * d.transpose();
    out.covariance += (h / cfg.dt) * cfg.process_noise;
    detail::symmetrize(out.covariance);
    detail::wrap_indices(out.mean, model.state_angle_indices);
    out.timestamp += h;
    remaining -= h;
  }
  out.timestamp = belief.timestamp + horizon_dt;
  return out;
}

/// UKF correction. Returns the posterior and the innovation record holding
/// the wrapped residual and the innovation covariance used in the gain.
inline std::pair<GaussianBelief, InnovationRecord> ukf_correct(const GaussianBelief& belief,
                                                               const Measurement& meas,
                                                               const MeasurementModel& model,
                                                               const UkfConfig& cfg,
                                                               const std::vector<int>&
                                                                   state_angle_indices = {}) {
  const auto m = meas.value.size();
  if (meas.noise.rows() != m || meas.noise.cols() != m) {
    throw DimensionMismatchError("measurement noise dimension does not match value");
  }

  detail::SigmaPoints sp = detail::make_sigma_points(belief, cfg);
  MatX y(m, sp.points.cols());
  for (Eigen::Index j = 0; j < sp.points.cols(); ++j) {
    const VecX yj = model.h(sp.points.col(j));
    if (yj.size() != m) throw DimensionMismatchError("measurement model dimension mismatch");
    y.col(j) = yj;
  }

  const VecX y_hat = detail::angle_aware_mean(y, sp.wm, model.angle_channels);
  const MatX dy = detail::residuals_about(y, y_hat, model.angle_channels);
  const MatX dx = detail::residuals_about(sp.points, belief.mean, state_angle_indices);

  MatX s = dy * sp.wc.asDiagonal() * dy.transpose() + meas.noise;
  detail::symmetrize(s);
  const MatX p_xy = dx * sp.wc.asDiagonal() * dy.transpose();

  Eigen::LLT<MatX> s_llt(s);
  if (s_llt.info() != Eigen::Success) {
    throw CovarianceNotPdError("innovation covariance not positive definite");
  }
  const MatX gain = s_llt.solve(p_xy.transpose()).transpose();

  VecX innovation = meas.value - y_hat;
  detail::wrap_indices(innovation, model.angle_channels);

  GaussianBelief post;
  post.timestamp = belief.timestamp;
  post.mean = belief.mean + gain * innovation;
  detail::wrap_indices(post.mean, state_angle_indices);
  post.covariance = belief.covariance - gain * p_xy.transpose() - p_xy * gain.transpose() +
                    gain * s * gain.transpose();
  detail::symmetrize(post.covariance);

  InnovationRecord record;
  record.timestamp = meas.timestamp;
  record.sensor = meas.sensor;
  record.innovation = innovation;
  record.covariance = s;
  return {std::move(post), std::move(record)};
}

/// LKF prediction: one discrete step, mean through A, covariance through
/// A P A^T + Q, symmetrized.
inline GaussianBelief lkf_predict(const GaussianBelief& belief, const LkfConfig& cfg) {
  const auto n = belief.mean.size();
  if (cfg.transition.rows() != n || cfg.transition.cols() != n) {
    throw DimensionMismatchError("transition dimension does not match state");
  }
  GaussianBelief out;
  out.mean = cfg.transition * belief.mean;
  detail::wrap_indices(out.mean, cfg.state_angle_indices);
  out.covariance = cfg.transition * belief.covariance * cfg.transition.transpose() +
                   cfg.process_noise;
  detail::symmetrize(out.covariance);
  out.timestamp = belief.timestamp + cfg.dt;
  return out;
}

/// LKF correction with Joseph-form covariance update.
inline std::pair<GaussianBelief, InnovationRecord> lkf_correct(const GaussianBelief& belief,
                                                               const Measurement& meas,
                                                               const LinearMeasurementModel& model,
                                                               const std::vector<int>&
                                                                   state_angle_indices = {}) {
  const auto m = meas.value.size();
  if (model.h.rows() != m || model.h.cols() != belief.mean.size()) {
    throw DimensionMismatchError("measurement matrix dimension mismatch");
  }
  if (meas.noise.rows() != m || meas.noise.cols() != m) {
    throw DimensionMismatchError("measurement noise dimension does not match value");
  }

  MatX s = model.h * belief.covariance * model.h.transpose() + meas.noise;
  detail::symmetrize(s);
  Eigen::LLT<MatX> s_llt(s);
  if (s_llt.info() != Eigen::Success) {
    throw CovarianceNotPdError("innovation covariance not positive definite");
  }
  const MatX gain = s_llt.solve(model.h * belief.covariance).transpose();

  VecX innovation = meas.value - model.h * belief.mean;
  detail::wrap_indices(innovation, model.angle_channels);

  const auto n = belief.mean.size();
  const MatX ikh = MatX::Identity(n, n) - gain * model.h;

  GaussianBelief post;
  post.timestamp = belief.timestamp;
  post.mean = belief.mean + gain * innovation;
  detail::wrap_indices(post.mean, state_angle_indices);
  post.covariance = ikh * belief.covariance * ikh.transpose() +
                    gain * meas.noise * gain.transpose();
  detail::symmetrize(post.covariance);

  InnovationRecord record;
  record.timestamp = meas.timestamp;
  record.sensor = meas.sensor;
  record.innovation = innovation;
  record.covariance = s;
  return {std::move(post), std::move(record)};
}

/// Receding-horizon prediction: element k of the result is the belief k+1
/// prediction steps ahead of the seed.
inline std::vector<GaussianBelief> predict_horizon(
    const GaussianBelief& belief, int steps,
    const std::function<GaussianBelief(const GaussianBelief&)>& predictor) {
  if (steps < 1) throw DomainError("prediction horizon needs at least one step");
  std::vector<GaussianBelief> out;
  out.reserve(static_cast<size_t>(steps));
  GaussianBelief current = belief;
  for (int k = 0; k < steps; ++k) {
    current = predictor(current);
    out.push_back(current);
  }
  return out;
}

}  // namespace marlin
