#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "marlin/errors.hpp"
#include "marlin/estimation.hpp"
#include "marlin/measurement.hpp"
#include "marlin/scenario.hpp"
#include "marlin/sensors.hpp"
#include "marlin/types.hpp"
#include "marlin/vessel.hpp"
#include "marlin/waves.hpp"

namespace marlin {

/// Ground-truth trajectory on the truth integration grid.
struct TruthTrajectory {
  double dt{0.0};
  std::vector<double> times;
  std::vector<VecX> states;  // augmented nonlinear layout
  WaveBankLayout layout;

  [[nodiscard]] size_t index_at(double t) const {
    const auto idx = static_cast<long>(std::llround(t / dt));
    if (idx < 0 || idx >= static_cast<long>(states.size()) ||
        std::abs(t - static_cast<double>(idx) * dt) > 1e-6) {
      throw ConfigError("time " + std::to_string(t) + " is not on the truth grid");
    }
    return static_cast<size_t>(idx);
  }

  [[nodiscard]] const VecX& at_time(double t) const { return states[index_at(t)]; }

  [[nodiscard]] EulerPose pose_at(double t) const {
    return EulerPose::from_vec(at_time(t).head<6>());
  }

  [[nodiscard]] BodyTwist twist_at(double t) const {
    return BodyTwist::from_vec(at_time(t).segment<6>(6));
  }
};

/// Integrates the wave-forced nonlinear model at the truth step. Twist
/// disturbances (scenario process noise) enter as seeded velocity increments
/// after each step; pose angles are normalized every step.
inline TruthTrajectory run_truth(const Scenario& sc) {
  sc.validate();
  const VesselParams params = sc.vessel.make_params();

  Rng rng(derive_seed(sc.seed, "truth"));
  std::vector<double> phases(sc.total_wave_components());
  for (auto& p : phases) p = rng.angle();

  AugmentedNonlinearState s0;
  s0.pose = sc.initial_pose.normalized();
  s0.twist = sc.initial_twist;
  s0.banks = sc.make_truth_banks(phases);

  TruthTrajectory traj;
  traj.dt = sc.truth_dt;
  traj.layout = s0.layout();

  const auto steps = static_cast<long>(std::llround(sc.duration / sc.truth_dt));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  VecX x = s0.to_vector();
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  const bool noisy = sc.twist_noise_psd.maxCoeff() > 0.0;
  Vec6 step_std = (sc.twist_noise_psd * sc.truth_dt).cwiseSqrt();

  VecX k1, k2, k3, k4, tmp;
  auto deriv = [&](const VecX& s, VecX& ds) { full_nonlinear_derivative(s, params, traj.layout, ds); };
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * sc.truth_dt;
    try {
      detail::rk4_step_inplace(deriv, x, sc.truth_dt, k1, k2, k3, k4, tmp);
    } catch (const SingularityError& e) {
      throw SingularityError(std::string(e.what()) + " at truth time " + std::to_string(t));
    }
    if (noisy) {
      for (int i = 0; i < 6; ++i) x[6 + i] += step_std[i] * rng.gaussian();
    }
    const EulerPose normalized = EulerPose::from_vec(x.head<6>()).normalized();
    x.head<6>() = normalized.vec();
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

/// UAV pose used for relative-pose gating at time t: hovers at the configured
/// offset from the (lagged) USV position with level attitude.
inline UavPose uav_pose_at(const Scenario& sc, const TruthTrajectory& truth, double t) {
  const double lag_t = std::max(0.0, t - sc.uav.lag);
  const double snapped = std::round(lag_t / truth.dt) * truth.dt;
  UavPose uav;
  uav.position = truth.pose_at(snapped).position() + sc.uav.hover_offset;
  uav.angles = EulerAngles{0.0, 0.0, sc.uav.yaw};
  uav.timestamp = t;
  return uav;
}

/// Generates the full measurement stream (all enabled sensors, link applied),
/// ordered by availability. Sample times snap to the truth grid.
inline std::vector<Measurement> generate_measurements(const Scenario& sc,
                                                      const TruthTrajectory& truth) {
  std::vector<Measurement> all;

  auto sample_times = [&](double rate) {
    std::vector<double> ts;
    const auto n = static_cast<long>(std::floor(sc.duration * rate + 1e-9));
    ts.reserve(n);
    for (long k = 1; k <= n; ++k) {
      const double t = std::round((static_cast<double>(k) / rate) / sc.truth_dt) * sc.truth_dt;
      if (t <= sc.duration + 1e-9) ts.push_back(t);
    }
    return ts;
  };

  if (sc.sensors.gps_enabled) {
    Rng rng(derive_seed(sc.seed, "gps"));
    for (double t : sample_times(sc.sensors.gps.rate)) {
      all.push_back(gps_measure(t, truth.pose_at(t), sc.sensors.gps, rng));
    }
  }
  if (sc.sensors.imu_enabled) {
    Rng rng(derive_seed(sc.seed, "imu"));
    for (double t : sample_times(sc.sensors.imu.rate)) {
      all.push_back(imu_measure(t, truth.pose_at(t), truth.twist_at(t), sc.sensors.imu, rng));
    }
  }
  if (sc.sensors.uvdar_enabled) {
    Rng rng(derive_seed(sc.seed, "uvdar"));
    for (double t : sample_times(sc.sensors.uvdar.rate)) {
      auto m = relative_pose_measure(t, SensorId::Uvdar, truth.pose_at(t), uav_pose_at(sc, truth, t),
                                     sc.sensors.uvdar, rng);
      if (m) all.push_back(std::move(*m));
    }
  }
  if (sc.sensors.apriltag_enabled) {
    Rng rng(derive_seed(sc.seed, "apriltag"));
    for (double t : sample_times(sc.sensors.apriltag.rate)) {
      if (!sc.sensors.apriltag_lit(t)) continue;
      auto m = relative_pose_measure(t, SensorId::Apriltag, truth.pose_at(t),
                                     uav_pose_at(sc, truth, t), sc.sensors.apriltag, rng);
      if (m) all.push_back(std::move(*m));
    }
  }

  std::stable_sort(all.begin(), all.end(), [](const Measurement& a, const Measurement& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return static_cast<int>(a.sensor) < static_cast<int>(b.sensor);
  });

  Rng link_rng(derive_seed(sc.seed, "link"));
  return comm_link_apply(all, sc.sensors.link, link_rng);
}

namespace detail {

/// Fourth-order Taylor polynomial of exp(h A); identical to one RK4 step of
/// the linear system, so the LKF and UKF share their discretization.
inline MatX discretize_rk4(const MatX& a, double h) {
  const MatX ha = h * a;
  const auto n = a.rows();
  MatX acc = MatX::Identity(n, n) + ha / 4.0;
  acc = MatX::Identity(n, n) + (ha / 3.0) * acc;
  acc = MatX::Identity(n, n) + (ha / 2.0) * acc;
  return MatX::Identity(n, n) + ha * acc;
}

inline std::vector<int> vessel_angle_indices() { return {3, 4, 5}; }

}  // namespace detail

/// Per-step diagonal process noise for the nonlinear filter state.
inline MatX build_nonlinear_q(const Scenario& sc, const WaveBankLayout& lay) {
  VecX qd = VecX::Zero(lay.state_dim());
  qd.segment<6>(0).setConstant(sc.filters.q_pose);
  for (int i = 0; i < 6; ++i) {
    qd[6 + i] = sc.filters.q_twist +
                (sc.filters.match_process_noise ? sc.twist_noise_psd[i] * sc.filter_dt : 0.0);
  }
  int off = 12;
  for (int a = 0; a < 6; ++a) {
    for (int k = 0; k < lay.components(a); ++k) {
      qd[off++] = sc.filters.q_wave;
      qd[off++] = sc.filters.q_wave;
      qd[off++] = sc.estimate_frequency ? sc.filters.q_freq : 0.0;
    }
  }
  return qd.asDiagonal();
}

/// Per-step diagonal process noise for the linear filter state.
inline MatX build_linear_q(const Scenario& sc, int n_lc) {
  VecX qd = VecX::Zero(12 + 12 * n_lc);
  qd.segment<6>(0).setConstant(sc.filters.q_pose);
  for (int i = 0; i < 6; ++i) {
    qd[6 + i] = sc.filters.q_twist +
                (sc.filters.match_process_noise ? sc.twist_noise_psd[i] * sc.filter_dt : 0.0);
  }
  qd.segment(12, 12 * n_lc).setConstant(sc.filters.q_wave);
  return qd.asDiagonal();
}

/// Measurement function of one sensor over the nonlinear state layout.
inline MeasurementModel nonlinear_measurement_model(SensorId id) {
  MeasurementModel m;
  switch (id) {
    case SensorId::Gps:
      m.h = [](const VecX& x) { return x.head(3).eval(); };
      break;
    case SensorId::Imu:
      m.h = [](const VecX& x) {
        VecX y(6);
        y << x[3], x[4], x[5], x[9], x[10], x[11];
        return y;
      };
      m.angle_channels = {0, 1, 2};
      break;
    default:
      m.h = [](const VecX& x) { return x.head(6).eval(); };
      m.angle_channels = {3, 4, 5};
      break;
  }
  return m;
}

/// Selector matrix of one sensor over the linear state layout.
inline LinearMeasurementModel linear_measurement_model(SensorId id, int state_dim) {
  LinearMeasurementModel m;
  switch (id) {
    case SensorId::Gps:
      m.h = MatX::Zero(3, state_dim);
      for (int i = 0; i < 3; ++i) m.h(i, i) = 1.0;
      break;
    case SensorId::Imu:
      m.h = MatX::Zero(6, state_dim);
      for (int i = 0; i < 3; ++i) {
        m.h(i, 3 + i) = 1.0;
        m.h(3 + i, 9 + i) = 1.0;
      }
      m.angle_channels = {0, 1, 2};
      break;
    default:
      m.h = MatX::Zero(6, state_dim);
      for (int i = 0; i < 6; ++i) m.h(i, i) = 1.0;
      m.angle_channels = {3, 4, 5};
      break;
  }
  return m;
}

/// Rotates a global position measurement into vessel-parallel coordinates
/// using the current yaw estimate; angle channels pass through.
inline Measurement to_vessel_parallel(const Measurement& m, double psi_hat) {
  if (m.sensor == SensorId::Imu) return m;
  const double c = std::cos(psi_hat), s = std::sin(psi_hat);
  Mat3 t = Mat3::Identity();
  t(0, 0) = c;
  t(0, 1) = s;
  t(1, 0) = -s;
  t(1, 1) = c;
  Measurement out = m;
  out.value.head(3) = t * m.value.head(3);
  out.noise.topLeftCorner(3, 3) = t * m.noise.topLeftCorner(3, 3) * t.transpose();
  return out;
}

/// 6DOF-N runner: UKF over the wave-augmented nonlinear model. The belief
/// advances only when a measurement is fused; read-outs at later times are
/// side predictions that leave the fusion state untouched.
class NonlinearFilterRunner {
 public:
  NonlinearFilterRunner(const Scenario& sc, GaussianBelief init)
      : params_(sc.vessel.make_params()), layout_(sc.wave_layout()), belief_(std::move(init)) {
    cfg_.alpha = sc.filters.ukf_alpha;
    cfg_.beta = sc.filters.ukf_beta;
    cfg_.kappa = sc.filters.ukf_kappa;
    cfg_.dt = sc.filter_dt;
    cfg_.process_noise = build_nonlinear_q(sc, layout_);
    model_.derivative = [this](const VecX& x, VecX& dx) {
      full_nonlinear_derivative(x, params_, layout_, dx);
    };
    model_.state_angle_indices = detail::vessel_angle_indices();
  }

  /// Fuses one measurement; returns nothing when it is older than the
  /// filter's fusion time (counted as late).
  std::optional<InnovationRecord> process(const Measurement& m) {
    if (m.timestamp < belief_.timestamp - 1e-9) {
      ++late_dropped_;
      return std::nullopt;
    }
    if (m.timestamp > belief_.timestamp) {
      belief_ = ukf_predict(belief_, model_, cfg_, m.timestamp - belief_.timestamp);
      belief_.timestamp = m.timestamp;
    }
    auto [post, record] =
        ukf_correct(belief_, m, nonlinear_measurement_model(m.sensor), cfg_,
                    model_.state_angle_indices);
    belief_ = std::move(post);
    return record;
  }

  /// Side prediction of the belief at time t >= fusion time.
  [[nodiscard]] GaussianBelief predicted_at(double t) const {
    if (t <= belief_.timestamp + 1e-12) return belief_;
    GaussianBelief b = ukf_predict(belief_, model_, cfg_, t - belief_.timestamp);
    b.timestamp = t;
    return b;
  }

  [[nodiscard]] std::vector<GaussianBelief> predict_sequence(double t_issue, int steps,
                                                             double step_dt) const {
    const GaussianBelief seed = predicted_at(t_issue);
    return predict_horizon(seed, steps, [this, step_dt](const GaussianBelief& b) {
      return ukf_predict(b, model_, cfg_, step_dt);
    });
  }

  /// Global vessel state (pose + twist) of a belief.
  [[nodiscard]] static Vec12 vessel_state(const GaussianBelief& b) {
    return b.mean.head<12>();
  }

  [[nodiscard]] const GaussianBelief& belief() const { return belief_; }
  [[nodiscard]] long late_dropped() const { return late_dropped_; }

 private:
  VesselParams params_;
  WaveBankLayout layout_;
  UkfConfig cfg_;
  UkfModel model_;
  GaussianBelief belief_;
  long late_dropped_{0};
};

/// 6DOF-L runner: LKF over the linear wave-augmented model in vessel-parallel
/// coordinates. Position measurements are rotated into the vessel-parallel
/// frame with the current yaw estimate before fusion.
class LinearFilterRunner {
 public:
  LinearFilterRunner(const Scenario& sc, GaussianBelief init)
      : filter_dt_(sc.filter_dt), belief_(std::move(init)) {
    const VesselParams params = sc.vessel.make_params();
    const auto banks = sc.make_linear_banks();
    n_lc_ = banks[0].n_components;
    for (const auto& b : banks) {
      if (b.n_components != n_lc_) {
        throw MismatchedBankSizesError("linear filter needs equal per-axis component counts");
      }
    }
    a_cont_ = build_full_linear_system(params, banks);
    q_per_step_ = build_linear_q(sc, n_lc_);
    angle_indices_ = detail::vessel_angle_indices();
  }

  std::optional<InnovationRecord> process(const Measurement& m) {
    if (m.timestamp < belief_.timestamp - 1e-9) {
      ++late_dropped_;
      return std::nullopt;
    }
    if (m.timestamp > belief_.timestamp) {
      belief_ = predict_by(belief_, m.timestamp - belief_.timestamp);
      belief_.timestamp = m.timestamp;
    }
    const Measurement local = to_vessel_parallel(m, belief_.mean[5]);
    auto model = linear_measurement_model(m.sensor, static_cast<int>(belief_.mean.size()));
    auto [post, record] = lkf_correct(belief_, local, model, angle_indices_);
    belief_ = std::move(post);
    return record;
  }

  [[nodiscard]] GaussianBelief predicted_at(double t) const {
    if (t <= belief_.timestamp + 1e-12) return belief_;
    GaussianBelief b = predict_by(belief_, t - belief_.timestamp);
    b.timestamp = t;
    return b;
  }

  [[nodiscard]] std::vector<GaussianBelief> predict_sequence(double t_issue, int steps,
                                                             double step_dt) const {
    const GaussianBelief seed = predicted_at(t_issue);
    return predict_horizon(seed, steps, [this, step_dt](const GaussianBelief& b) {
      return predict_by(b, step_dt);
    });
  }

  /// Global vessel state: the vessel-parallel pose mapped back with the
  /// estimated yaw.
  [[nodiscard]] static Vec12 vessel_state(const GaussianBelief& b) {
    Vec12 out;
    out.head<6>() = vessel_parallel_inverse(b.mean[5], b.mean.head<6>()).vec();
    out.tail<6>() = b.mean.segment<6>(6);
    return out;
  }

  [[nodiscard]] const GaussianBelief& belief() const { return belief_; }
  [[nodiscard]] long late_dropped() const { return late_dropped_; }
  [[nodiscard]] const MatX& system_matrix() const { return a_cont_; }

 private:
  [[nodiscard]] GaussianBelief predict_by(const GaussianBelief& b, double horizon) const {
    GaussianBelief out = b;
    double remaining = horizon;
    while (remaining > 1e-12) {
      const double h = std::min(remaining, filter_dt_);
      LkfConfig cfg;
      cfg.transition = transition_for(h);
      cfg.process_noise = (h / filter_dt_) * q_per_step_;
      cfg.dt = h;
      cfg.state_angle_indices = angle_indices_;
      out = lkf_predict(out, cfg);
      remaining -= h;
    }
    out.timestamp = b.timestamp + horizon;
    return out;
  }

  [[nodiscard]] const MatX& transition_for(double h) const {
    const auto key = static_cast<int64_t>(std::llround(h * 1e12));
    auto it = transition_cache_.find(key);
    if (it == transition_cache_.end()) {
      it = transition_cache_.emplace(key, detail::discretize_rk4(a_cont_, h)).first;
    }
    return it->second;
  }

  double filter_dt_;
  int n_lc_{0};
  MatX a_cont_;
  MatX q_per_step_;
  std::vector<int> angle_indices_;
  GaussianBelief belief_;
  mutable std::map<int64_t, MatX> transition_cache_;
  long late_dropped_{0};
};

/// One sampled estimate: global vessel state, the filter's internal wave
/// states, and the covariance diagonal (internal coordinates).
struct EstimateRow {
  double t{0.0};
  Vec12 vessel;
  VecX wave;
  VecX cov_diag;
};

struct PredictionRow {
  double t_issue{0.0};
  double t_target{0.0};
  Vec12 vessel;
};

struct FilterOutput {
  std::string name;
  std::vector<EstimateRow> estimates;
  std::vector<InnovationRecord> innovations;
  std::vector<PredictionRow> predictions;
  long late_dropped{0};
};

struct EstimationResult {
  std::optional<FilterOutput> nonlinear;
  std::optional<FilterOutput> linear;
};

/// Initial beliefs share one seeded draw of the vessel-state error so both
/// filters start from the same perturbed state. Wave states start at zero
/// mean with the configured variance inflation; the frequency states sit at
/// the scenario frequencies.
struct InitialBeliefs {
  GaussianBelief nonlinear;
  GaussianBelief linear;
};

inline InitialBeliefs make_initial_beliefs(const Scenario& sc, const VecX& truth0) {
  Rng rng(derive_seed(sc.seed, "init"));
  Vec12 vessel = truth0.head<12>();
  for (int i = 0; i < 6; ++i) vessel[i] += sc.init.pose_std[i] * rng.gaussian();
  for (int i = 0; i < 6; ++i) vessel[6 + i] += sc.init.twist_std[i] * rng.gaussian();
  for (int a : {3, 4, 5}) vessel[a] = wrap_angle(vessel[a]);

  InitialBeliefs out;

  const WaveBankLayout lay = sc.wave_layout();
  out.nonlinear.timestamp = 0.0;
  out.nonlinear.mean = VecX::Zero(lay.state_dim());
  out.nonlinear.mean.head<12>() = vessel;
  VecX nq = VecX::Zero(lay.state_dim());
  nq.head<6>() = sc.init.pose_std.cwiseProduct(sc.init.pose_std);
  nq.segment<6>(6) = sc.init.twist_std.cwiseProduct(sc.init.twist_std);
  {
    int off = 12;
    for (int a = 0; a < 6; ++a) {
      for (const auto& c : sc.waves[a]) {
        out.nonlinear.mean[off + 2] = c.omega * c.omega;
        const double amp_x1 = c.amplitude / c.omega;
        nq[off] = std::max(sc.init.wave_var_factor * amp_x1 * amp_x1, 1e-10);
        nq[off + 1] = std::max(sc.init.wave_var_factor * c.amplitude * c.amplitude, 1e-10);
        nq[off + 2] = std::max(sc.init.freq_var, 1e-12);
        off += 3;
      }
    }
  }
  out.nonlinear.covariance = nq.asDiagonal();

  const int n_lc = static_cast<int>(sc.waves[0].size());
  const int ldim = 12 + 12 * n_lc;
  out.linear.timestamp = 0.0;
  out.linear.mean = VecX::Zero(ldim);
  out.linear.mean.head<6>() = vessel_parallel(EulerPose::from_vec(vessel.head<6>()));
  out.linear.mean.segment<6>(6) = vessel.tail<6>();
  VecX lq = VecX::Zero(ldim);
  lq.head<6>() = sc.init.pose_std.cwiseProduct(sc.init.pose_std);
  lq.segment<6>(6) = sc.init.twist_std.cwiseProduct(sc.init.twist_std);
  {
    int off = 12;
    for (int a = 0; a < 6; ++a) {
      for (const auto& c : sc.waves[a]) {
        const double amp_x1 = c.amplitude / c.omega;
        lq[off] = std::max(sc.init.wave_var_factor * amp_x1 * amp_x1, 1e-10);
        lq[off + 1] = std::max(sc.init.wave_var_factor * c.amplitude * c.amplitude, 1e-10);
        off += 2;
      }
    }
  }
  out.linear.covariance = lq.asDiagonal();
  return out;
}

/// Runs the selected filters over the measurement stream: timestamp-ordered
/// predict/correct, estimates sampled on the filter grid, receding-horizon
/// predictions on the configured cadence.
inline EstimationResult run_estimation(const Scenario& sc, const TruthTrajectory& truth,
                                       const std::vector<Measurement>& measurements) {
  for (size_t i = 1; i < measurements.size(); ++i) {
    if (measurements[i].available_at < measurements[i - 1].available_at) {
      throw ConfigError("measurement stream must be ordered by availability");
    }
  }

  const InitialBeliefs init = make_initial_beliefs(sc, truth.states.front());

  std::optional<NonlinearFilterRunner> ukf;
  std::optional<LinearFilterRunner> lkf;
  EstimationResult result;
  const bool want_n = sc.filters.selection != FilterSelection::Linear;
  const bool want_l = sc.filters.selection != FilterSelection::Nonlinear;
  if (want_n) {
    ukf.emplace(sc, init.nonlinear);
    result.nonlinear.emplace();
    result.nonlinear->name = "nonlinear";
  }
  if (want_l) {
    lkf.emplace(sc, init.linear);
    result.linear.emplace();
    result.linear->name = "linear";
  }

  const auto n_grid = static_cast<long>(std::llround(sc.duration / sc.filter_dt));
  const int pred_steps =
      std::max(1, static_cast<int>(std::llround(sc.prediction.horizon / sc.prediction.dt)));

  auto record_estimate = [&](FilterOutput& out, const auto& runner, double t) {
    const GaussianBelief b = runner.predicted_at(t);
    EstimateRow row;
    row.t = t;
    row.vessel = runner.vessel_state(b);
    row.wave = b.mean.tail(b.mean.size() - 12);
    row.cov_diag = b.covariance.diagonal();
    out.estimates.push_back(std::move(row));
  };

  auto record_predictions = [&](FilterOutput& out, const auto& runner, double t_issue) {
    const auto beliefs = runner.predict_sequence(t_issue, pred_steps, sc.prediction.dt);
    for (int k = 0; k < pred_steps; ++k) {
      PredictionRow row;
      row.t_issue = t_issue;
      row.t_target = t_issue + (k + 1) * sc.prediction.dt;
      row.vessel = runner.vessel_state(beliefs[static_cast<size_t>(k)]);
      out.predictions.push_back(std::move(row));
    }
  };

  size_t im = 0;
  long ig = 0;
  long ip = 1;
  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    const double tm = im < measurements.size() ? measurements[im].available_at : inf;
    const double tg = ig <= n_grid ? static_cast<double>(ig) * sc.filter_dt : inf;
    double tp = inf;
    if (sc.prediction.cadence > 0.0) {
      const double issue = static_cast<double>(ip) * sc.prediction.cadence;
      if (issue + sc.prediction.horizon <= sc.duration + 1e-9) tp = issue;
    }
    if (tm == inf && tg == inf && tp == inf) break;

    if (tm <= tg && tm <= tp) {
      const Measurement& m = measurements[im++];
      if (m.available_at > sc.duration + 1e-9) continue;
      if (ukf) {
        auto rec = ukf->process(m);
        if (rec) result.nonlinear->innovations.push_back(std::move(*rec));
      }
      if (lkf) {
        auto rec = lkf->process(m);
        if (rec) result.linear->innovations.push_back(std::move(*rec));
      }
    } else if (tg <= tp) {
      if (ukf) record_estimate(*result.nonlinear, *ukf, tg);
      if (lkf) record_estimate(*result.linear, *lkf, tg);
      ++ig;
    } else {
      if (ukf) record_predictions(*result.nonlinear, *ukf, tp);
      if (lkf) record_predictions(*result.linear, *lkf, tp);
      ++ip;
    }
  }

  if (ukf) result.nonlinear->late_dropped = ukf->late_dropped();
  if (lkf) result.linear->late_dropped = lkf->late_dropped();
  return result;
}

}  // namespace marlin
