#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "marlin/angles.hpp"
#include "marlin/errors.hpp"
#include "marlin/measurement.hpp"
#include "marlin/types.hpp"
#include "marlin/vessel.hpp"

namespace marlin {

/// Deterministic random stream. Seeded instances reproduce the exact draw
/// sequence, which the harness relies on for byte-identical runs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double gaussian() { return normal_(gen_); }
  double uniform() { return unif_(gen_); }

  /// Uniform angle in (-pi, pi].
  double angle() { return wrap_angle(uniform() * 2.0 * kPi); }

  VecX gaussian_vector(Eigen::Index n) {
    VecX v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

struct GpsSpec {
  double rate{5.0};
  Vec3 std{0.7, 0.7, 0.7};
};

struct ImuSpec {
  double rate{20.0};
  Vec3 angle_std{0.02, 0.02, 0.02};
  Vec3 rate_std{0.05, 0.05, 0.05};
};

/// Relative-pose detector mounted on the UAV, gated by range and the cone
/// around the UAV's down axis.
struct RelPoseSpec {
  double rate{10.0};
  Vec3 pos_std{0.25, 0.25, 0.25};
  Vec3 ang_std{0.12, 0.12, 0.12};
  double max_range{15.0};
  double half_fov{0.7};
};

/// UAV-USV communication link carrying the USV-side sensors.
struct LinkSpec {
  double latency{0.0};
  double drop_prob{0.0};
  double min_rate{1.0};
};

/// Pose of the observing UAV in the global frame.
struct UavPose {
  Vec3 position{0.0, 0.0, 0.0};
  EulerAngles angles;
  double timestamp{0.0};
};

inline int measurement_dim(SensorId id) {
  switch (id) {
    case SensorId::Gps: return 3;
    default: return 6;
  }
}

/// GPS position measurement: truth position plus channel-wise noise.
inline Measurement gps_measure(double t, const EulerPose& truth, const GpsSpec& spec, Rng& rng) {
  Measurement m;
  m.timestamp = t;
  m.available_at = t;
  m.sensor = SensorId::Gps;
  m.value = truth.position();
  m.noise = MatX::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    m.value[i] += spec.std[i] * rng.gaussian();
    m.noise(i, i) = spec.std[i] * spec.std[i];
  }
  return m;
}

/// IMU measurement (phi, theta, psi, p, q, r) with wrapped angle channels.
inline Measurement imu_measure(double t, const EulerPose& pose, const BodyTwist& twist,
                               const ImuSpec& spec, Rng& rng) {
  Measurement m;
  m.timestamp = t;
  m.available_at = t;
  m.sensor = SensorId::Imu;
  m.value = VecX(6);
  m.noise = MatX::Zero(6, 6);
  const Vec3 ang = pose.angles().vec();
  const Vec3 rates = twist.angular();
  for (int i = 0; i < 3; ++i) {
    m.value[i] = wrap_angle(ang[i] + spec.angle_std[i] * rng.gaussian());
    m.noise(i, i) = spec.angle_std[i] * spec.angle_std[i];
    m.value[3 + i] = rates[i] + spec.rate_std[i] * rng.gaussian();
    m.noise(3 + i, 3 + i) = spec.rate_std[i] * spec.rate_std[i];
  }
  return m;
}

/// Gate test for a relative-pose detector: the USV must be within range and
/// inside the cone around the UAV's body-down axis.
inline bool relative_pose_visible(const EulerPose& truth, const UavPose& uav,
                                  const RelPoseSpec& spec) {
  const Vec3 delta = truth.position() - uav.position;
  const double range = delta.norm();
  if (range > spec.max_range) return false;
  if (range == 0.0) return true;
  const Vec3 down = rotation_j1(uav.angles).col(2);
  const double c = std::clamp(down.dot(delta) / range, -1.0, 1.0);
  return std::acos(c) <= spec.half_fov;
}

/// Relative 3D pose measurement transformed back to the global frame with
/// the observer pose. Returns nothing when the target is outside the gate.
/// Noise is applied to the relative quantities before the back-transform.
inline std::optional<Measurement> relative_pose_measure(double t, SensorId kind,
                                                        const EulerPose& truth,
                                                        const UavPose& uav,
                                                        const RelPoseSpec& spec, Rng& rng) {
  if (!relative_pose_visible(truth, uav, spec)) return std::nullopt;

  const Mat3 r_uav = rotation_j1(uav.angles);
  const Mat3 r_usv = rotation_j1(truth.angles());

  Vec3 rel_pos = r_uav.transpose() * (truth.position() - uav.position);
  EulerAngles rel_ang = euler_from_rotation(r_uav.transpose() * r_usv);
  for (int i = 0; i < 3; ++i) rel_pos[i] += spec.pos_std[i] * rng.gaussian();
  rel_ang.phi = wrap_angle(rel_ang.phi + spec.ang_std[0] * rng.gaussian());
  rel_ang.theta += spec.ang_std[1] * rng.gaussian();
  rel_ang.psi = wrap_angle(rel_ang.psi + spec.ang_std[2] * rng.gaussian());

  const Vec3 global_pos = uav.position + r_uav * rel_pos;
  const EulerAngles global_ang = euler_from_rotation(r_uav * rotation_j1(rel_ang));

  Measurement m;
  m.timestamp = t;
  m.available_at = t;
  m.sensor = kind;
  m.value = VecX(6);
  m.value << global_pos.x(), global_pos.y(), global_pos.z(),  //
      wrap_angle(global_ang.phi), global_ang.theta, wrap_angle(global_ang.psi);
  m.noise = MatX::Zero(6, 6);
  for (int i = 0; i < 3; ++i) {
    m.noise(i, i) = spec.pos_std[i] * spec.pos_std[i];
    m.noise(3 + i, 3 + i) = spec.ang_std[i] * spec.ang_std[i];
  }
  return m;
}

/// Applies the communication link to a timestamp-ordered stream: USV-side
/// sensors (GPS, IMU) are dropped independently with drop_prob and survivors
/// become available latency seconds later; UAV-onboard sensors bypass the
/// link. Output is ordered by availability.
inline std::vector<Measurement> comm_link_apply(const std::vector<Measurement>& stream,
                                                const LinkSpec& spec, Rng& rng) {
  if (!(spec.drop_prob >= 0.0 && spec.drop_prob <= 1.0)) {
    throw ConfigError("link drop probability must be in [0, 1]");
  }
  for (size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].timestamp < stream[i - 1].timestamp) {
      throw ConfigError("comm link input stream must be timestamp-ordered");
    }
  }
  std::vector<Measurement> out;
  out.reserve(stream.size());
  for (const auto& m : stream) {
    const bool linked = m.sensor == SensorId::Gps || m.sensor == SensorId::Imu;
    if (!linked) {
      out.push_back(m);
      continue;
    }
    if (rng.uniform() < spec.drop_prob) continue;
    Measurement delayed = m;
    delayed.available_at = m.timestamp + spec.latency;
    out.push_back(std::move(delayed));
  }
  std::stable_sort(out.begin(), out.end(), [](const Measurement& a, const Measurement& b) {
    if (a.available_at != b.available_at) return a.available_at < b.available_at;
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return static_cast<int>(a.sensor) < static_cast<int>(b.sensor);
  });
  return out;
}

}  // namespace marlin
