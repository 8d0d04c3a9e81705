#pragma once

#include <Eigen/Dense>
#include <string>

#include "marlin/errors.hpp"
#include "marlin/types.hpp"

namespace marlin {

enum class SensorId { Gps, Imu, Uvdar, Apriltag };

inline const char* to_string(SensorId id) {
  switch (id) {
    case SensorId::Gps: return "GPS";
    case SensorId::Imu: return "IMU";
    case SensorId::Uvdar: return "UVDAR";
    case SensorId::Apriltag: return "APRILTAG";
  }
  return "?";
}

inline SensorId sensor_from_string(const std::string& s) {
  if (s == "GPS" || s == "gps") return SensorId::Gps;
  if (s == "IMU" || s == "imu") return SensorId::Imu;
  if (s == "UVDAR" || s == "uvdar") return SensorId::Uvdar;
  if (s == "APRILTAG" || s == "apriltag") return SensorId::Apriltag;
  throw ConfigError("unknown sensor id: " + s);
}

/// One timestamped sensor reading. `timestamp` is when the quantity was
/// sampled; `available_at` is when it reaches the estimator (communication
/// latency shifts it, sensor-side it equals `timestamp`).
struct Measurement {
  double timestamp{0.0};
  double available_at{0.0};
  SensorId sensor{SensorId::Gps};
  VecX value;
  MatX noise;  // R, symmetric positive definite

  [[nodiscard]] int dim() const { return static_cast<int>(value.size()); }
};

/// Innovation and the innovation covariance actually used in the gain.
struct InnovationRecord {
  double timestamp{0.0};
  SensorId sensor{SensorId::Gps};
  VecX innovation;   // zeta(k), angle channels wrapped
  MatX covariance;   // S(k)

  [[nodiscard]] int dim() const { return static_cast<int>(innovation.size()); }
};

}  // namespace marlin
