#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "marlin/angles.hpp"
#include "marlin/errors.hpp"

namespace marlin {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Roll/pitch/yaw triple (intrinsic Euler angles, radians).
struct EulerAngles {
  double phi{0.0};
  double theta{0.0};
  double psi{0.0};

  [[nodiscard]] Vec3 vec() const { return {phi, theta, psi}; }
  [[nodiscard]] bool finite() const {
    return std::isfinite(phi) && std::isfinite(theta) && std::isfinite(psi);
  }
};

/// Global-frame pose: position in meters, orientation as intrinsic Euler angles.
///
/// Normalization keeps phi/psi in (-pi, pi] and theta in [-pi/2, pi/2]; a pitch
/// outside that band is folded onto the equivalent representation in the other
/// Euler convention.
struct EulerPose {
  double x{0.0}, y{0.0}, z{0.0};
  double phi{0.0}, theta{0.0}, psi{0.0};

  [[nodiscard]] Vec3 position() const { return {x, y, z}; }
  [[nodiscard]] EulerAngles angles() const { return {phi, theta, psi}; }

  [[nodiscard]] Vec6 vec() const {
    Vec6 v;
    v << x, y, z, phi, theta, psi;
    return v;
  }

  static EulerPose from_vec(const Vec6& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  [[nodiscard]] bool finite() const { return vec().allFinite(); }

  /// Returns the normalized equivalent pose.
  [[nodiscard]] EulerPose normalized() const {
    EulerPose p = *this;
    p.theta = wrap_angle(p.theta);
    if (p.theta > kPi / 2.0) {
      p.theta = kPi - p.theta;
      p.phi += kPi;
      p.psi += kPi;
    } else if (p.theta < -kPi / 2.0) {
      p.theta = -kPi - p.theta;
      p.phi += kPi;
      p.psi += kPi;
    }
    p.phi = wrap_angle(p.phi);
    p.psi = wrap_angle(p.psi);
    return p;
  }
};

/// Body-frame twist: linear velocity (u, v, w) and angular velocity (p, q, r).
struct BodyTwist {
  double u{0.0}, v{0.0}, w{0.0};
  double p{0.0}, q{0.0}, r{0.0};

  [[nodiscard]] Vec3 linear() const { return {u, v, w}; }
  [[nodiscard]] Vec3 angular() const { return {p, q, r}; }

  [[nodiscard]] Vec6 vec() const {
    Vec6 v6;
    v6 << u, v, w, p, q, r;
    return v6;
  }

  static BodyTwist from_vec(const Vec6& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  [[nodiscard]] bool finite() const { return vec().allFinite(); }
};

/// Body-frame generalized force: (tau_x, tau_y, tau_z) forces in newtons and
/// (tau_phi, tau_theta, tau_psi) torques in newton-meters. The estimation
/// models assume zero input; truth simulation may inject disturbances here.
struct Wrench {
  double tau_x{0.0}, tau_y{0.0}, tau_z{0.0};
  double tau_phi{0.0}, tau_theta{0.0}, tau_psi{0.0};

  [[nodiscard]] Vec6 vec() const {
    Vec6 v;
    v << tau_x, tau_y, tau_z, tau_phi, tau_theta, tau_psi;
    return v;
  }

  static Wrench from_vec(const Vec6& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
};

/// 3x3 skew-symmetric matrix such that skew(a) * b == a x b.
inline Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),  //
      a.z(), 0.0, -a.x(),   //
      -a.y(), a.x(), 0.0;
  return s;
}

}  // namespace marlin
