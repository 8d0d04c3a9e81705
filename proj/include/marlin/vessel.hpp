#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "marlin/errors.hpp"
#include "marlin/types.hpp"

namespace marlin {

/// |cos(theta)| below this raises SingularityError in the angular-rate map.
inline constexpr double kJ2SingularityTol = 1e-6;

/// Condition numbers above this make the assembled mass matrix unusable.
inline constexpr double kMassConditionLimit = 1e12;

/// Body-to-global rotation built as Rz(psi) * Ry(theta) * Rx(phi).
inline Mat3 rotation_j1(const EulerAngles& a) {
  const double cphi = std::cos(a.phi), sphi = std::sin(a.phi);
  const double cth = std::cos(a.theta), sth = std::sin(a.theta);
  const double cpsi = std::cos(a.psi), spsi = std::sin(a.psi);
  Mat3 r;
  r << cpsi * cth, -spsi * cphi + cpsi * sth * sphi, spsi * sphi + cpsi * cphi * sth,  //
      spsi * cth, cpsi * cphi + sphi * sth * spsi, -cpsi * sphi + sth * spsi * cphi,   //
      -sth, cth * sphi, cth * cphi;
  return r;
}

/// Maps body angular rates (p, q, r) to Euler-angle rates.
/// Throws SingularityError near theta = pi/2 + k*pi where the map is undefined.
inline Mat3 angular_jacobian_j2(const EulerAngles& a) {
  const double cth = std::cos(a.theta);
  if (std::abs(cth) < kJ2SingularityTol) {
    throw SingularityError("angular rate map singular at theta = " + std::to_string(a.theta));
  }
  const double cphi = std::cos(a.phi), sphi = std::sin(a.phi);
  const double tth = std::tan(a.theta);
  Mat3 j;
  j << 1.0, sphi * tth, cphi * tth,  //
      0.0, cphi, -sphi,              //
      0.0, sphi / cth, cphi / cth;
  return j;
}

/// Pose time-derivative: position rows through J1, angle rows through J2.
inline Vec6 kinematics(const EulerPose& pose, const BodyTwist& twist) {
  Vec6 d;
  d.head<3>() = rotation_j1(pose.angles()) * twist.linear();
  d.tail<3>() = angular_jacobian_j2(pose.angles()) * twist.angular();
  return d;
}

/// Extracts intrinsic roll/pitch/yaw from a rotation matrix (inverse of
/// rotation_j1). Near the pitch singularity yaw absorbs the free angle.
inline EulerAngles euler_from_rotation(const Mat3& r) {
  EulerAngles a;
  const double sth = -r(2, 0);
  a.theta = std::asin(std::clamp(sth, -1.0, 1.0));
  if (std::abs(std::cos(a.theta)) < 1e-9) {
    a.phi = 0.0;
    a.psi = std::atan2(-r(0, 1), r(1, 1));
  } else {
    a.phi = std::atan2(r(2, 1), r(2, 2));
    a.psi = std::atan2(r(1, 0), r(0, 0));
  }
  return a;
}

/// Linear damping coefficients. The assembled matrix carries the fixed
/// sparsity of the linear damping model; any coefficient left at zero keeps
/// its slot zero.
struct DampingCoefficients {
  double X_u{0.0};
  double Y_v{0.0}, Y_p{0.0}, Y_r{0.0};
  double Z_w{0.0}, Z_q{0.0};
  double K_v{0.0}, K_p{0.0}, K_r{0.0};
  double M_w{0.0}, M_q{0.0};
  double N_v{0.0}, N_p{0.0}, N_r{0.0};

  [[nodiscard]] Mat6 matrix() const {
    Mat6 d = Mat6::Zero();
    d(0, 0) = X_u;
    d(1, 1) = Y_v;
    d(1, 3) = Y_p;
    d(1, 5) = Y_r;
    d(2, 2) = Z_w;
    d(2, 4) = Z_q;
    d(3, 1) = K_v;
    d(3, 3) = K_p;
    d(3, 5) = K_r;
    d(4, 2) = M_w;
    d(4, 4) = M_q;
    d(5, 1) = N_v;
    d(5, 3) = N_p;
    d(5, 5) = N_r;
    return d;
  }
};

/// Restoring (gravity/buoyancy) coefficients about the z = 0 equilibrium.
/// Negative Z_z, K_phi, M_theta give restoring heave/roll/pitch behavior.
struct RestoringCoefficients {
  double Z_z{0.0};
  double Z_theta{0.0};
  double K_phi{0.0};
  double M_z{0.0};
  double M_theta{0.0};

  [[nodiscard]] Mat6 matrix() const {
    Mat6 g = Mat6::Zero();
    g(2, 2) = -Z_z;
    g(2, 4) = -Z_theta;
    g(3, 3) = -K_phi;
    g(4, 2) = -M_z;
    g(4, 4) = -M_theta;
    return g;
  }
};

/// Rigid-body, added-mass, damping and restoring parameters of one vessel.
///
/// The total mass matrix M = M_RB + M_A is assembled, validated (symmetric
/// positive definite, condition number below kMassConditionLimit) and
/// inverted once at construction.
class VesselParams {
 public:
  VesselParams(double mass, const Mat3& inertia_body, const Mat6& added_mass,
               const DampingCoefficients& damping, const RestoringCoefficients& restoring)
      : mass_(mass),
        inertia_body_(inertia_body),
        added_mass_(added_mass),
        damping_(damping.matrix()),
        restoring_(restoring.matrix()) {
    if (!(mass > 0.0)) throw ConfigError("vessel mass must be positive");
    if (!inertia_body.allFinite() || !added_mass.allFinite()) {
      throw ConfigError("vessel parameter matrices must be finite");
    }
    if ((inertia_body - inertia_body.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * (1.0 + inertia_body.cwiseAbs().maxCoeff())) {
      throw ConfigError("body inertia matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> ib_eig(inertia_body);
    if (ib_eig.eigenvalues().minCoeff() <= 0.0) {
      throw ConfigError("body inertia matrix must be positive definite");
    }

    total_mass_ = Mat6::Zero();
    total_mass_.topLeftCorner<3, 3>() = mass * Mat3::Identity();
    total_mass_.bottomRightCorner<3, 3>() = inertia_body;
    total_mass_ += added_mass;

    if ((total_mass_ - total_mass_.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * (1.0 + total_mass_.cwiseAbs().maxCoeff())) {
      throw NonInvertibleMassError("assembled mass matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat6> m_eig(total_mass_);
    const double lo = m_eig.eigenvalues().minCoeff();
    const double hi = m_eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMassConditionLimit) {
      throw NonInvertibleMassError("assembled mass matrix not positive definite");
    }
    mass_inverse_ = total_mass_.llt().solve(Mat6::Identity());
  }

  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] const Mat3& inertia_body() const { return inertia_body_; }
  [[nodiscard]] const Mat6& added_mass() const { return added_mass_; }
  [[nodiscard]] const Mat6& damping() const { return damping_; }
  [[nodiscard]] const Mat6& restoring() const { return restoring_; }
  [[nodiscard]] const Mat6& total_mass() const { return total_mass_; }
  [[nodiscard]] const Mat6& mass_inverse() const { return mass_inverse_; }

 private:
  double mass_;
  Mat3 inertia_body_;
  Mat6 added_mass_;
  Mat6 damping_;
  Mat6 restoring_;
  Mat6 total_mass_;
  Mat6 mass_inverse_;
};

/// Coriolis/centripetal matrix C(nu) = C_RB(nu) + C_A(nu).
///
/// C_RB uses the standard centered rigid-body form; C_A places the added-mass
/// products C1..C6 on the usual skew pattern. The result is skew-symmetric.
inline Mat6 coriolis_matrix(const BodyTwist& twist, const VesselParams& params) {
  const Vec3 v = twist.linear();
  const Vec3 omega = twist.angular();
  const Vec6 nu = twist.vec();

  Mat6 c_rb = Mat6::Zero();
  const Mat3 msv = params.mass() * skew(v);
  c_rb.topRightCorner<3, 3>() = -msv;
  c_rb.bottomLeftCorner<3, 3>() = -msv;
  c_rb.bottomRightCorner<3, 3>() = -skew(params.inertia_body() * omega);

  const Vec3 c123 = params.added_mass().topRows<3>() * nu;
  const Vec3 c456 = params.added_mass().bottomRows<3>() * nu;
  Mat6 c_a = Mat6::Zero();
  c_a.topRightCorner<3, 3>() = skew(c123);
  c_a.bottomLeftCorner<3, 3>() = skew(c123);
  c_a.bottomRightCorner<3, 3>() = skew(c456);

  return c_rb + c_a;
}

/// Twist time-derivative with an optional external wrench:
/// nu_dot = M^-1 (tau - C(nu) nu - D nu - G eta).
inline Vec6 twist_derivative(const EulerPose& pose, const BodyTwist& twist,
                             const VesselParams& params, const Wrench& tau = {}) {
  const Vec6 nu = twist.vec();
  const Vec6 rhs = tau.vec() - coriolis_matrix(twist, params) * nu - params.damping() * nu -
                   params.restoring() * pose.vec();
  return params.mass_inverse() * rhs;
}

/// Full 12-state derivative (eta_dot, nu_dot) of the wave-free model.
inline Vec12 nonlinear_derivative(const EulerPose& pose, const BodyTwist& twist,
                                  const VesselParams& params, const Wrench& tau = {}) {
  Vec12 d;
  d.head<6>() = kinematics(pose, twist);
  d.tail<6>() = twist_derivative(pose, twist, params, tau);
  return d;
}

/// Pose expressed in vessel-parallel coordinates: the planar position is
/// rotated by -psi, everything else passes through.
inline Vec6 vessel_parallel(const EulerPose& pose) {
  const double c = std::cos(pose.psi), s = std::sin(pose.psi);
  Vec6 out = pose.vec();
  out[0] = c * pose.x + s * pose.y;
  out[1] = -s * pose.x + c * pose.y;
  return out;
}

/// Inverse vessel-parallel map for the yaw used in the forward transform.
inline EulerPose vessel_parallel_inverse(double psi, const Vec6& eta_l) {
  const double c = std::cos(psi), s = std::sin(psi);
  EulerPose pose = EulerPose::from_vec(eta_l);
  pose.x = c * eta_l[0] - s * eta_l[1];
  pose.y = s * eta_l[0] + c * eta_l[1];
  return pose;
}

/// LTI vessel-parallel system matrix [[0, I], [-M^-1 G, -M^-1 D]].
inline Mat12 build_linear_system(const VesselParams& params) {
  Mat12 a = Mat12::Zero();
  a.topRightCorner<6, 6>() = Mat6::Identity();
  a.bottomLeftCorner<6, 6>() = -params.mass_inverse() * params.restoring();
  a.bottomRightCorner<6, 6>() = -params.mass_inverse() * params.damping();
  return a;
}

}  // namespace marlin
