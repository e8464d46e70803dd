#pragma once

#include <Eigen/Dense>
#include <utility>

namespace mapalign {

/// Rigid-body transform: x_parent = R * x_child + t.
struct PoseSE3 {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static PoseSE3 identity() { return {}; }

  PoseSE3 inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  // True if R is orthonormal with det +1 within tol.
  bool is_valid(double tol = 1e-9) const;
};

/// Composition a * b: first apply b, then a.
PoseSE3 compose(const PoseSE3& a, const PoseSE3& b);
inline PoseSE3 operator*(const PoseSE3& a, const PoseSE3& b) { return compose(a, b); }

Eigen::Matrix3d rot_x(double rad);
Eigen::Matrix3d rot_y(double rad);
Eigen::Matrix3d rot_z(double rad);

/// ZYX Euler angles (yaw, pitch, roll) in radians for R = Rz(yaw)Ry(pitch)Rx(roll).
struct EulerZYX {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};
EulerZYX euler_zyx(const Eigen::Matrix3d& R);

/// Geodesic angle of a rotation matrix in radians.
double rotation_angle(const Eigen::Matrix3d& R);

/// Drops pitch and roll, keeping the ZYX yaw and the translation.
/// Throws DegenerateAttitudeError if |pitch| > 89.9 deg.
PoseSE3 yaw_only(const PoseSE3& p);

/// (translation error [m], rotation error [deg]) between estimate and ground truth.
std::pair<double, double> transform_error(const PoseSE3& t_est, const PoseSE3& t_gt);

constexpr double kPi = 3.14159265358979323846;
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle difference to [0, 180] degrees.
double heading_difference_deg(double yaw_a_rad, double yaw_b_rad);

}  // namespace mapalign
