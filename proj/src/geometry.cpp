#include "mapalign/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mapalign/errors.hpp"

namespace mapalign {

bool PoseSE3::is_valid(double tol) const {
  const Eigen::Matrix3d rtr = rotation * rotation.transpose();
  if ((rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

PoseSE3 compose(const PoseSE3& a, const PoseSE3& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Eigen::Matrix3d rot_x(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

Eigen::Matrix3d rot_y(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitY()).toRotationMatrix();
}

Eigen::Matrix3d rot_z(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

EulerZYX euler_zyx(const Eigen::Matrix3d& R) {
  EulerZYX e;
  const double s_pitch = std::clamp(-R(2, 0), -1.0, 1.0);
  e.pitch = std::asin(s_pitch);
  e.yaw = std::atan2(R(1, 0), R(0, 0));
  e.roll = std::atan2(R(2, 1), R(2, 2));
  return e;
}

double rotation_angle(const Eigen::Matrix3d& R) {
  // Trace formula, clamped before arccos for numerical safety near identity.
  const double c = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

PoseSE3 yaw_only(const PoseSE3& p) {
  const double s_pitch = std::abs(p.rotation(2, 0));
  if (s_pitch > std::sin(deg2rad(89.9))) {
    throw DegenerateAttitudeError("yaw_only: pitch within 0.1 deg of gimbal singularity");
  }
  const EulerZYX e = euler_zyx(p.rotation);
  return {rot_z(e.yaw), p.translation};
}

std::pair<double, double> transform_error(const PoseSE3& t_est, const PoseSE3& t_gt) {
  const double trans_err = (t_est.translation - t_gt.translation).norm();
  const double rot_err = rotation_angle(t_gt.rotation.transpose() * t_est.rotation);
  return {trans_err, rad2deg(rot_err)};
}

double heading_difference_deg(double yaw_a_rad, double yaw_b_rad) {
  double d = std::fmod(std::abs(yaw_a_rad - yaw_b_rad), 2.0 * kPi);
  if (d > kPi) d = 2.0 * kPi - d;
  return rad2deg(d);
}

}  // namespace mapalign
