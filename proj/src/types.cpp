#include "mapalign/types.hpp"

namespace mapalign {

Eigen::Vector4d floor_shape(const Eigen::Vector4d& f) {
  return f.cwiseMax(kShapeFloor);
}

bool is_gravity_aligned(const PoseSE3& p, double tol) {
  const Eigen::Matrix3d& R = p.rotation;
  return std::abs(R(2, 0)) <= tol && std::abs(R(2, 1)) <= tol &&
         std::abs(R(0, 2)) <= tol && std::abs(R(1, 2)) <= tol &&
         std::abs(R(2, 2) - 1.0) <= tol;
}

Segment segment_in_frame(const Segment& world_seg, const PoseSE3& frame_pose) {
  Segment s = world_seg;
  s.centroid = frame_pose.rotation.transpose() * (world_seg.centroid - frame_pose.translation);
  return s;
}

}  // namespace mapalign
