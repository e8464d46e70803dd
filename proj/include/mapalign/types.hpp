#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mapalign/geometry.hpp"

namespace mapalign {

// Floor applied to shape-attribute entries so ratio scores stay finite.
constexpr double kShapeFloor = 1e-6;

using Embedding = Eigen::VectorXd;

/// A mapped 3D object: centroid, shape attributes, semantic embedding.
/// Shape vector: (bounding-box volume [m^3], linearity, planarity, scattering).
struct Segment {
  std::int64_t id = 0;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  Eigen::Vector4d shape = Eigen::Vector4d::Constant(kShapeFloor);
  Embedding embedding;
  int obs_count = 1;
};

/// Applies kShapeFloor elementwise.
Eigen::Vector4d floor_shape(const Eigen::Vector4d& f);

/// A local collection of segments expressed in a gravity-aligned frame.
struct Submap {
  PoseSE3 frame_pose;  // gravity-aligned: zero pitch/roll
  std::vector<Segment> segments;
  int robot_id = 0;
  int submap_idx = 0;
  Eigen::Vector3d center_world = Eigen::Vector3d::Zero();
};

/// True if frame_pose maps world z to local z (pitch/roll identically zero).
bool is_gravity_aligned(const PoseSE3& p, double tol = 1e-9);

/// Putative or inlier pair: index into submap_i.segments, index into submap_j.segments.
struct Association {
  int i_idx = 0;
  int j_idx = 0;
  bool operator==(const Association&) const = default;
};

using AssociationSet = std::vector<Association>;

/// Re-expresses a world-frame segment in the given frame: c_local = R^T (c_world - t).
Segment segment_in_frame(const Segment& world_seg, const PoseSE3& frame_pose);

}  // namespace mapalign
