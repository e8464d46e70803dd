#pragma once

#include <map>
#include <vector>

#include "mapalign/geometry.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

struct SubmapPolicy {
  double spacing = 10.0;  // path distance between consecutive submap origins [m]
  double radius = 15.0;   // accumulation / finalization radius [m]
  int max_segments = 40;  // cap per submap, farthest segments dropped
};

/// Slices a stream of poses and world-frame segment estimates into overlapping
/// local submaps. A submap opens every `spacing` meters of traveled path,
/// accumulates segments within `radius` of its center, and is finalized once
/// the robot exits that radius. Finalized submaps are expressed in the
/// gravity-aligned (yaw-only) frame anchored at the opening pose.
class SubmapBuilder {
 public:
  SubmapBuilder(SubmapPolicy policy, int robot_id)
      : policy_(policy), robot_id_(robot_id) {}

  /// Advances by one pose. dist_increment is the odometry path length traveled
  /// since the previous call. Returns the submaps finalized by this step.
  std::vector<Submap> step(const PoseSE3& pose, double dist_increment,
                           const std::vector<Segment>& world_segments);

  /// Finalizes and returns all still-open submaps.
  std::vector<Submap> flush();

  int open_count() const { return static_cast<int>(open_.size()); }

 private:
  struct Open {
    PoseSE3 frame_pose;  // yaw-only opening pose
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    int submap_idx = 0;
    std::map<std::int64_t, Segment> segments;  // latest world-frame estimate per id
  };

  Submap finalize(Open&& open) const;

  SubmapPolicy policy_;
  int robot_id_ = 0;
  std::vector<Open> open_;
  double dist_since_open_ = 0.0;
  bool started_ = false;
  int next_idx_ = 0;
};

}  // namespace mapalign
