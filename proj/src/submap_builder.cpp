#include "mapalign/submap_builder.hpp"

#include <algorithm>
#include <cmath>

namespace mapalign {

std::vector<Submap> SubmapBuilder::step(const PoseSE3& pose, double dist_increment,
                                        const std::vector<Segment>& world_segments) {
  dist_since_open_ += dist_increment;
  if (!started_ || dist_since_open_ > policy_.spacing) {
    Open open;
    open.frame_pose = yaw_only(pose);
    open.center = pose.translation;
    open.submap_idx = next_idx_++;
    open_.push_back(std::move(open));
    dist_since_open_ = 0.0;
    started_ = true;
  }

  for (Open& open : open_) {
    for (const Segment& seg : world_segments) {
      if ((seg.centroid - open.center).norm() <= policy_.radius) {
        open.segments[seg.id] = seg;
      }
    }
  }

  std::vector<Submap> finalized;
  for (auto it = open_.begin(); it != open_.end();) {
    if ((pose.translation - it->center).norm() > policy_.radius) {
      finalized.push_back(finalize(std::move(*it)));
      it = open_.erase(it);
    } else {
      ++it;
    }
  }
  return finalized;
}

std::vector<Submap> SubmapBuilder::flush() {
  std::vector<Submap> finalized;
  finalized.reserve(open_.size());
  for (Open& open : open_) finalized.push_back(finalize(std::move(open)));
  open_.clear();
  return finalized;
}

Submap SubmapBuilder::finalize(Open&& open) const {
  std::vector<Segment> world;
  world.reserve(open.segments.size());
  for (auto& [id, seg] : open.segments) world.push_back(std::move(seg));

  if (static_cast<int>(world.size()) > policy_.max_segments) {
    std::sort(world.begin(), world.end(), [&](const Segment& a, const Segment& b) {
      const double da = (a.centroid - open.center).norm();
      const double db = (b.centroid - open.center).norm();
      if (da != db) return da < db;
      return a.id < b.id;
    });
    world.resize(policy_.max_segments);
  }

  Submap submap;
  submap.frame_pose = open.frame_pose;
  submap.robot_id = robot_id_;
  submap.submap_idx = open.submap_idx;
  submap.center_world = open.center;
  submap.segments.reserve(world.size());
  for (const Segment& seg : world) {
    submap.segments.push_back(segment_in_frame(seg, open.frame_pose));
  }
  std::sort(submap.segments.begin(), submap.segments.end(),
            [](const Segment& a, const Segment& b) { return a.id < b.id; });
  return submap;
}

}  // namespace mapalign
