#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "mapalign/geometry.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

/// Voxel index on a global grid. Voxel (i,j,k) has center ((i+0.5)v, (j+0.5)v, (k+0.5)v).
struct Voxel {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;
  bool operator==(const Voxel&) const = default;
};

struct VoxelHash {
  std::size_t operator()(const Voxel& v) const {
    // 21 bits per axis packed into one key
    const std::uint64_t k = ((std::uint64_t)(v.x & 0x1FFFFF) << 42) |
                            ((std::uint64_t)(v.y & 0x1FFFFF) << 21) |
                            (std::uint64_t)(v.z & 0x1FFFFF);
    std::uint64_t z = k + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

using VoxelSet = std::unordered_set<Voxel, VoxelHash>;

inline Eigen::Vector3d voxel_center(const Voxel& v, double voxel_size) {
  return {(v.x + 0.5) * voxel_size, (v.y + 0.5) * voxel_size, (v.z + 0.5) * voxel_size};
}

/// One segmented 3D observation in a frame.
struct SegmentObservation {
  VoxelSet voxels;
  Embedding embedding;  // unit norm
  int frame_idx = 0;
  PoseSE3 camera_pose;
};

/// An object track accumulated over frames.
struct SegmentTrack {
  std::int64_t id = 0;
  VoxelSet voxels;
  Embedding embedding;  // running weighted mean, re-normalized
  int obs_count = 1;
  int last_seen = 0;
};

struct TrackerConfig {
  double voxel_size = 0.2;
  double min_iou = 0.25;          // association gate
  double merge_iou_3d = 0.5;
  double merge_iou_2d = 0.8;      // on projected bounding boxes
  double planarity_thresh = 0.9;  // ground-like rejection
  double extent_thresh = 4.0;     // meters
  bool enable_filter = true;
};

/// |a n b| / |a u b|. Throws std::invalid_argument when both sets are empty.
double voxel_iou(const VoxelSet& a, const VoxelSet& b);

struct Assignment {
  std::vector<std::pair<int, int>> matches;  // (track index, observation index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_observations;
};

/// Optimal one-to-one assignment maximizing total IOU over pairs with IOU >= min_iou.
Assignment associate(const std::vector<SegmentTrack>& tracks,
                     const std::vector<SegmentObservation>& observations, double min_iou);

/// Folds an observation into a track: voxel union, obs_count-weighted embedding mean.
void update_track(SegmentTrack& track, const SegmentObservation& obs);

/// Merges track pairs whose 3D voxel IOU or projected 2D bounding-box IOU exceeds
/// the thresholds; repeated to a fixpoint so a second call merges nothing.
std::vector<SegmentTrack> merge_tracks(std::vector<SegmentTrack> tracks,
                                       double iou_3d_thresh, double iou_2d_thresh,
                                       const PoseSE3& camera_pose, double voxel_size);

/// Shape attributes (bbox volume, linearity, planarity, scattering), floored.
Eigen::Vector4d compute_shape(const std::vector<Eigen::Vector3d>& points);
Eigen::Vector4d compute_shape(const VoxelSet& voxels, double voxel_size);

/// False for large planar observations (ground-like regions).
bool filter_observation(const SegmentObservation& obs, const TrackerConfig& cfg);

/// Abstracts a track to a sparse segment expressed in map_frame.
Segment finalize_segment(const SegmentTrack& track, const PoseSE3& map_frame,
                         double voxel_size);

/// Single-owner frame-to-frame tracker.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg) : cfg_(cfg) {}

  /// Filters, associates, updates and merges one frame of observations.
  void process_frame(int frame_idx, const PoseSE3& camera_pose,
                     std::vector<SegmentObservation> observations);

  const std::vector<SegmentTrack>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }

  /// Sparse segments for all current tracks, expressed in map_frame.
  std::vector<Segment> finalize_segments(const PoseSE3& map_frame) const;

 private:
  TrackerConfig cfg_;
  std::vector<SegmentTrack> tracks_;
  std::int64_t next_id_ = 0;
};

}  // namespace mapalign
