#include "mapalign/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mapalign/hungarian.hpp"

namespace mapalign {

double voxel_iou(const VoxelSet& a, const VoxelSet& b) {
  if (a.empty() && b.empty()) throw std::invalid_argument("IOU of two empty voxel sets");
  const VoxelSet& small = a.size() <= b.size() ? a : b;
  const VoxelSet& large = a.size() <= b.size() ? b : a;
  size_t inter = 0;
  for (const Voxel& v : small) inter += large.count(v);
  const size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Assignment associate(const std::vector<SegmentTrack>& tracks,
                     const std::vector<SegmentObservation>& observations, double min_iou) {
  Assignment out;
  const int nt = static_cast<int>(tracks.size());
  const int no = static_cast<int>(observations.size());
  if (nt == 0) {
    out.unmatched_observations.resize(no);
    std::iota(out.unmatched_observations.begin(), out.unmatched_observations.end(), 0);
    return out;
  }
  if (no == 0) {
    out.unmatched_tracks.resize(nt);
    std::iota(out.unmatched_tracks.begin(), out.unmatched_tracks.end(), 0);
    return out;
  }

  // Square padding: every track and observation gets a zero-cost dummy
  // partner, so gated pairs (cost kBig) are never forced into the matching.
  const double kBig = 10.0;
  const int s = nt + no;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(s, s, kBig);
  for (int t = 0; t < nt; ++t) {
    for (int o = 0; o < no; ++o) {
      const double iou = voxel_iou(tracks[t].voxels, observations[o].voxels);
      if (iou >= min_iou) cost(t, o) = -iou;
    }
    cost(t, no + t) = 0.0;
  }
  for (int o = 0; o < no; ++o) cost(nt + o, o) = 0.0;
  cost.block(nt, no, no, nt).setZero();

  const std::vector<int> assignment = solve_assignment(cost);
  std::vector<char> obs_matched(no, 0);
  for (int t = 0; t < nt; ++t) {
    const int j = assignment[t];
    if (j < no && cost(t, j) < 0.0) {
      out.matches.emplace_back(t, j);
      obs_matched[j] = 1;
    } else {
      out.unmatched_tracks.push_back(t);
    }
  }
  for (int o = 0; o < no; ++o) {
    if (!obs_matched[o]) out.unmatched_observations.push_back(o);
  }
  return out;
}

void update_track(SegmentTrack& track, const SegmentObservation& obs) {
  for (const Voxel& v : obs.voxels) track.voxels.insert(v);
  if (track.embedding.size() == 0) {
    track.embedding = obs.embedding;
  } else {
    Embedding mixed = static_cast<double>(track.obs_count) * track.embedding + obs.embedding;
    const double n = mixed.norm();
    if (n > 1e-12) track.embedding = mixed / n;
  }
  track.obs_count += 1;
  track.last_seen = std::max(track.last_seen, obs.frame_idx);
}

namespace {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool valid = false;
};

// Axis-aligned box of the voxel centers projected onto the normalized image
// plane. Points behind the camera are dropped.
Rect project_box(const VoxelSet& voxels, const PoseSE3& camera_pose, double voxel_size) {
  Rect r;
  r.x0 = r.y0 = std::numeric_limits<double>::infinity();
  r.x1 = r.y1 = -std::numeric_limits<double>::infinity();
  const Eigen::Matrix3d rt = camera_pose.rotation.transpose();
  for (const Voxel& v : voxels) {
    const Eigen::Vector3d q = rt * (voxel_center(v, voxel_size) - camera_pose.translation);
    if (q.z() <= 1e-6) continue;
    const double u = q.x() / q.z();
    const double w = q.y() / q.z();
    r.x0 = std::min(r.x0, u);
    r.x1 = std::max(r.x1, u);
    r.y0 = std::min(r.y0, w);
    r.y1 = std::max(r.y1, w);
    r.valid = true;
  }
  return r;
}

double rect_iou(const Rect& a, const Rect& b) {
  if (!a.valid || !b.valid) return 0.0;
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = (a.x1 - a.x0) * (a.y1 - a.y0) + (b.x1 - b.x0) * (b.y1 - b.y0) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<SegmentTrack> merge_tracks(std::vector<SegmentTrack> tracks, double iou_3d_thresh,
                                       double iou_2d_thresh, const PoseSE3& camera_pose,
                                       double voxel_size) {
  bool changed = true;
  while (changed && tracks.size() > 1) {
    changed = false;
    const int n = static_cast<int>(tracks.size());
    std::vector<Rect> boxes(n);
    for (int i = 0; i < n; ++i) boxes[i] = project_box(tracks[i].voxels, camera_pose, voxel_size);

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double iou3 = voxel_iou(tracks[i].voxels, tracks[j].voxels);
        const double iou2 = rect_iou(boxes[i], boxes[j]);
        if (iou3 > iou_3d_thresh || iou2 > iou_2d_thresh) {
          const int ri = uf_find(parent, i);
          const int rj = uf_find(parent, j);
          if (ri != rj) {
            parent[std::max(ri, rj)] = std::min(ri, rj);
            changed = true;
          }
        }
      }
    }
    if (!changed) break;

    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[uf_find(parent, i)].push_back(i);
    std::vector<SegmentTrack> merged;
    for (const std::vector<int>& group : groups) {
      if (group.empty()) continue;
      if (group.size() == 1) {
        merged.push_back(std::move(tracks[group[0]]));
        continue;
      }
      SegmentTrack t;
      t.id = std::numeric_limits<std::int64_t>::max();
      t.obs_count = 0;
      t.last_seen = 0;
      Embedding sum;
      for (int idx : group) {
        const SegmentTrack& src = tracks[idx];
        t.id = std::min(t.id, src.id);
        for (const Voxel& v : src.voxels) t.voxels.insert(v);
        if (sum.size() == 0) {
          sum = static_cast<double>(src.obs_count) * src.embedding;
        } else {
          sum += static_cast<double>(src.obs_count) * src.embedding;
        }
        t.obs_count += src.obs_count;
        t.last_seen = std::max(t.last_seen, src.last_seen);
      }
      const double nrm = sum.norm();
      t.embedding = nrm > 1e-12 ? Embedding(sum / nrm) : sum;
      merged.push_back(std::move(t));
    }
    tracks = std::move(merged);
  }
  std::sort(tracks.begin(), tracks.end(),
            [](const SegmentTrack& a, const SegmentTrack& b) { return a.id < b.id; });
  return tracks;
}

Eigen::Vector4d compute_shape(const std::vector<Eigen::Vector3d>& points) {
  Eigen::Vector4d shape = Eigen::Vector4d::Constant(kShapeFloor);
  if (points.empty()) return shape;

  Eigen::Vector3d lo = points[0], hi = points[0];
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const Eigen::Vector3d& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
    mean += p;
  }
  mean /= static_cast<double>(points.size());
  const Eigen::Vector3d ext = hi - lo;
  shape[0] = std::max(ext.x() * ext.y() * ext.z(), kShapeFloor);
  if (points.size() < 2) return shape;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Eigen::Vector3d& p : points) {
    const Eigen::Vector3d d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  // ascending from Eigen; want l1 >= l2 >= l3
  const double l1 = std::max(es.eigenvalues()(2), 0.0);
  const double l2 = std::max(es.eigenvalues()(1), 0.0);
  const double l3 = std::max(es.eigenvalues()(0), 0.0);
  if (l1 < 1e-15) return shape;
  shape[1] = (l1 - l2) / l1;
  shape[2] = (l2 - l3) / l1;
  shape[3] = l3 / l1;
  return floor_shape(shape);
}

Eigen::Vector4d compute_shape(const VoxelSet& voxels, double voxel_size) {
  std::vector<Eigen::Vector3d> points;
  points.reserve(voxels.size());
  for (const Voxel& v : voxels) points.push_back(voxel_center(v, voxel_size));
  return compute_shape(points);
}

bool filter_observation(const SegmentObservation& obs, const TrackerConfig& cfg) {
  if (!cfg.enable_filter) return true;
  if (obs.voxels.empty()) return false;
  const Eigen::Vector4d shape = compute_shape(obs.voxels, cfg.voxel_size);
  Eigen::Vector3d lo, hi;
  bool first = true;
  for (const Voxel& v : obs.voxels) {
    const Eigen::Vector3d c = voxel_center(v, cfg.voxel_size);
    if (first) {
      lo = hi = c;
      first = false;
    } else {
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
    }
  }
  const double max_extent = (hi - lo).maxCoeff();
  const bool ground_like = shape[2] > cfg.planarity_thresh && max_extent > cfg.extent_thresh;
  return !ground_like;
}

Segment finalize_segment(const SegmentTrack& track, const PoseSE3& map_frame,
                         double voxel_size) {
  std::vector<Eigen::Vector3d> local;
  local.reserve(track.voxels.size());
  const Eigen::Matrix3d rt = map_frame.rotation.transpose();
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const Voxel& v : track.voxels) {
    const Eigen::Vector3d p = rt * (voxel_center(v, voxel_size) - map_frame.translation);
    local.push_back(p);
    centroid += p;
  }
  if (!local.empty()) centroid /= static_cast<double>(local.size());

  Segment seg;
  seg.id = track.id;
  seg.centroid = centroid;
  seg.shape = compute_shape(local);
  seg.embedding = track.embedding;
  seg.obs_count = track.obs_count;
  return seg;
}

void Tracker::process_frame(int frame_idx, const PoseSE3& camera_pose,
                            std::vector<SegmentObservation> observations) {
  std::vector<SegmentObservation> kept;
  kept.reserve(observations.size());
  for (SegmentObservation& obs : observations) {
    obs.frame_idx = frame_idx;
    obs.camera_pose = camera_pose;
    if (filter_observation(obs, cfg_)) kept.push_back(std::move(obs));
  }

  const Assignment assignment = associate(tracks_, kept, cfg_.min_iou);
  for (const auto& [t, o] : assignment.matches) update_track(tracks_[t], kept[o]);
  for (int o : assignment.unmatched_observations) {
    SegmentTrack t;
    t.id = next_id_++;
    t.voxels = std::move(kept[o].voxels);
    t.embedding = kept[o].embedding;
    const double n = t.embedding.norm();
    if (n > 1e-12) t.embedding /= n;
    t.obs_count = 1;
    t.last_seen = frame_idx;
    tracks_.push_back(std::move(t));
  }

  tracks_ = merge_tracks(std::move(tracks_), cfg_.merge_iou_3d, cfg_.merge_iou_2d, camera_pose,
                         cfg_.voxel_size);
}

std::vector<Segment> Tracker::finalize_segments(const PoseSE3& map_frame) const {
  std::vector<Segment> segments;
  segments.reserve(tracks_.size());
  for (const SegmentTrack& t : tracks_) {
    segments.push_back(finalize_segment(t, map_frame, cfg_.voxel_size));
  }
  return segments;
}

}  // namespace mapalign
