#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mapalign/tracking.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

// Submap interchange: JSON-lines, one submap per line. Keys: robot_id, submap_idx,
// pose {R row-major 3x3, t}, center_world, segments [{id, centroid, shape,
// embedding, obs_count}]. Round-trip preserves values to 1e-9 relative.

std::string submap_to_json(const Submap& s);
Submap submap_from_json(const std::string& line);

void write_submaps(std::ostream& os, const std::vector<Submap>& submaps);
void write_submaps_file(const std::string& path, const std::vector<Submap>& submaps);
std::vector<Submap> read_submaps(std::istream& is);
std::vector<Submap> read_submaps_file(const std::string& path);

/// One frame of an observation stream.
struct ObservationFrame {
  int frame_idx = 0;
  PoseSE3 camera_pose;
  std::vector<SegmentObservation> observations;
};

std::string frame_to_json(const ObservationFrame& f);
ObservationFrame frame_from_json(const std::string& line);

void write_frames_file(const std::string& path, const std::vector<ObservationFrame>& frames);
std::vector<ObservationFrame> read_frames_file(const std::string& path);

}  // namespace mapalign
