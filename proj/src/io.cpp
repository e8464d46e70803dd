#include "mapalign/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mapalign {

using nlohmann::json;

namespace {

json pose_to_json(const PoseSE3& p) {
  json jr = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) jr.push_back(p.rotation(r, c));
  json jt = json::array();
  for (int i = 0; i < 3; ++i) jt.push_back(p.translation[i]);
  return {{"R", jr}, {"t", jt}};
}

PoseSE3 pose_from_json(const json& j) {
  PoseSE3 p;
  const auto& jr = j.at("R");
  if (jr.size() != 9) throw std::invalid_argument("pose: R must have 9 entries");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) p.rotation(r, c) = jr[3 * r + c].get<double>();
  const auto& jt = j.at("t");
  if (jt.size() != 3) throw std::invalid_argument("pose: t must have 3 entries");
  for (int i = 0; i < 3; ++i) p.translation[i] = jt[i].get<double>();
  if (!p.is_valid(1e-6)) throw std::invalid_argument("pose: rotation not orthonormal");
  return p;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

json segment_to_json(const Segment& s) {
  return {{"id", s.id},
          {"centroid", {s.centroid[0], s.centroid[1], s.centroid[2]}},
          {"shape", {s.shape[0], s.shape[1], s.shape[2], s.shape[3]}},
          {"embedding", vec_to_json(s.embedding)},
          {"obs_count", s.obs_count}};
}

Segment segment_from_json(const json& j) {
  Segment s;
  s.id = j.at("id").get<std::int64_t>();
  for (int i = 0; i < 3; ++i) s.centroid[i] = j.at("centroid")[i].get<double>();
  for (int i = 0; i < 4; ++i) s.shape[i] = j.at("shape")[i].get<double>();
  s.shape = floor_shape(s.shape);
  s.embedding = vec_from_json(j.at("embedding"));
  s.obs_count = j.at("obs_count").get<int>();
  if (s.embedding.size() > 0 && std::abs(s.embedding.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("segment: embedding not unit norm");
  if (s.obs_count < 1) throw std::invalid_argument("segment: obs_count < 1");
  return s;
}

}  // namespace

std::string submap_to_json(const Submap& s) {
  json j = {{"robot_id", s.robot_id},
            {"submap_idx", s.submap_idx},
            {"pose", pose_to_json(s.frame_pose)},
            {"center_world", {s.center_world[0], s.center_world[1], s.center_world[2]}},
            {"segments", json::array()}};
  for (const Segment& seg : s.segments) j["segments"].push_back(segment_to_json(seg));
  return j.dump();
}

Submap submap_from_json(const std::string& line) {
  const json j = json::parse(line);
  Submap s;
  s.robot_id = j.at("robot_id").get<int>();
  s.submap_idx = j.at("submap_idx").get<int>();
  s.frame_pose = pose_from_json(j.at("pose"));
  if (!is_gravity_aligned(s.frame_pose, 1e-6))
    throw std::invalid_argument("submap: frame_pose has nonzero pitch/roll");
  for (int i = 0; i < 3; ++i) s.center_world[i] = j.at("center_world")[i].get<double>();
  for (const auto& js : j.at("segments")) s.segments.push_back(segment_from_json(js));
  return s;
}

void write_submaps(std::ostream& os, const std::vector<Submap>& submaps) {
  for (const Submap& s : submaps) os << submap_to_json(s) << '\n';
}

void write_submaps_file(const std::string& path, const std::vector<Submap>& submaps) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  write_submaps(f, submaps);
}

std::vector<Submap> read_submaps(std::istream& is) {
  std::vector<Submap> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(submap_from_json(line));
  }
  return out;
}

std::vector<Submap> read_submaps_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_submaps(f);
}

std::string frame_to_json(const ObservationFrame& f) {
  json j = {{"frame_idx", f.frame_idx},
            {"camera_pose", pose_to_json(f.camera_pose)},
            {"observations", json::array()}};
  for (const SegmentObservation& o : f.observations) {
    json jv = json::array();
    for (const Voxel& v : o.voxels) jv.push_back({v.x, v.y, v.z});
    j["observations"].push_back({{"voxels", jv}, {"embedding", vec_to_json(o.embedding)}});
  }
  return j.dump();
}

ObservationFrame frame_from_json(const std::string& line) {
  const json j = json::parse(line);
  ObservationFrame f;
  f.frame_idx = j.at("frame_idx").get<int>();
  f.camera_pose = pose_from_json(j.at("camera_pose"));
  for (const auto& jo : j.at("observations")) {
    SegmentObservation o;
    o.frame_idx = f.frame_idx;
    o.camera_pose = f.camera_pose;
    for (const auto& jv : jo.at("voxels"))
      o.voxels.insert({jv[0].get<std::int32_t>(), jv[1].get<std::int32_t>(),
                       jv[2].get<std::int32_t>()});
    o.embedding = vec_from_json(jo.at("embedding"));
    f.observations.push_back(std::move(o));
  }
  return f;
}

void write_frames_file(const std::string& path, const std::vector<ObservationFrame>& frames) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  for (const ObservationFrame& fr : frames) f << frame_to_json(fr) << '\n';
}

std::vector<ObservationFrame> read_frames_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::vector<ObservationFrame> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    out.push_back(frame_from_json(line));
  }
  return out;
}

}  // namespace mapalign
