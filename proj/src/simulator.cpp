#include "mapalign/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mapalign/rng.hpp"

namespace mapalign {

namespace {

// Multiplicative log-normal jitter. The three eigenvalue attributes form a
// partition of one, so they are re-normalized after jittering.
Eigen::Vector4d jitter_shape(std::mt19937_64& gen, const Eigen::Vector4d& base, double noise) {
  Eigen::Vector4d s = base;
  s[0] = s[0] * std::exp(noise * normal01(gen));
  double sum = 0.0;
  for (int k = 1; k < 4; ++k) {
    s[k] = std::max(s[k] * std::exp(noise * normal01(gen)), kShapeFloor);
    sum += s[k];
  }
  for (int k = 1; k < 4; ++k) s[k] /= sum;
  return floor_shape(s);
}

Eigen::Vector4d random_class_shape(std::mt19937_64& gen) {
  const double volume = uniform_range(gen, 0.5, 8.0);
  double a = uniform01(gen);
  double b = uniform01(gen);
  if (a < b) std::swap(a, b);  // a >= b, eigenvalue ratios l2/l1, l3/l1
  return floor_shape({volume, 1.0 - a, a - b, b});
}

}  // namespace

World generate_world(const ScenarioConfig& cfg) {
  if (cfg.n_objects <= 0) throw std::invalid_argument("n_objects must be positive");
  if (cfg.n_semantic_classes <= 0) throw std::invalid_argument("n_semantic_classes must be positive");
  std::mt19937_64 gen(mix_seed(cfg.seed, 1));

  World w;
  w.class_prototypes.reserve(cfg.n_semantic_classes);
  w.class_shapes.reserve(cfg.n_semantic_classes);
  for (int c = 0; c < cfg.n_semantic_classes; ++c) {
    w.class_prototypes.push_back(random_unit_vector(gen, cfg.embedding_dim));
    w.class_shapes.push_back(random_class_shape(gen));
  }

  const double min_sep = std::max(2.0 * cfg.centroid_noise_sigma, 0.5);
  const Eigen::Vector3d half = cfg.world_extent / 2.0;
  w.objects.reserve(cfg.n_objects);
  for (int k = 0; k < cfg.n_objects; ++k) {
    Eigen::Vector3d pos;
    bool placed = false;
    for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
      pos = {uniform_range(gen, -half.x(), half.x()), uniform_range(gen, -half.y(), half.y()),
             uniform_range(gen, 0.0, cfg.world_extent.z())};
      placed = true;
      for (const WorldObject& other : w.objects) {
        if ((other.position - pos).norm() < min_sep) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) {
      throw std::runtime_error("world too crowded: cannot place " + std::to_string(cfg.n_objects) +
                               " objects with " + std::to_string(min_sep) + " m separation");
    }
    WorldObject obj;
    obj.id = k;
    obj.position = pos;
    obj.semantic_class = uniform_int(gen, cfg.n_semantic_classes);
    obj.shape = jitter_shape(gen, w.class_shapes[obj.semantic_class], 0.1);
    obj.embedding =
        perturb_unit_vector(gen, w.class_prototypes[obj.semantic_class], cfg.class_spread_rad);
    w.objects.push_back(std::move(obj));
  }
  return w;
}

namespace {

struct RobotObservation {
  bool present = false;
  Eigen::Vector3d pos_w = Eigen::Vector3d::Zero();
  Embedding embedding;
  Eigen::Vector4d shape = Eigen::Vector4d::Constant(kShapeFloor);
  int obs_count = 1;
};

}  // namespace

ScenarioPair generate_traversal_pair(const ScenarioConfig& cfg) {
  ScenarioPair sp;
  sp.world = generate_world(cfg);
  const int n = static_cast<int>(sp.world.objects.size());

  // Robot 1 reports poses in a private odometry frame offset from the world by
  // a seeded yaw and translation. Robot 0's odometry frame is the world frame.
  std::mt19937_64 fgen(mix_seed(cfg.seed, 2));
  PoseSE3 t_w_o2;
  t_w_o2.rotation = rot_z(uniform_range(fgen, 0.0, 2.0 * kPi));
  t_w_o2.translation = {uniform_range(fgen, -20.0, 20.0), uniform_range(fgen, -20.0, 20.0),
                        uniform_range(fgen, -2.0, 2.0)};
  sp.t_o1_o2 = t_w_o2;
  const PoseSE3 t_o2_w = t_w_o2.inverse();

  // One noise realization per robot and object, independent of iteration
  // order, so every submap of a robot carries the same estimate of an object.
  std::vector<std::array<RobotObservation, 2>> obs(n);
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < n; ++k) {
      std::mt19937_64 g(mix_seed(mix_seed(cfg.seed, 1000 + r), static_cast<std::uint64_t>(k)));
      RobotObservation& o = obs[k][r];
      o.present = uniform01(g) >= cfg.dropout_rate;
      o.pos_w = sp.world.objects[k].position + normal3(g, cfg.centroid_noise_sigma);
      o.embedding =
          perturb_unit_vector(g, sp.world.objects[k].embedding, cfg.embedding_noise_rad);
      o.shape = jitter_shape(g, sp.world.objects[k].shape, cfg.shape_noise);
      o.obs_count = 1 + uniform_int(g, 10);
    }
  }

  const double half_x = cfg.world_extent.x() / 2.0;
  const double start_x = -(half_x + cfg.submap_radius);
  const double stop_x = half_x + cfg.submap_radius;
  std::vector<double> centers_x;
  for (double s = start_x; s <= stop_x + 1e-9; s += cfg.submap_spacing) centers_x.push_back(s);

  const double theta = deg2rad(cfg.heading_offset_deg);
  const Eigen::Matrix3d rot_offset = rot_z(theta);

  std::int64_t clutter_id = 1000000;
  std::array<std::vector<PoseSE3>, 2> frames_w;
  for (int r = 0; r < 2; ++r) {
    std::vector<Submap>& out = r == 0 ? sp.submaps_i : sp.submaps_j;
    for (size_t m = 0; m < centers_x.size(); ++m) {
      PoseSE3 frame_w;
      if (r == 0) {
        frame_w.translation = {centers_x[m], 0.0, 0.0};
      } else {
        frame_w.rotation = rot_offset;
        frame_w.translation = rot_offset * Eigen::Vector3d(centers_x[m], 0.0, 0.0);
      }
      frames_w[r].push_back(frame_w);

      std::vector<Segment> world_segs;
      for (int k = 0; k < n; ++k) {
        const RobotObservation& o = obs[k][r];
        if (!o.present) continue;
        if ((o.pos_w - frame_w.translation).norm() > cfg.submap_radius) continue;
        Segment seg;
        seg.id = sp.world.objects[k].id;
        seg.centroid = o.pos_w;
        seg.shape = o.shape;
        seg.embedding = o.embedding;
        seg.obs_count = o.obs_count;
        world_segs.push_back(std::move(seg));
      }
      if (static_cast<int>(world_segs.size()) > cfg.submap_max_segments) {
        std::sort(world_segs.begin(), world_segs.end(), [&](const Segment& a, const Segment& b) {
          const double da = (a.centroid - frame_w.translation).norm();
          const double db = (b.centroid - frame_w.translation).norm();
          if (da != db) return da < db;
          return a.id < b.id;
        });
        world_segs.resize(cfg.submap_max_segments);
      }

      std::mt19937_64 cgen(
          mix_seed(mix_seed(cfg.seed, 2000 + r), static_cast<std::uint64_t>(m)));
      const long n_clutter = std::lround(cfg.clutter_rate * static_cast<double>(world_segs.size()));
      for (long c = 0; c < n_clutter; ++c) {
        const double ang = uniform_range(cgen, 0.0, 2.0 * kPi);
        const double rad = cfg.submap_radius * std::sqrt(uniform01(cgen));
        Segment seg;
        seg.id = clutter_id++;
        seg.centroid = frame_w.translation +
                       Eigen::Vector3d(rad * std::cos(ang), rad * std::sin(ang), 0.0);
        seg.centroid.z() = uniform_range(cgen, 0.0, cfg.world_extent.z());
        const int cls = uniform_int(cgen, cfg.n_semantic_classes);
        seg.embedding =
            perturb_unit_vector(cgen, sp.world.class_prototypes[cls], cfg.class_spread_rad);
        seg.shape = jitter_shape(cgen, sp.world.class_shapes[cls], 0.1);
        seg.obs_count = 1 + uniform_int(cgen, 5);
        world_segs.push_back(std::move(seg));
      }

      Submap submap;
      submap.frame_pose = r == 0 ? frame_w : t_o2_w * frame_w;
      submap.robot_id = r;
      submap.submap_idx = static_cast<int>(m);
      submap.center_world = frame_w.translation;
      submap.segments.reserve(world_segs.size());
      for (const Segment& seg : world_segs) {
        submap.segments.push_back(segment_in_frame(seg, frame_w));
      }
      std::sort(submap.segments.begin(), submap.segments.end(),
                [](const Segment& a, const Segment& b) { return a.id < b.id; });
      out.push_back(std::move(submap));
    }
  }

  for (size_t mi = 0; mi < sp.submaps_i.size(); ++mi) {
    for (size_t mj = 0; mj < sp.submaps_j.size(); ++mj) {
      PairGroundTruth gt;
      gt.submap_i_idx = static_cast<int>(mi);
      gt.submap_j_idx = static_cast<int>(mj);
      gt.t_mi_mj = frames_w[0][mi].inverse() * frames_w[1][mj];
      gt.heading_deg = heading_difference_deg(euler_zyx(frames_w[0][mi].rotation).yaw,
                                              euler_zyx(frames_w[1][mj].rotation).yaw);
      int shared = 0;
      size_t a = 0, b = 0;
      const auto& segs_i = sp.submaps_i[mi].segments;
      const auto& segs_j = sp.submaps_j[mj].segments;
      while (a < segs_i.size() && b < segs_j.size()) {
        if (segs_i[a].id < segs_j[b].id) {
          ++a;
        } else if (segs_j[b].id < segs_i[a].id) {
          ++b;
        } else {
          ++shared;
          ++a;
          ++b;
        }
      }
      gt.shared_objects = shared;
      sp.pairs.push_back(gt);
    }
  }
  return sp;
}

MirrorScenario make_mirror_scenario() {
  const int kCols = 6;
  Embedding e = Embedding::Zero(8);
  e[0] = 1.0;
  const Eigen::Vector4d shape(1.0, 0.3, 0.3, 0.4);
  const auto make_seg = [&](std::int64_t id, const Eigen::Vector3d& c) {
    Segment s;
    s.id = id;
    s.centroid = c;
    s.shape = shape;
    s.embedding = e;
    s.obs_count = 3;
    return s;
  };

  // Columns of paired objects: one above and one below z = 0. Heights follow a
  // Sidon set so all pairwise height sums are distinct by at least 0.4; any two
  // high-to-low pairings then disagree in vertical offset and get gated, which
  // keeps unintended matchings (e.g. matching the ladder onto its own
  // reflection) from forming large consistent cliques. Both maps cover all
  // columns but only the first two columns' opposite members, so the correct
  // overlap is 4 objects while the high-to-low matching spans 8.
  constexpr double kHeights[kCols] = {0.5, 0.9, 1.7, 3.3, 5.3, 8.5};
  std::vector<Segment> top, bottom;
  for (int k = 0; k < kCols; ++k) {
    top.push_back(make_seg(100 + k, {2.0 * k, 0.0, kHeights[k]}));
    bottom.push_back(make_seg(200 + k, {2.0 * k, 0.0, -kHeights[k]}));
  }

  MirrorScenario sc;
  sc.map_i.robot_id = 0;
  sc.map_i.submap_idx = 0;
  sc.map_i.frame_pose = PoseSE3::identity();
  sc.map_i.center_world = {5.0, 0.0, 0.0};
  for (int k = 0; k < kCols; ++k) sc.map_i.segments.push_back(top[k]);
  sc.map_i.segments.push_back(bottom[0]);
  sc.map_i.segments.push_back(bottom[1]);

  PoseSE3 frame_j;
  frame_j.rotation = rot_z(kPi);
  frame_j.translation = {5.0, 0.0, 0.0};
  sc.map_j.robot_id = 1;
  sc.map_j.submap_idx = 0;
  sc.map_j.frame_pose = frame_j;
  sc.map_j.center_world = {5.0, 0.0, 0.0};
  for (int k = 0; k < kCols; ++k) {
    sc.map_j.segments.push_back(segment_in_frame(bottom[k], frame_j));
  }
  sc.map_j.segments.push_back(segment_in_frame(top[0], frame_j));
  sc.map_j.segments.push_back(segment_in_frame(top[1], frame_j));

  const auto by_id = [](const Segment& a, const Segment& b) { return a.id < b.id; };
  std::sort(sc.map_i.segments.begin(), sc.map_i.segments.end(), by_id);
  std::sort(sc.map_j.segments.begin(), sc.map_j.segments.end(), by_id);
  sc.t_mi_mj_true = frame_j;
  return sc;
}

std::vector<ObservationFrame> synthesize_observation_stream(std::uint64_t seed, int n_frames,
                                                            int n_objects, double voxel_size) {
  struct BoxObject {
    Eigen::Vector3d center;
    VoxelSet full;
    VoxelSet half;  // lower-x half, for alternating partial views
    Embedding embedding;
  };

  std::vector<BoxObject> objects;
  for (int k = 0; k < n_objects; ++k) {
    BoxObject obj;
    obj.center = {4.0 + 3.0 * k, k % 2 == 0 ? -2.0 : 2.0, 1.0};
    const Voxel base{static_cast<std::int32_t>(std::floor(obj.center.x() / voxel_size)),
                     static_cast<std::int32_t>(std::floor(obj.center.y() / voxel_size)),
                     static_cast<std::int32_t>(std::floor(obj.center.z() / voxel_size))};
    for (int dx = -1; dx <= 2; ++dx) {
      for (int dy = -1; dy <= 2; ++dy) {
        for (int dz = -1; dz <= 2; ++dz) {
          const Voxel v{base.x + dx, base.y + dy, base.z + dz};
          obj.full.insert(v);
          if (dx <= 0) obj.half.insert(v);
        }
      }
    }
    std::mt19937_64 og(mix_seed(seed, 100 + static_cast<std::uint64_t>(k)));
    obj.embedding = random_unit_vector(og, 8);
    objects.push_back(std::move(obj));
  }

  // Thin slab at ground level, wide enough to trip the planar filter.
  SegmentObservation ground;
  for (int ix = 0; ix < 30; ++ix) {
    for (int iy = -15; iy < 15; ++iy) ground.voxels.insert(Voxel{ix, iy, 0});
  }
  {
    std::mt19937_64 gg(mix_seed(seed, 99));
    ground.embedding = random_unit_vector(gg, 8);
  }

  std::mt19937_64 ngen(mix_seed(seed, 9));
  std::vector<ObservationFrame> frames;
  frames.reserve(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    ObservationFrame frame;
    frame.frame_idx = f;
    frame.camera_pose.rotation = rot_y(kPi / 2.0);  // optical axis along world +x
    frame.camera_pose.translation = {static_cast<double>(f), 0.0, 1.0};
    for (const BoxObject& obj : objects) {
      const double ahead = obj.center.x() - frame.camera_pose.translation.x();
      if (ahead < 1.0 || (obj.center - frame.camera_pose.translation).norm() > 12.0) continue;
      SegmentObservation o;
      o.voxels = f % 2 == 0 ? obj.full : obj.half;
      o.embedding = perturb_unit_vector(ngen, obj.embedding, 0.02);
      frame.observations.push_back(std::move(o));
    }
    SegmentObservation g = ground;
    g.embedding = perturb_unit_vector(ngen, g.embedding, 0.02);
    frame.observations.push_back(std::move(g));
    frames.push_back(std::move(frame));
  }
  return frames;
}

AffinityProblem random_affinity_problem(int n, std::uint64_t seed, double edge_prob) {
  if (n <= 0) throw std::invalid_argument("problem size must be positive");
  std::mt19937_64 gen(mix_seed(seed, 42));
  AffinityProblem prob;
  prob.n = n;
  prob.M = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    prob.M(p, p) = 1.0;
    for (int q = p + 1; q < n; ++q) {
      if (uniform01(gen) < edge_prob) {
        const double w = uniform_range(gen, 0.1, 1.0);
        prob.M(p, q) = w;
        prob.M(q, p) = w;
      } else {
        prob.zero_mask.emplace_back(p, q);
      }
    }
  }
  return prob;
}

std::pair<AffinityProblem, std::vector<int>> planted_affinity_problem(int n_planted,
                                                                      int n_distractor,
                                                                      double weight,
                                                                      std::uint64_t seed) {
  const int n = n_planted + n_distractor;
  if (n_planted <= 0 || n_distractor < 0) throw std::invalid_argument("bad planted sizes");
  std::mt19937_64 gen(mix_seed(seed, 43));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[uniform_int(gen, k + 1)]);
  std::vector<int> planted(perm.begin(), perm.begin() + n_planted);
  std::sort(planted.begin(), planted.end());

  std::vector<char> in_planted(n, 0);
  for (int p : planted) in_planted[p] = 1;

  AffinityProblem prob;
  prob.n = n;
  prob.M = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    prob.M(p, p) = 1.0;
    for (int q = p + 1; q < n; ++q) {
      if (in_planted[p] && in_planted[q]) {
        prob.M(p, q) = weight;
        prob.M(q, p) = weight;
      } else {
        prob.zero_mask.emplace_back(p, q);
      }
    }
  }
  return {std::move(prob), std::move(planted)};
}

}  // namespace mapalign
