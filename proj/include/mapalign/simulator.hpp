#pragma once

#include <cstdint>
#include <vector>

#include "mapalign/geometry.hpp"
#include "mapalign/io.hpp"
#include "mapalign/problem.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

struct ScenarioConfig {
  int n_objects = 100;
  Eigen::Vector3d world_extent = {40.0, 40.0, 3.0};  // box side lengths [m]
  int embedding_dim = 64;
  int n_semantic_classes = 10;
  double centroid_noise_sigma = 0.1;  // per-robot centroid noise [m]
  double embedding_noise_rad = 0.1;   // angular perturbation of observed embeddings
  double dropout_rate = 0.0;          // chance a robot misses an object entirely
  double clutter_rate = 0.0;          // spurious segments per real segment, per submap
  double heading_offset_deg = 0.0;    // angle between the two traversal directions
  double class_spread_rad = 0.05;     // within-class embedding spread
  double shape_noise = 0.05;          // log-normal jitter on observed shape attributes
  double traversal_step = 2.0;        // pose spacing along the trajectory [m]
  std::uint64_t seed = 0;
  double submap_spacing = 10.0;
  double submap_radius = 15.0;
  int submap_max_segments = 40;
};

struct WorldObject {
  std::int64_t id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  int semantic_class = 0;
  Eigen::Vector4d shape = Eigen::Vector4d::Constant(kShapeFloor);
  Embedding embedding;
};

struct World {
  std::vector<WorldObject> objects;
  std::vector<Embedding> class_prototypes;
  std::vector<Eigen::Vector4d> class_shapes;
};

/// Places objects uniformly in the centered extent box (z in [0, extent.z])
/// with a minimum pairwise separation. Throws std::runtime_error when the box
/// is too crowded to satisfy the separation.
World generate_world(const ScenarioConfig& cfg);

struct PairGroundTruth {
  int submap_i_idx = 0;
  int submap_j_idx = 0;
  PoseSE3 t_mi_mj;  // maps submap_j coordinates into submap_i's frame
  double heading_deg = 0.0;  // relative heading of the two frames, in [0, 180]
  int shared_objects = 0;    // world objects present in both submaps
};

struct ScenarioPair {
  World world;
  std::vector<Submap> submaps_i;  // robot 0, odometry frame = world
  std::vector<Submap> submaps_j;  // robot 1, offset odometry frame
  PoseSE3 t_o1_o2;                // robot 1 odometry frame in robot 0's odometry frame
  std::vector<PairGroundTruth> pairs;  // every cross-robot submap pair
};

/// Two straight-line traversals of a shared world. Robot 0 drives along +x
/// through the center; robot 1 follows the same line rotated by
/// heading_offset_deg about the world origin and reports poses in a private,
/// yaw-offset odometry frame. Each robot observes every world object at most
/// once with its own noise realization; per-submap clutter is injected on top.
ScenarioPair generate_traversal_pair(const ScenarioConfig& cfg);

struct MirrorScenario {
  Submap map_i;
  Submap map_j;
  PoseSE3 t_mi_mj_true;
};

/// Two maps of a row of vertically mirrored object pairs (one high, one low)
/// sharing only the first two columns. Matching high objects to low ones is
/// distance-consistent in 3D, so ignoring the vertical axis makes the wrong,
/// larger clique the densest one; separating planar and vertical offsets
/// breaks it.
MirrorScenario make_mirror_scenario();

/// Short synthetic observation stream: a few voxelized box objects seen from a
/// camera traveling along +x, alternating full and partial views, plus one
/// large ground-like slab that the tracker filter should drop.
std::vector<ObservationFrame> synthesize_observation_stream(std::uint64_t seed, int n_frames,
                                                            int n_objects, double voxel_size);

/// Random symmetric problem: unit diagonal, each off-diagonal pair kept with
/// edge_prob and weighted uniformly in [0.1, 1], otherwise zeroed and masked.
AffinityProblem random_affinity_problem(int n, std::uint64_t seed, double edge_prob = 0.5);

/// Problem with a fully connected planted block of the given weight at a
/// seeded random index subset; all remaining pairs are zeroed and masked.
/// Returns the problem and the sorted planted indices.
std::pair<AffinityProblem, std::vector<int>> planted_affinity_problem(int n_planted,
                                                                      int n_distractor,
                                                                      double weight,
                                                                      std::uint64_t seed);

}  // namespace mapalign
