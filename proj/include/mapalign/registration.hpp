#pragma once

#include <optional>
#include <vector>

#include "mapalign/affinity.hpp"
#include "mapalign/geometry.hpp"
#include "mapalign/problem.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

/// Least-squares rigid transform (R, t) minimizing sum ||a_k - (R b_k + t)||^2
/// via SVD of the centered cross-covariance, with the determinant sign
/// corrected so R is a proper rotation.
/// Throws InsufficientPointsError for fewer than 3 pairs and
/// DegenerateGeometryError when the pairs are collinear or coincident.
PoseSE3 arun(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b);

enum class AlignMethod {
  Densest,     // fused affinity matrix + densest-subgraph solver
  BinaryTopK,  // top-k putative pruning + binary consistency graph
  Ransac,      // centroid RANSAC on the all-to-all putative set
};

AlignMethod align_method_from_string(const std::string& name);
std::string to_string(AlignMethod method);

struct AlignParams {
  AffinityParams affinity;
  SolverOpts solver;
  AlignMethod method = AlignMethod::Densest;
  PutativeMode putative = PutativeMode::AllToAll;
  double prune_threshold = 0.5;  // min segment similarity in Prune mode
  int min_inliers = 4;           // acceptance threshold on association count
  bool reject_tilted = true;     // discard hypotheses that violate gravity
  double max_tilt_deg = 5.0;     // roll/pitch tolerance for gravity check
  int topk = 10;                 // candidates per query segment (BinaryTopK)
  int ransac_iters = 1000;
  double ransac_tol = 0.5;  // inlier distance in meters (Ransac)
};

struct AlignmentResult {
  AssociationSet associations;        // selected inlier associations
  int count = 0;                      // number of selected associations
  std::optional<PoseSE3> transform;   // submap_j frame -> submap_i frame
  bool accepted = false;              // count, transform and tilt checks passed
  double solver_density = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
};

/// True when the rotation's roll or pitch exceeds max_tilt_deg. Gravity-aligned
/// submaps can only differ by yaw, so a tilted hypothesis is spurious.
bool exceeds_tilt(const Eigen::Matrix3d& rotation, double max_tilt_deg);

/// Associates segments between two submaps and recovers the relative transform
/// from the matched centroids. The transform maps coordinates in submap_j's
/// frame into submap_i's frame.
AlignmentResult align_submaps(const Submap& submap_i, const Submap& submap_j,
                              const AlignParams& params);

/// Chains a submap-to-submap transform through the submap frame poses to get
/// the transform between the two robots' odometry frames.
PoseSE3 chain_robot_transform(const Submap& submap_i, const Submap& submap_j,
                              const PoseSE3& t_mi_mj);

}  // namespace mapalign
