#include "mapalign/registration.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mapalign/errors.hpp"
#include "mapalign/solver.hpp"

namespace mapalign {

PoseSE3 arun(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("point sets must have equal size");
  if (a.size() < 3) {
    throw InsufficientPointsError("rigid fit needs at least 3 pairs, got " +
                                  std::to_string(a.size()));
  }
  const double inv_n = 1.0 / static_cast<double>(a.size());
  Eigen::Vector3d ca = Eigen::Vector3d::Zero();
  Eigen::Vector3d cb = Eigen::Vector3d::Zero();
  for (size_t k = 0; k < a.size(); ++k) {
    ca += a[k];
    cb += b[k];
  }
  ca *= inv_n;
  cb *= inv_n;

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (size_t k = 0; k < a.size(); ++k) {
    h += (b[k] - cb) * (a[k] - ca).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  // Rank < 2 means the pairs are coincident or collinear and the rotation about
  // the degenerate axis is unobservable.
  if (sv(1) < 1e-12 * std::max(sv(0), 1e-300)) {
    throw DegenerateGeometryError("rigid fit is rank deficient");
  }

  Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixV() * flip * svd.matrixU().transpose();
  }

  PoseSE3 pose;
  pose.rotation = r;
  pose.translation = ca - r * cb;
  return pose;
}

AlignMethod align_method_from_string(const std::string& name) {
  if (name == "densest" || name == "fused") return AlignMethod::Densest;
  if (name == "topk" || name == "binary_topk") return AlignMethod::BinaryTopK;
  if (name == "ransac") return AlignMethod::Ransac;
  throw std::invalid_argument("unknown alignment method: " + name);
}

std::string to_string(AlignMethod method) {
  switch (method) {
    case AlignMethod::Densest:
      return "densest";
    case AlignMethod::BinaryTopK:
      return "binary_topk";
    case AlignMethod::Ransac:
      return "ransac";
  }
  return "unknown";
}

bool exceeds_tilt(const Eigen::Matrix3d& rotation, double max_tilt_deg) {
  const EulerZYX e = euler_zyx(rotation);
  const double limit = deg2rad(max_tilt_deg);
  return std::abs(e.roll) > limit || std::abs(e.pitch) > limit;
}

AlignmentResult align_submaps(const Submap& submap_i, const Submap& submap_j,
                              const AlignParams& params) {
  const auto start = std::chrono::steady_clock::now();
  AlignmentResult out;

  AssociationSet putative;
  SolverResult sol;
  switch (params.method) {
    case AlignMethod::Densest: {
      putative = generate_putative(submap_i, submap_j, params.putative, params.affinity,
                                   params.prune_threshold);
      if (!putative.empty()) {
        const AffinityProblem prob = build_affinity(submap_i, submap_j, params.affinity, putative);
        sol = solve_densest(prob, params.solver);
      }
      break;
    }
    case AlignMethod::BinaryTopK: {
      PutativeSolve ps =
          solve_binary_topk(submap_i, submap_j, params.topk, params.affinity, params.solver);
      putative = std::move(ps.putative);
      sol = std::move(ps.result);
      break;
    }
    case AlignMethod::Ransac: {
      PutativeSolve ps = solve_ransac(submap_i, submap_j, params.ransac_iters, params.ransac_tol,
                                      params.solver);
      putative = std::move(ps.putative);
      sol = std::move(ps.result);
      break;
    }
  }

  out.associations.reserve(sol.selected.size());
  for (int p : sol.selected) out.associations.push_back(putative[p]);
  out.count = static_cast<int>(out.associations.size());
  out.solver_density = sol.density;
  out.iterations = sol.iterations;

  if (out.count >= 3) {
    std::vector<Eigen::Vector3d> pa;
    std::vector<Eigen::Vector3d> pb;
    pa.reserve(out.associations.size());
    pb.reserve(out.associations.size());
    for (const Association& assoc : out.associations) {
      pa.push_back(submap_i.segments[assoc.i_idx].centroid);
      pb.push_back(submap_j.segments[assoc.j_idx].centroid);
    }
    try {
      out.transform = arun(pa, pb);
    } catch (const DegenerateGeometryError&) {
      out.transform.reset();
    }
  }

  bool tilt_ok = true;
  if (out.transform && params.reject_tilted) {
    tilt_ok = !exceeds_tilt(out.transform->rotation, params.max_tilt_deg);
  }
  out.accepted = out.count >= params.min_inliers && out.transform.has_value() && tilt_ok;
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

PoseSE3 chain_robot_transform(const Submap& submap_i, const Submap& submap_j,
                              const PoseSE3& t_mi_mj) {
  return submap_i.frame_pose * t_mi_mj * submap_j.frame_pose.inverse();
}

}  // namespace mapalign
