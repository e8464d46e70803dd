#include "mapalign/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mapalign/errors.hpp"

namespace mapalign {

FusionMethod fusion_from_string(const std::string& s) {
  if (s == "gm" || s == "geometric_mean") return FusionMethod::GeometricMean;
  if (s == "product") return FusionMethod::Product;
  if (s == "am" || s == "arithmetic_mean") return FusionMethod::ArithmeticMean;
  if (s == "diagonal") return FusionMethod::DiagonalOnly;
  throw std::invalid_argument("unknown fusion method: " + s);
}

std::string to_string(FusionMethod m) {
  switch (m) {
    case FusionMethod::GeometricMean: return "geometric_mean";
    case FusionMethod::Product: return "product";
    case FusionMethod::ArithmeticMean: return "arithmetic_mean";
    case FusionMethod::DiagonalOnly: return "diagonal";
  }
  return "?";
}

PutativeMode putative_mode_from_string(const std::string& s) {
  if (s == "all" || s == "all_to_all") return PutativeMode::AllToAll;
  if (s == "prune" || s == "pruned") return PutativeMode::Prune;
  throw std::invalid_argument("unknown putative mode: " + s);
}

std::string to_string(PutativeMode m) {
  return m == PutativeMode::AllToAll ? "all" : "prune";
}

double pairwise_score_standard(const Segment& p_i, const Segment& q_i, const Segment& p_j,
                               const Segment& q_j, const AffinityParams& params) {
  const double di = (p_i.centroid - q_i.centroid).norm();
  const double dj = (p_j.centroid - q_j.centroid).norm();
  const double d = std::abs(di - dj);
  if (d > params.epsilon) return 0.0;
  return std::exp(-0.5 * d * d / (params.sigma * params.sigma));
}

double pairwise_score_gravity(const Segment& p_i, const Segment& q_i, const Segment& p_j,
                              const Segment& q_j, const AffinityParams& params) {
  const double dxy_i = (p_i.centroid.head<2>() - q_i.centroid.head<2>()).norm();
  const double dxy_j = (p_j.centroid.head<2>() - q_j.centroid.head<2>()).norm();
  const double d_xy = std::abs(dxy_i - dxy_j);
  const double dz_i = p_i.centroid.z() - q_i.centroid.z();
  const double dz_j = p_j.centroid.z() - q_j.centroid.z();
  const double d_z = std::abs(dz_i - dz_j);
  const double s2 = params.sigma * params.sigma;
  const double arg = d_xy * d_xy / ((2.0 / 3.0) * s2) + d_z * d_z / ((1.0 / 3.0) * s2);
  const double gate = params.epsilon * params.epsilon / s2;
  if (arg > gate) return 0.0;
  return std::exp(-0.5 * arg);
}

double pairwise_score(const Segment& p_i, const Segment& q_i, const Segment& p_j,
                      const Segment& q_j, const AffinityParams& params) {
  return params.use_gravity ? pairwise_score_gravity(p_i, q_i, p_j, q_j, params)
                            : pairwise_score_standard(p_i, q_i, p_j, q_j, params);
}

double semantic_similarity(const Segment& p_i, const Segment& p_j, const AffinityParams& params) {
  const double cs = p_i.embedding.dot(p_j.embedding);
  if (cs <= params.phi_min) return 0.0;
  if (cs >= params.phi_max) return 1.0;
  return (cs - params.phi_min) / (params.phi_max - params.phi_min);
}

double shape_similarity(const Segment& p_i, const Segment& p_j) {
  double prod = 1.0;
  for (int k = 0; k < 4; ++k) {
    const double x = p_i.shape[k];
    const double y = p_j.shape[k];
    prod *= std::min(x / y, y / x);
  }
  return std::pow(prod, 0.25);
}

double segment_similarity(const Segment& p_i, const Segment& p_j, const AffinityParams& params) {
  double prod = 1.0;
  int n = 0;
  if (params.use_shape) {
    prod *= shape_similarity(p_i, p_j);
    ++n;
  }
  if (params.use_semantic) {
    prod *= semantic_similarity(p_i, p_j, params);
    ++n;
  }
  if (n == 0) return 1.0;
  return n == 1 ? prod : std::sqrt(prod);
}

double fuse(double s_a, double s_o_p, double s_o_q, FusionMethod method) {
  if (s_a == 0.0) return 0.0;
  switch (method) {
    case FusionMethod::GeometricMean: return std::cbrt(s_a * s_o_p * s_o_q);
    case FusionMethod::Product: return s_a * s_o_p * s_o_q;
    case FusionMethod::ArithmeticMean: return (s_a + s_o_p + s_o_q) / 3.0;
    case FusionMethod::DiagonalOnly: return s_a;
  }
  return 0.0;
}

AssociationSet generate_putative(const Submap& submap_i, const Submap& submap_j,
                                 PutativeMode mode, const AffinityParams& params,
                                 double prune_threshold) {
  AssociationSet out;
  const int mi = static_cast<int>(submap_i.segments.size());
  const int mj = static_cast<int>(submap_j.segments.size());
  for (int a = 0; a < mi; ++a) {
    for (int b = 0; b < mj; ++b) {
      if (mode == PutativeMode::Prune &&
          segment_similarity(submap_i.segments[a], submap_j.segments[b], params) <
              prune_threshold)
        continue;
      out.push_back({a, b});
    }
  }
  return out;
}

AffinityProblem build_affinity(const Submap& submap_i, const Submap& submap_j,
                               const AffinityParams& params, const AssociationSet& putative) {
  const int n = static_cast<int>(putative.size());
  if (n == 0) throw std::invalid_argument("build_affinity: empty putative set");
  if (n > params.n_max)
    throw ProblemTooLargeError("build_affinity: " + std::to_string(n) + " putative > n_max");

  AffinityProblem prob;
  prob.n = n;
  prob.M = Eigen::MatrixXd::Zero(n, n);

  // Per-node segment similarity, computed once.
  std::vector<double> s_o(n);
  for (int p = 0; p < n; ++p)
    s_o[p] = segment_similarity(submap_i.segments[putative[p].i_idx],
                                submap_j.segments[putative[p].j_idx], params);

  // Within-map geometry tables so the O(n^2) fill touches only scalars.
  const int mi = static_cast<int>(submap_i.segments.size());
  const int mj = static_cast<int>(submap_j.segments.size());
  Eigen::MatrixXd dist_i(mi, mi), dist_j(mj, mj), dxy_i(mi, mi), dxy_j(mj, mj);
  Eigen::VectorXd z_i(mi), z_j(mj);
  for (int a = 0; a < mi; ++a) {
    z_i[a] = submap_i.segments[a].centroid.z();
    for (int b = 0; b < mi; ++b) {
      dist_i(a, b) = (submap_i.segments[a].centroid - submap_i.segments[b].centroid).norm();
      dxy_i(a, b) = (submap_i.segments[a].centroid.head<2>() -
                     submap_i.segments[b].centroid.head<2>())
                        .norm();
    }
  }
  for (int a = 0; a < mj; ++a) {
    z_j[a] = submap_j.segments[a].centroid.z();
    for (int b = 0; b < mj; ++b) {
      dist_j(a, b) = (submap_j.segments[a].centroid - submap_j.segments[b].centroid).norm();
      dxy_j(a, b) = (submap_j.segments[a].centroid.head<2>() -
                     submap_j.segments[b].centroid.head<2>())
                        .norm();
    }
  }

  const double s2 = params.sigma * params.sigma;
  const double gate = params.epsilon * params.epsilon / s2;

  for (int p = 0; p < n; ++p) {
    prob.M(p, p) = params.fusion == FusionMethod::DiagonalOnly ? s_o[p] : 1.0;
    const int pi = putative[p].i_idx;
    const int pj = putative[p].j_idx;
    for (int q = p + 1; q < n; ++q) {
      const int qi = putative[q].i_idx;
      const int qj = putative[q].j_idx;
      double s_a;
      if (params.use_gravity) {
        const double d_xy = std::abs(dxy_i(pi, qi) - dxy_j(pj, qj));
        const double d_z = std::abs((z_i[pi] - z_i[qi]) - (z_j[pj] - z_j[qj]));
        const double arg = d_xy * d_xy / ((2.0 / 3.0) * s2) + d_z * d_z / ((1.0 / 3.0) * s2);
        s_a = arg > gate ? 0.0 : std::exp(-0.5 * arg);
      } else {
        const double d = std::abs(dist_i(pi, qi) - dist_j(pj, qj));
        s_a = d > params.epsilon ? 0.0 : std::exp(-0.5 * d * d / s2);
      }
      if (s_a == 0.0) {
        prob.zero_mask.emplace_back(p, q);
        continue;
      }
      const double m = fuse(s_a, s_o[p], s_o[q], params.fusion);
      prob.M(p, q) = m;
      prob.M(q, p) = m;
    }
  }
  return prob;
}

}  // namespace mapalign
