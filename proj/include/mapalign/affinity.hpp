#pragma once

#include <string>

#include "mapalign/problem.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

enum class FusionMethod { GeometricMean, Product, ArithmeticMean, DiagonalOnly };

FusionMethod fusion_from_string(const std::string& s);
std::string to_string(FusionMethod m);

struct AffinityParams {
  double sigma = 0.4;      // meters
  double epsilon = 0.6;    // meters, consistency gate
  double phi_min = 0.85;   // cosine-similarity rescale floor
  double phi_max = 0.95;   // cosine-similarity rescale ceiling
  bool use_gravity = true;
  bool use_semantic = true;
  bool use_shape = true;
  FusionMethod fusion = FusionMethod::GeometricMean;
  int n_max = 10000;       // putative-problem size guard
};

/// Isotropic pairwise consistency: d is the difference of within-map centroid
/// distances; 0 beyond epsilon, else exp(-d^2 / (2 sigma^2)).
double pairwise_score_standard(const Segment& p_i, const Segment& q_i, const Segment& p_j,
                               const Segment& q_j, const AffinityParams& params);

/// Gravity-decoupled pairwise consistency: planar distances compared by magnitude,
/// vertical offsets compared with sign, variance split 2/3 : 1/3. Gated when the
/// exponent argument exceeds epsilon^2 / sigma^2 (the isotropic gate's value).
double pairwise_score_gravity(const Segment& p_i, const Segment& q_i, const Segment& p_j,
                              const Segment& q_j, const AffinityParams& params);

/// Dispatches on params.use_gravity.
double pairwise_score(const Segment& p_i, const Segment& q_i, const Segment& p_j,
                      const Segment& q_j, const AffinityParams& params);

/// Cosine similarity rescaled linearly from [phi_min, phi_max] to [0, 1].
double semantic_similarity(const Segment& p_i, const Segment& p_j, const AffinityParams& params);

/// Geometric mean of elementwise min-ratio over the 4 shape attributes.
double shape_similarity(const Segment& p_i, const Segment& p_j);

/// Segment-to-segment similarity: GM of the enabled shape/semantic scores.
double segment_similarity(const Segment& p_i, const Segment& p_j, const AffinityParams& params);

/// Off-diagonal fusion of the pairwise score with the two segment scores.
/// Every method yields 0 when s_a = 0 (the constraint mask is governed by s_a).
double fuse(double s_a, double s_o_p, double s_o_q, FusionMethod method);

enum class PutativeMode { AllToAll, Prune };

PutativeMode putative_mode_from_string(const std::string& s);
std::string to_string(PutativeMode m);

/// AllToAll: every (i, j) pair. Prune: pairs whose segment similarity >= threshold.
AssociationSet generate_putative(const Submap& submap_i, const Submap& submap_j,
                                 PutativeMode mode, const AffinityParams& params,
                                 double prune_threshold = 0.0);

/// Builds the affinity problem over the putative associations. Diagonal is 1
/// except for DiagonalOnly fusion, where it carries the segment similarity.
/// Throws ProblemTooLargeError when |putative| > params.n_max.
AffinityProblem build_affinity(const Submap& submap_i, const Submap& submap_j,
                               const AffinityParams& params, const AssociationSet& putative);

}  // namespace mapalign
