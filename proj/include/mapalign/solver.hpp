#pragma once

#include "mapalign/affinity.hpp"
#include "mapalign/problem.hpp"
#include "mapalign/types.hpp"

namespace mapalign {

/// Approximately maximizes u^T M u / u^T u over binary u subject to the
/// zero-constraint mask. Continuous relaxation over the nonnegative unit
/// sphere; the mask is enforced by a homotopy-increased penalty, followed by
/// densest-prefix rounding of the relaxed solution.
/// Throws std::invalid_argument when M is not symmetric.
SolverResult solve_densest(const AffinityProblem& prob, const SolverOpts& opts);

/// Exact oracle: enumerates all mask-feasible subsets. Ties broken by larger
/// cardinality, then lexicographically smallest index set. Refuses n > 20.
SolverResult brute_force_densest(const AffinityProblem& prob);

struct PutativeSolve {
  AssociationSet putative;
  SolverResult result;
};

/// Binary Top-K baseline: keeps each query segment's k most similar candidates,
/// builds a binary affinity matrix from the isotropic geometric gate, and runs
/// the densest-subgraph solver on it.
PutativeSolve solve_binary_topk(const Submap& submap_i, const Submap& submap_j, int k,
                                const AffinityParams& params, const SolverOpts& opts);

/// RANSAC baseline on segment centroids over the all-to-all putative set.
/// density reports the consensus size. Throws InsufficientPointsError if
/// either submap has fewer than 3 segments.
PutativeSolve solve_ransac(const Submap& submap_i, const Submap& submap_j, int iters,
                           double inlier_tol, const SolverOpts& opts);

}  // namespace mapalign
