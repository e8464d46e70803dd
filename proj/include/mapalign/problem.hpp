#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace mapalign {

/// Symmetric affinity matrix over putative associations plus the hard
/// zero-constraint mask (pairs that may not be selected together).
struct AffinityProblem {
  Eigen::MatrixXd M;                                // n x n, entries in [0,1]
  std::vector<std::pair<int, int>> zero_mask;       // p < q, gated pairs
  int n = 0;

  bool is_masked(int p, int q) const;               // O(log |mask|); mask kept sorted
};

struct SolverResult {
  std::vector<int> selected;   // sorted indices of accepted associations
  double density = 0.0;        // u^T M u / u^T u of the discrete selection
  int iterations = 0;
  double wall_time_s = 0.0;
};

struct SolverOpts {
  int max_outer = 1000;        // homotopy rounds
  int max_inner = 200;         // gradient steps per round
  double tol = 1e-8;           // stationarity
  double homotopy_mult = 1.4;
  double homotopy_init = 0.1;
  int restarts = 1;            // first restart is the deterministic uniform init
  std::uint64_t seed = 0;      // used by randomized restarts and RANSAC
};

/// Discrete density sum(M[S,S]) / |S| of a selection.
double subset_density(const Eigen::MatrixXd& M, const std::vector<int>& selected);

/// True when no two selected nodes share a masked edge.
bool respects_mask(const AffinityProblem& prob, const std::vector<int>& selected);

}  // namespace mapalign
