#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mapalign {

/// Minimum-cost perfect matching on a square cost matrix via shortest
/// augmenting paths with dual potentials, O(n^3). Returns the column assigned
/// to each row. Throws std::invalid_argument for non-square or empty input.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace mapalign
