#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lacg {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with row/column potentials, O(n^3)). Returns assignment[row] = column.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace lacg
