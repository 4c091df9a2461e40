#pragma once

#include <vector>

namespace circletrack {

struct Assignment {
    /// row index -> assigned column, or -1 when the row lands on a padded
    /// (dummy) column of a rectangular problem.
    std::vector<int> row_to_col;
    /// Total cost over real (non-padded) assignments.
    double total_cost = 0.0;
};

/// Minimum-total-cost bipartite matching by shortest augmenting paths with
/// potentials, O(n^3). Rectangular inputs are padded to square with zero-cost
/// dummy entries, so rows may go unassigned when that is cheaper; among
/// equal-cost optima the column scan order makes the result deterministic.
/// Throws on an empty or non-finite matrix.
Assignment hungarian_assign(const std::vector<std::vector<double>>& cost);

}  // namespace circletrack
