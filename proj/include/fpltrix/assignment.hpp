#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpltrix {

struct AssignmentResult {
    std::vector<std::size_t> row_to_col;
    // Reduced costs c(r,c) - u(r) - v(c), row-major; zero on the assignment.
    std::vector<double> reduced;
};

// Minimum-cost assignment of every row of a rows x cols cost matrix
// (rows <= cols, row-major) to a distinct column. Hungarian method with
// potentials, O(rows^2 * cols); costs may be negative.
AssignmentResult solve_assignment(std::span<const double> costs, std::size_t rows,
                                  std::size_t cols);

}  // namespace fpltrix
