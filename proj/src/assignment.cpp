#include "fpltrix/assignment.hpp"

#include <limits>

#include "fpltrix/errors.hpp"

namespace fpltrix {

AssignmentResult solve_assignment(std::span<const double> costs, std::size_t rows,
                                  std::size_t cols) {
    if (rows == 0 || rows > cols || costs.size() != rows * cols) {
        throw ConfigError("assignment problem needs 1 <= rows <= cols and rows*cols costs");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto a = [&](std::size_t i, std::size_t j) { return costs[(i - 1) * cols + (j - 1)]; };

    // 1-based potentials; p[j] is the row matched to column j (0 = free).
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
    std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);

    for (std::size_t i = 1; i <= rows; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(cols + 1, inf);
        std::vector<char> used(cols + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const double cur = a(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    AssignmentResult result;
    result.row_to_col.assign(rows, 0);
    for (std::size_t j = 1; j <= cols; ++j) {
        if (p[j] != 0) result.row_to_col[p[j] - 1] = j - 1;
    }
    result.reduced.resize(rows * cols);
    for (std::size_t i = 1; i <= rows; ++i) {
        for (std::size_t j = 1; j <= cols; ++j) {
            result.reduced[(i - 1) * cols + (j - 1)] = a(i, j) - u[i] - v[j];
        }
    }
    return result;
}

}  // namespace fpltrix
