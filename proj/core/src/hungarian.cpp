#include "circletrack/hungarian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace circletrack {

Assignment hungarian_assign(const std::vector<std::vector<double>>& cost) {
    const int rows = static_cast<int>(cost.size());
    if (rows == 0 || cost[0].empty()) {
        throw std::invalid_argument("hungarian_assign: empty cost matrix");
    }
    const int cols = static_cast<int>(cost[0].size());
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != cols) {
            throw std::invalid_argument("hungarian_assign: ragged cost matrix");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("hungarian_assign: non-finite cost");
            }
        }
    }

    const int n = std::max(rows, cols);
    const auto padded = [&](int i, int j) -> double {
        return (i < rows && j < cols) ? cost[i][j] : 0.0;
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0);  // column -> row (1-based)
    std::vector<int> way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = padded(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    Assignment out;
    out.row_to_col.assign(rows, -1);
    for (int j = 1; j <= n; ++j) {
        const int i = match[j];
        if (i >= 1 && i <= rows && j <= cols) {
            out.row_to_col[i - 1] = j - 1;
            out.total_cost += cost[i - 1][j - 1];
        }
    }
    return out;
}

}  // namespace circletrack
