#include "vcell/matching.hpp"

#include <algorithm>
#include <limits>

namespace vcell {

// Hungarian algorithm with row/column potentials on a zero-padded square
// cost matrix (cost = -weight, clamped so negative-weight edges behave like
// the padding and stay out of the reported matching).
std::vector<int> max_weight_matching(const Matrix& weights) {
    const std::size_t R = weights.rows(), C = weights.cols();
    if (R == 0 || C == 0) return std::vector<int>(R, -1);
    const std::size_t N = std::max(R, C);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    auto cost = [&](std::size_t i, std::size_t j) {
        if (i < R && j < C) return -std::max(weights(i, j), 0.0);
        return 0.0;
    };

    // 1-indexed potentials; p[j] = row matched to column j, column 0 is a stub
    std::vector<double> u(N + 1, 0.0), v(N + 1, 0.0);
    std::vector<int> p(N + 1, 0), way(N + 1, 0);

    for (int i = 1; i <= int(N); ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(N + 1, kInf);
        std::vector<char> used(N + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= int(N); ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= int(N); ++j) {
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
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> match(R, -1);
    for (int j = 1; j <= int(N); ++j) {
        const int i = p[j];
        if (i >= 1 && i <= int(R) && j <= int(C) && weights(i - 1, j - 1) > 0.0)
            match[i - 1] = j - 1;
    }
    return match;
}

} // namespace vcell
