#pragma once
// Exact maximum-weight bipartite matching (assignment problem).

#include <vector>

#include "vcell/tensor.hpp"

namespace vcell {

// Returns, for each row, the matched column or -1. Each row is matched to at
// most one column and vice versa. Weights below zero are never matched, so
// the result maximizes the sum of the selected weights over all partial
// matchings. O(n^3) in max(rows, cols).
std::vector<int> max_weight_matching(const Matrix& weights);

} // namespace vcell
