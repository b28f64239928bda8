#pragma once
// Brute-force reference implementations used by the unit and acceptance
// suites. These deliberately re-derive results by exhaustive enumeration and
// stay independent of the library code paths they check.

#include <cstdint>
#include <vector>

#include "vcell/clustering.hpp"
#include "vcell/rate_core.hpp"
#include "vcell/scenario.hpp"
#include "vcell/tensor.hpp"

namespace vcell::test {

// exhaustive center scan for the minimax radius
MinimaxRadius brute_minimax_radius(const std::vector<Point>& pts,
                                   const std::vector<std::size_t>& members);

// one agglomerative step chosen by scanning every cluster pair with the
// brute-force radius; ties by lexicographically smallest (min id, max id)
struct BruteMerge {
    int left = 0, right = 0;
    double linkage = 0;
};
BruteMerge brute_best_merge(const std::vector<Point>& pts,
                            const std::vector<std::pair<int, std::vector<std::size_t>>>& clusters);

// best total weight over all partial matchings (rows to distinct columns)
double brute_matching_total(const Matrix& weights);

// Exhaustive optimum of the per-cell assignment problem: every channel
// assignment (each user-band picks one BS or stays silent) crossed with an
// L-level per-user power grid P(u,k) in {0, 1/(L-1), ..., 1} * budget with
// sum_k P(u,k) <= budget. Rates use aggregate powers and other-user
// interference, matching cell_sum_rate.
double brute_discrete_optimum(const CellView& view, int levels);

// single-cell instance drawn from the deployment/channel generators
struct CellInstance {
    SystemConfig cfg;
    Deployment dep;
    ChannelRealization chan;
    CellView view;
};
CellInstance random_cell_instance(std::uint64_t seed, std::size_t users,
                                  std::size_t bs, std::size_t bands);

std::vector<Point> random_points(std::uint64_t seed, std::size_t n, double side);

} // namespace vcell::test
