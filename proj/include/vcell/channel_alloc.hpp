#pragma once
// Channel allocation rules and the alternating channel/power driver.
//
// All three rules rank links by the served SINR computed from per-user-band
// powers. UC lets each user pick its best BS per band (several users may
// pick the same BS; the power step decides who actually transmits). BSC lets
// each BS pick its best user per band (a user may be picked by several BSs;
// power then concentrates on at most one). MSRM solves, per band, an exact
// maximum-weight one-to-one matching of users to BSs with rate weights.

#include <vector>

#include "vcell/power_solver.hpp"
#include "vcell/rate_core.hpp"
#include "vcell/tensor.hpp"

namespace vcell {

enum class AllocationRule { UserCentric, BsCentric, MaxSumRateMatching };

ChannelAssignment uc_allocation(const CellView& view, const Matrix& p_user_band);
ChannelAssignment bsc_allocation(const CellView& view, const Matrix& p_user_band);
ChannelAssignment msrm_allocation(const CellView& view, const Matrix& p_user_band);

ChannelAssignment allocate_channels(AllocationRule rule, const CellView& view,
                                    const Matrix& p_user_band);

struct AlternatingSettings {
    double delta = 10.0; // bits/s; stop once the rate improves by no more
    int n_max = 20;      // than this (the improvement may be negative)
};

struct AlternatingResult {
    ChannelAssignment gamma;
    Tensor3 power;
    double rate_bps = 0; // best assigned sum rate seen
    int iterations = 0;
    bool hit_iteration_cap = false;
    std::vector<double> rate_history; // one entry per alternation
};

// Alternate channel allocation and continuous power allocation, starting
// from an even split of each user's budget across bands. The power step is
// seeded with alpha = gamma so only the assigned links carry surrogate
// weight. Returns the best iterate; the stopping rule uses the raw rate
// difference, which need not be monotone.
AlternatingResult alternating_solve(const CellView& view, AllocationRule rule,
                                    const AlternatingSettings& alt,
                                    const SolverSettings& solver);

} // namespace vcell
