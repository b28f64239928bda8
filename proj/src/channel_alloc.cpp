#include "vcell/channel_alloc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vcell/matching.hpp"

namespace vcell {

ChannelAssignment uc_allocation(const CellView& view, const Matrix& p_user_band) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    const Tensor3 s = sinr_user_band(view, p_user_band);
    ChannelAssignment gamma(U, B, K, 0);
    for (std::size_t u = 0; u < U; ++u)
        for (std::size_t k = 0; k < K; ++k) {
            std::size_t best_b = 0;
            double best = -1.0;
            for (std::size_t b = 0; b < B; ++b)
                if (s(u, b, k) > best) {
                    best = s(u, b, k);
                    best_b = b;
                }
            gamma(u, best_b, k) = 1;
        }
    return gamma;
}

ChannelAssignment bsc_allocation(const CellView& view, const Matrix& p_user_band) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    const Tensor3 s = sinr_user_band(view, p_user_band);
    ChannelAssignment gamma(U, B, K, 0);
    if (U == 0) return gamma;
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < K; ++k) {
            std::size_t best_u = 0;
            double best = -1.0;
            for (std::size_t u = 0; u < U; ++u)
                if (s(u, b, k) > best) {
                    best = s(u, b, k);
                    best_u = u;
                }
            gamma(best_u, b, k) = 1;
        }
    return gamma;
}

ChannelAssignment msrm_allocation(const CellView& view, const Matrix& p_user_band) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    const Tensor3 s = sinr_user_band(view, p_user_band);
    ChannelAssignment gamma(U, B, K, 0);
    Matrix w(U, B);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t u = 0; u < U; ++u)
            for (std::size_t b = 0; b < B; ++b)
                w(u, b) = view.band_width[k] * std::log2(1.0 + s(u, b, k));
        const auto match = max_weight_matching(w);
        for (std::size_t u = 0; u < U; ++u)
            if (match[u] >= 0) gamma(u, std::size_t(match[u]), k) = 1;
    }
    return gamma;
}

ChannelAssignment allocate_channels(AllocationRule rule, const CellView& view,
                                    const Matrix& p_user_band) {
    switch (rule) {
        case AllocationRule::UserCentric: return uc_allocation(view, p_user_band);
        case AllocationRule::BsCentric: return bsc_allocation(view, p_user_band);
        case AllocationRule::MaxSumRateMatching: return msrm_allocation(view, p_user_band);
    }
    throw std::logic_error("allocate_channels: unknown rule");
}

AlternatingResult alternating_solve(const CellView& view, AllocationRule rule,
                                    const AlternatingSettings& alt,
                                    const SolverSettings& solver) {
    if (alt.n_max < 1) throw std::invalid_argument("alternating_solve: n_max must be >= 1");
    if (!(alt.delta > 0.0)) throw std::invalid_argument("alternating_solve: delta must be > 0");

    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    AlternatingResult res;
    res.gamma = ChannelAssignment(U, B, K, 0);
    res.power = Tensor3(U, B, K, 0.0);
    if (U == 0) return res;

    Matrix p_user_band(U, K);
    for (std::size_t u = 0; u < U; ++u)
        for (std::size_t k = 0; k < K; ++k)
            p_user_band(u, k) = view.budget_mw[u] / double(K);

    double rate_prev = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    bool stopped = false;
    for (int n = 1; n <= alt.n_max; ++n) {
        const ChannelAssignment gamma = allocate_channels(rule, view, p_user_band);
        const PowerSolveResult ps =
            solve_power_continuous(view, solver, &gamma, &p_user_band);
        p_user_band = aggregate_user_band(ps.power);
        const double rate = assigned_sum_rate(view, gamma, ps.power);
        res.rate_history.push_back(rate);
        res.iterations = n;
        if (rate > best) {
            best = rate;
            res.gamma = gamma;
            res.power = ps.power;
            res.rate_bps = rate;
        }
        const double improvement = rate - rate_prev;
        rate_prev = rate;
        if (improvement <= alt.delta) {
            stopped = true;
            break;
        }
    }
    res.hit_iteration_cap = !stopped;
    return res;
}

} // namespace vcell
