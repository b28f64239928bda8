#include "vcell/rate_core.hpp"

#include <cmath>
#include <stdexcept>

namespace vcell {

CellView make_cell_view(const VirtualCell& cell, const ChannelRealization& chan,
                        const SystemConfig& cfg) {
    const std::size_t K = chan.gain.dim2();
    CellView v;
    v.users = cell.users;
    v.bs = cell.bs;
    v.band_width.assign(K, cfg.band_width);
    v.gain = Tensor3(v.users.size(), v.bs.size(), K);
    v.noise = Matrix(v.bs.size(), K);
    for (std::size_t u = 0; u < v.users.size(); ++u)
        for (std::size_t b = 0; b < v.bs.size(); ++b)
            for (std::size_t k = 0; k < K; ++k)
                v.gain(u, b, k) = chan.gain(v.users[u], v.bs[b], k);
    for (std::size_t b = 0; b < v.bs.size(); ++b)
        for (std::size_t k = 0; k < K; ++k) v.noise(b, k) = chan.noise(v.bs[b], k);
    v.budget_mw.resize(v.users.size());
    for (std::size_t u = 0; u < v.users.size(); ++u)
        v.budget_mw[u] = cfg.budget_mw(v.users[u]);
    return v;
}

Matrix aggregate_user_band(const Tensor3& power) {
    Matrix out(power.dim0(), power.dim2(), 0.0);
    for (std::size_t u = 0; u < power.dim0(); ++u)
        for (std::size_t b = 0; b < power.dim1(); ++b)
            for (std::size_t k = 0; k < power.dim2(); ++k) out(u, k) += power(u, b, k);
    return out;
}

Tensor3 sinr(const CellView& view, const Tensor3& power) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    if (power.dim0() != U || power.dim1() != B || power.dim2() != K)
        throw std::invalid_argument("sinr: power tensor shape mismatch");

    const Matrix ptot = aggregate_user_band(power);
    Tensor3 out(U, B, K);
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < K; ++k) {
            double rx = 0.0;
            for (std::size_t u = 0; u < U; ++u) rx += view.gain(u, b, k) * ptot(u, k);
            for (std::size_t u = 0; u < U; ++u) {
                const double own = view.gain(u, b, k) * power(u, b, k);
                out(u, b, k) = own / (view.noise(b, k) + rx - own);
            }
        }
    return out;
}

Tensor3 intra_cell_interference(const CellView& view, const Matrix& p_user_band) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    Tensor3 out(U, B, K);
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < K; ++k) {
            double rx = 0.0;
            for (std::size_t u = 0; u < U; ++u) rx += view.gain(u, b, k) * p_user_band(u, k);
            for (std::size_t u = 0; u < U; ++u)
                out(u, b, k) = rx - view.gain(u, b, k) * p_user_band(u, k);
        }
    return out;
}

Tensor3 sinr_user_band(const CellView& view, const Matrix& p_user_band) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    const Tensor3 j = intra_cell_interference(view, p_user_band);
    Tensor3 out(U, B, K);
    for (std::size_t u = 0; u < U; ++u)
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t k = 0; k < K; ++k)
                out(u, b, k) = view.gain(u, b, k) * p_user_band(u, k) /
                               (view.noise(b, k) + j(u, b, k));
    return out;
}

double cell_sum_rate(const CellView& view, const ChannelAssignment& gamma,
                     const Matrix& p_user_band) {
    const Tensor3 s = sinr_user_band(view, p_user_band);
    double rate = 0.0;
    for (std::size_t u = 0; u < view.num_users(); ++u)
        for (std::size_t b = 0; b < view.num_bs(); ++b)
            for (std::size_t k = 0; k < view.num_bands(); ++k)
                if (gamma(u, b, k))
                    rate += view.band_width[k] * std::log2(1.0 + s(u, b, k));
    return rate;
}

double component_sum_rate(const CellView& view, const Tensor3& power) {
    const Tensor3 s = sinr(view, power);
    double rate = 0.0;
    for (std::size_t u = 0; u < view.num_users(); ++u)
        for (std::size_t b = 0; b < view.num_bs(); ++b)
            for (std::size_t k = 0; k < view.num_bands(); ++k)
                rate += view.band_width[k] * std::log2(1.0 + s(u, b, k));
    return rate;
}

double assigned_sum_rate(const CellView& view, const ChannelAssignment& gamma,
                         const Tensor3& power) {
    const Matrix ptot = aggregate_user_band(power);
    const Tensor3 j = intra_cell_interference(view, ptot);
    double rate = 0.0;
    for (std::size_t u = 0; u < view.num_users(); ++u)
        for (std::size_t b = 0; b < view.num_bs(); ++b)
            for (std::size_t k = 0; k < view.num_bands(); ++k)
                if (gamma(u, b, k)) {
                    const double z = view.gain(u, b, k) * power(u, b, k) /
                                     (view.noise(b, k) + j(u, b, k));
                    rate += view.band_width[k] * std::log2(1.0 + z);
                }
    return rate;
}

double system_sum_rate(const VirtualCellPartition& partition,
                       const ChannelRealization& chan, const SystemConfig& cfg,
                       const std::vector<CellSolution>& solutions) {
    if (solutions.size() != partition.cells.size())
        throw std::invalid_argument("system_sum_rate: one solution per cell required");

    const std::size_t U = chan.gain.dim0(), B = chan.gain.dim1(), K = chan.gain.dim2();

    // every user transmits in exactly one cell; gather its per-band total
    Matrix ptot(U, K, 0.0);
    for (std::size_t c = 0; c < partition.cells.size(); ++c) {
        const auto& cell = partition.cells[c];
        const auto& p = solutions[c].power;
        for (std::size_t lu = 0; lu < cell.users.size(); ++lu)
            for (std::size_t lb = 0; lb < cell.bs.size(); ++lb)
                for (std::size_t k = 0; k < K; ++k)
                    ptot(cell.users[lu], k) += p(lu, lb, k);
    }

    // total received power at each BS/band from everyone in the network
    Matrix rx(B, K, 0.0);
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < K; ++k) {
            double s = 0.0;
            for (std::size_t u = 0; u < U; ++u) s += chan.gain(u, b, k) * ptot(u, k);
            rx(b, k) = s;
        }

    double rate = 0.0;
    for (std::size_t c = 0; c < partition.cells.size(); ++c) {
        const auto& cell = partition.cells[c];
        const auto& sol = solutions[c];
        for (std::size_t lu = 0; lu < cell.users.size(); ++lu) {
            const std::size_t gu = cell.users[lu];
            for (std::size_t lb = 0; lb < cell.bs.size(); ++lb) {
                const std::size_t gb = cell.bs[lb];
                for (std::size_t k = 0; k < K; ++k) {
                    const double g = chan.gain(gu, gb, k);
                    if (sol.gamma) {
                        if (!(*sol.gamma)(lu, lb, k)) continue;
                        const double denom =
                            chan.noise(gb, k) + rx(gb, k) - g * ptot(gu, k);
                        rate += cfg.band_width * std::log2(1.0 + g * ptot(gu, k) / denom);
                    } else {
                        const double p = sol.power(lu, lb, k);
                        if (!(p > 0.0)) continue;
                        const double denom = chan.noise(gb, k) + rx(gb, k) - g * p;
                        rate += cfg.band_width * std::log2(1.0 + g * p / denom);
                    }
                }
            }
        }
    }
    return rate;
}

} // namespace vcell
