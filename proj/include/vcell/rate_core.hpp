#pragma once
// SINR and rate arithmetic. A CellView restricts one virtual cell's channel
// data to local indices; powers come either as a full component tensor
// p(user, bs, band) or as per-user-band aggregates P(user, band).
//
// Two SINR conventions coexist and both are needed:
//  * component SINR: each (user, bs, band) power component is a separate
//    link, and every other component - including the same user's components
//    aimed at other BSs - contributes interference;
//  * served SINR: a user transmits P(user, band) towards an assigned BS, and
//    only other users interfere.

#include <optional>
#include <vector>

#include "vcell/scenario.hpp"
#include "vcell/tensor.hpp"
#include "vcell/virtual_cells.hpp"

namespace vcell {

struct CellView {
    std::vector<std::size_t> users; // global user ids, sorted
    std::vector<std::size_t> bs;    // global BS ids, sorted
    Tensor3 gain;                   // (local user, local bs, band)
    Matrix noise;                   // (local bs, band), mW
    std::vector<double> band_width; // Hz per band
    std::vector<double> budget_mw;  // per local user

    std::size_t num_users() const { return users.size(); }
    std::size_t num_bs() const { return bs.size(); }
    std::size_t num_bands() const { return band_width.size(); }
};

CellView make_cell_view(const VirtualCell& cell, const ChannelRealization& chan,
                        const SystemConfig& cfg);

// P(user, band) = sum over BSs of the component powers
Matrix aggregate_user_band(const Tensor3& power);

// component SINR of every (user, bs, band) power component
Tensor3 sinr(const CellView& view, const Tensor3& power);

// interference at (user, bs, band) from the other users' aggregate powers:
// J(u,b,k) = sum over users u' != u of gain(u',b,k) * p_user_band(u',k)
Tensor3 intra_cell_interference(const CellView& view, const Matrix& p_user_band);

// served SINR gain(u,b,k)*P(u,k) / (noise + J(u,b,k)); the channel-allocation
// rules rank candidate links with this tensor
Tensor3 sinr_user_band(const CellView& view, const Matrix& p_user_band);

// sum over assigned links of W_k log2(1 + gain*P(u,k) / (noise + J))
double cell_sum_rate(const CellView& view, const ChannelAssignment& gamma,
                     const Matrix& p_user_band);

// sum over all components of W_k log2(1 + component SINR); the objective the
// continuous power solver maximizes
double component_sum_rate(const CellView& view, const Tensor3& power);

// sum over assigned links using the component power towards the assigned BS
// as signal and the other users' aggregates as interference
double assigned_sum_rate(const CellView& view, const ChannelAssignment& gamma,
                         const Tensor3& power);

// one cell's solved allocation; gamma is absent for the continuous scheme
struct CellSolution {
    std::optional<ChannelAssignment> gamma;
    Tensor3 power; // (local user, local bs, band)
};

// Network-wide sum rate with interference aggregated over every user in
// every cell. Assigned links use their aggregate power as signal and all
// other users as interference; continuous solutions count each positive
// component against all other components in the network.
double system_sum_rate(const VirtualCellPartition& partition,
                       const ChannelRealization& chan, const SystemConfig& cfg,
                       const std::vector<CellSolution>& solutions);

} // namespace vcell
