#pragma once
// Virtual cells: a BS clustering plus a user affiliation rule. Each user
// joins the cell containing its affiliated BS, so the BS sets and the user
// sets both partition the network.

#include <optional>
#include <string>
#include <vector>

#include "vcell/clustering.hpp"
#include "vcell/scenario.hpp"

namespace vcell {

struct VirtualCell {
    std::vector<std::size_t> bs;    // global BS indices, sorted
    std::vector<std::size_t> users; // global user indices, sorted (may be empty)
    friend bool operator==(const VirtualCell&, const VirtualCell&) = default;
};

struct VirtualCellPartition {
    std::vector<VirtualCell> cells;
    std::string rule; // "closest" or "best-channel"
    std::size_t num_cells() const { return cells.size(); }
    friend bool operator==(const VirtualCellPartition&, const VirtualCellPartition&) = default;
};

// how to reduce a user's per-band gains to one BS-quality scalar
enum class BestChannelScalar { MaxOverBands, MeanOverBands };

// each user joins the cell of its nearest BS; ties go to the lowest BS index
VirtualCellPartition affiliate_closest(const Deployment& dep, const Clustering& clusters);

// each user joins the cell of the BS with the strongest channel;
// ties go to the lowest BS index
VirtualCellPartition affiliate_best_channel(const ChannelRealization& chan,
                                            const Clustering& clusters,
                                            BestChannelScalar scalar = BestChannelScalar::MaxOverBands);

// nullopt when the partition is proper; otherwise a description of the
// first violation found (duplicate or missing BS/user)
std::optional<std::string> validate_partition(const VirtualCellPartition& p,
                                              std::size_t num_bs, std::size_t num_users);

std::string partition_to_json(const VirtualCellPartition& p);

} // namespace vcell
