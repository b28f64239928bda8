#include "vcell/virtual_cells.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace vcell {

namespace {

VirtualCellPartition assemble(const Clustering& clusters,
                              const std::vector<std::size_t>& user_to_bs,
                              std::string rule) {
    VirtualCellPartition p;
    p.rule = std::move(rule);
    p.cells.resize(clusters.num_clusters);
    for (std::size_t b = 0; b < clusters.label.size(); ++b)
        p.cells[clusters.label[b]].bs.push_back(b);
    for (std::size_t u = 0; u < user_to_bs.size(); ++u)
        p.cells[clusters.label[user_to_bs[u]]].users.push_back(u);
    return p;
}

} // namespace

VirtualCellPartition affiliate_closest(const Deployment& dep, const Clustering& clusters) {
    if (clusters.label.size() != dep.bs.size())
        throw std::invalid_argument("affiliate_closest: clustering does not cover the BSs");
    std::vector<std::size_t> user_to_bs(dep.users.size());
    for (std::size_t u = 0; u < dep.users.size(); ++u) {
        std::size_t best_b = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < dep.bs.size(); ++b) {
            const double d = distance(dep.users[u], dep.bs[b]);
            if (d < best_d) {
                best_d = d;
                best_b = b;
            }
        }
        user_to_bs[u] = best_b;
    }
    return assemble(clusters, user_to_bs, "closest");
}

VirtualCellPartition affiliate_best_channel(const ChannelRealization& chan,
                                            const Clustering& clusters,
                                            BestChannelScalar scalar) {
    const std::size_t U = chan.gain.dim0(), B = chan.gain.dim1(), K = chan.gain.dim2();
    if (clusters.label.size() != B)
        throw std::invalid_argument("affiliate_best_channel: clustering does not cover the BSs");
    std::vector<std::size_t> user_to_bs(U);
    for (std::size_t u = 0; u < U; ++u) {
        std::size_t best_b = 0;
        double best_q = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < B; ++b) {
            double q;
            if (scalar == BestChannelScalar::MaxOverBands) {
                q = 0.0;
                for (std::size_t k = 0; k < K; ++k) q = std::max(q, chan.gain(u, b, k));
            } else {
                q = 0.0;
                for (std::size_t k = 0; k < K; ++k) q += chan.gain(u, b, k);
                q /= double(K);
            }
            if (q > best_q) {
                best_q = q;
                best_b = b;
            }
        }
        user_to_bs[u] = best_b;
    }
    return assemble(clusters, user_to_bs, "best-channel");
}

std::optional<std::string> validate_partition(const VirtualCellPartition& p,
                                              std::size_t num_bs, std::size_t num_users) {
    std::vector<int> bs_seen(num_bs, 0), user_seen(num_users, 0);
    for (std::size_t c = 0; c < p.cells.size(); ++c) {
        if (p.cells[c].bs.empty())
            return "cell " + std::to_string(c) + " has no BS";
        for (std::size_t b : p.cells[c].bs) {
            if (b >= num_bs) return "unknown BS " + std::to_string(b);
            if (++bs_seen[b] > 1) return "BS " + std::to_string(b) + " appears in more than one cell";
        }
        for (std::size_t u : p.cells[c].users) {
            if (u >= num_users) return "unknown user " + std::to_string(u);
            if (++user_seen[u] > 1) return "user " + std::to_string(u) + " appears in more than one cell";
        }
    }
    for (std::size_t b = 0; b < num_bs; ++b)
        if (!bs_seen[b]) return "BS " + std::to_string(b) + " is not covered";
    for (std::size_t u = 0; u < num_users; ++u)
        if (!user_seen[u]) return "user " + std::to_string(u) + " is not covered";
    return std::nullopt;
}

std::string partition_to_json(const VirtualCellPartition& p) {
    nlohmann::json j;
    j["rule"] = p.rule;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : p.cells)
        j["cells"].push_back({{"bs", c.bs}, {"users", c.users}});
    return j.dump();
}

} // namespace vcell
