#include "vcell/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace vcell {

std::string Dendrogram::to_json() const {
    nlohmann::json j;
    j["leaf_count"] = leaf_count;
    j["merges"] = nlohmann::json::array();
    for (const auto& m : merges)
        j["merges"].push_back({{"left", m.left},
                               {"right", m.right},
                               {"merged", m.merged},
                               {"linkage", m.linkage}});
    return j.dump();
}

std::vector<std::vector<std::size_t>> Clustering::members() const {
    std::vector<std::vector<std::size_t>> out(num_clusters);
    for (std::size_t i = 0; i < label.size(); ++i) out[label[i]].push_back(i);
    return out;
}

MinimaxRadius minimax_radius(const std::vector<Point>& pts,
                             const std::vector<std::size_t>& members) {
    if (members.empty()) throw std::invalid_argument("minimax_radius: empty set");
    MinimaxRadius best{std::numeric_limits<double>::infinity(), members.front()};
    for (std::size_t ci : members) {
        double r = 0.0;
        for (std::size_t mi : members) r = std::max(r, distance(pts[ci], pts[mi]));
        if (r < best.radius || (r == best.radius && ci < best.center)) best = {r, ci};
    }
    return best;
}

double minimax_linkage(const std::vector<Point>& pts,
                       const std::vector<std::size_t>& a,
                       const std::vector<std::size_t>& b) {
    std::vector<std::size_t> u;
    u.reserve(a.size() + b.size());
    u.insert(u.end(), a.begin(), a.end());
    u.insert(u.end(), b.begin(), b.end());
    return minimax_radius(pts, u).radius;
}

Dendrogram hierarchical_cluster(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n == 0) throw std::invalid_argument("hierarchical_cluster: no points");

    Dendrogram d;
    d.leaf_count = n;

    struct Active {
        int id;
        std::vector<std::size_t> members;
    };
    std::vector<Active> act;
    act.reserve(n);
    for (std::size_t i = 0; i < n; ++i) act.push_back({int(i), {i}});

    // linkage cache keyed by (min id, max id)
    std::map<std::pair<int, int>, double> link;
    for (std::size_t i = 0; i < act.size(); ++i)
        for (std::size_t j = i + 1; j < act.size(); ++j)
            link[{act[i].id, act[j].id}] =
                minimax_linkage(pts, act[i].members, act[j].members);

    int next_id = int(n);
    while (act.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_key{0, 0};
        for (std::size_t i = 0; i < act.size(); ++i)
            for (std::size_t j = i + 1; j < act.size(); ++j) {
                auto key = std::minmax(act[i].id, act[j].id);
                const double v = link.at({key.first, key.second});
                if (v < best ||
                    (v == best && std::pair(key.first, key.second) < best_key)) {
                    best = v;
                    best_key = {key.first, key.second};
                    bi = i;
                    bj = j;
                }
            }

        Active merged;
        merged.id = next_id++;
        merged.members = act[bi].members;
        merged.members.insert(merged.members.end(), act[bj].members.begin(),
                              act[bj].members.end());
        std::sort(merged.members.begin(), merged.members.end());

        d.merges.push_back({best_key.first, best_key.second, merged.id, best});

        // drop the two inputs (bj > bi), then link the union to the survivors
        act.erase(act.begin() + bj);
        act.erase(act.begin() + bi);
        for (const auto& g : act)
            link[{std::min(g.id, merged.id), std::max(g.id, merged.id)}] =
                minimax_linkage(pts, g.members, merged.members);
        act.push_back(std::move(merged));
    }
    return d;
}

Clustering cut_dendrogram(const Dendrogram& d, std::size_t m) {
    if (m < 1 || m > d.leaf_count)
        throw std::out_of_range("cut_dendrogram: m must be in [1, leaf_count]");

    const std::size_t n = d.leaf_count;
    std::vector<int> owner(n);
    std::iota(owner.begin(), owner.end(), 0);
    for (std::size_t s = 0; s < n - m; ++s) {
        const auto& step = d.merges[s];
        for (auto& o : owner)
            if (o == step.left || o == step.right) o = step.merged;
    }

    // relabel clusters in order of smallest member index
    Clustering c;
    c.label.resize(n);
    std::map<int, std::size_t> relabel;
    for (std::size_t i = 0; i < n; ++i)
        if (!relabel.count(owner[i])) {
            const std::size_t next = relabel.size();
            relabel[owner[i]] = next;
        }
    for (std::size_t i = 0; i < n; ++i) c.label[i] = relabel[owner[i]];
    c.num_clusters = relabel.size();
    return c;
}

namespace {

Clustering relabel_by_smallest_member(std::vector<std::size_t> raw, std::size_t m) {
    std::vector<std::size_t> order; // raw label -> new label
    order.assign(m, m);
    std::size_t next = 0;
    for (std::size_t raw_label : raw)
        if (order[raw_label] == m) order[raw_label] = next++;
    Clustering c;
    c.num_clusters = next;
    c.label.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) c.label[i] = order[raw[i]];
    return c;
}

double sq_dist_rows(const Matrix& rows, std::size_t i, const std::vector<double>& center) {
    double s = 0.0;
    for (std::size_t d = 0; d < rows.cols(); ++d) {
        const double diff = rows(i, d) - center[d];
        s += diff * diff;
    }
    return s;
}

std::vector<std::vector<double>> kmeanspp_init(const Matrix& rows, std::size_t m, Rng& rng) {
    const std::size_t n = rows.rows(), dim = rows.cols();
    std::vector<std::vector<double>> centers;
    centers.reserve(m);

    auto row_of = [&](std::size_t i) {
        std::vector<double> r(dim);
        for (std::size_t d = 0; d < dim; ++d) r[d] = rows(i, d);
        return r;
    };

    centers.push_back(row_of(rng.index(n)));
    std::vector<double> d2(n);
    while (centers.size() < m) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_dist_rows(rows, i, c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total > 0.0) {
            const double r = rng.uniform01() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.index(n); // all points coincide with existing centers
        }
        centers.push_back(row_of(pick));
    }
    return centers;
}

} // namespace

Clustering kmeans_rows(const Matrix& rows, std::size_t m, Rng& rng) {
    const std::size_t n = rows.rows(), dim = rows.cols();
    if (m < 1) throw std::invalid_argument("kmeans: m must be >= 1");
    if (m > n) throw std::invalid_argument("kmeans: m exceeds the number of points");

    constexpr int kRestarts = 10;
    constexpr int kMaxIter = 100;

    std::vector<std::size_t> best_labels;
    double best_cost = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < kRestarts; ++restart) {
        auto centers = kmeanspp_init(rows, m, rng);
        std::vector<std::size_t> labels(n, 0);

        for (int iter = 0; iter < kMaxIter; ++iter) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t bestc = 0;
                double bestd = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < m; ++c) {
                    const double d = sq_dist_rows(rows, i, centers[c]);
                    if (d < bestd) {
                        bestd = d;
                        bestc = c;
                    }
                }
                if (labels[i] != bestc) {
                    labels[i] = bestc;
                    changed = true;
                }
            }

            // an empty cluster steals the point farthest from its center
            std::vector<std::size_t> count(m, 0);
            for (auto l : labels) ++count[l];
            for (std::size_t c = 0; c < m; ++c) {
                if (count[c] > 0) continue;
                std::size_t far_i = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (count[labels[i]] <= 1) continue;
                    const double d = sq_dist_rows(rows, i, centers[labels[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                --count[labels[far_i]];
                labels[far_i] = c;
                ++count[c];
                changed = true;
            }

            for (std::size_t c = 0; c < m; ++c)
                std::fill(centers[c].begin(), centers[c].end(), 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t d = 0; d < dim; ++d) centers[labels[i]][d] += rows(i, d);
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < dim; ++d) centers[c][d] /= double(count[c]);

            if (!changed) break;
        }

        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) cost += sq_dist_rows(rows, i, centers[labels[i]]);
        if (cost < best_cost) {
            best_cost = cost;
            best_labels = labels;
        }
    }

    return relabel_by_smallest_member(std::move(best_labels), m);
}

Clustering kmeans_cluster(const std::vector<Point>& pts, std::size_t m, Rng& rng) {
    Matrix rows(pts.size(), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        rows(i, 0) = pts[i].x;
        rows(i, 1) = pts[i].y;
    }
    return kmeans_rows(rows, m, rng);
}

Matrix spectral_affinity(const std::vector<Point>& pts, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("spectral_affinity: sigma must be > 0");
    const std::size_t n = pts.size();
    Matrix a(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(pts[i], pts[j]);
            const double v = std::exp(-d * d / (2.0 * sigma * sigma));
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

Clustering spectral_cluster(const std::vector<Point>& pts, std::size_t m,
                            double sigma, Rng& rng) {
    const std::size_t n = pts.size();
    if (m < 1) throw std::invalid_argument("spectral_cluster: m must be >= 1");
    if (m > n) throw std::invalid_argument("spectral_cluster: m exceeds the number of points");

    const Matrix a = spectral_affinity(pts, sigma);

    // symmetric normalization D^-1/2 A D^-1/2; the top-m eigenvectors of this
    // operator are the bottom-m of the normalized Laplacian I - D^-1/2 A D^-1/2
    Eigen::MatrixXd norm(n, n);
    std::vector<double> scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
        scale[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            norm(long(i), long(j)) = scale[i] * scale[j] * a(i, j);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(norm);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_cluster: eigendecomposition failed");

    // eigenvalues come ascending; take the last m columns and normalize rows
    Matrix embed(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            const double v = es.eigenvectors()(long(i), long(n - m + c));
            embed(i, c) = v;
            norm2 += v * v;
        }
        if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t c = 0; c < m; ++c) embed(i, c) *= inv;
        }
    }

    return kmeans_rows(embed, m, rng);
}

} // namespace vcell
