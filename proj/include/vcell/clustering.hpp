#pragma once
// Base-station clustering. The primary algorithm is agglomerative merging
// under the minimax linkage: the dissimilarity between two clusters is the
// smallest radius a single member point can cover their union with. Its
// dendrogram can be cut at any cluster count, and consecutive cuts differ by
// exactly one merge, so resizing the clustering is a local change. K-means
// and spectral clustering are provided as baselines.

#include <string>
#include <vector>

#include "vcell/rng.hpp"
#include "vcell/scenario.hpp"
#include "vcell/tensor.hpp"

namespace vcell {

struct MergeStep {
    int left = 0;        // cluster ids being merged; leaves are 0..n-1,
    int right = 0;       // merged clusters take ids n, n+1, ...
    int merged = 0;
    double linkage = 0;  // minimax radius of the union, meters
};

struct Dendrogram {
    std::size_t leaf_count = 0;
    std::vector<MergeStep> merges; // exactly leaf_count - 1 entries
    std::string to_json() const;
};

struct Clustering {
    std::vector<std::size_t> label; // point index -> cluster label in [0, m)
    std::size_t num_clusters = 0;

    std::vector<std::vector<std::size_t>> members() const;
    friend bool operator==(const Clustering&, const Clustering&) = default;
};

struct MinimaxRadius {
    double radius = 0;
    std::size_t center = 0; // index into the point list
};

// min over candidate centers of the max distance to all members;
// ties broken by the lowest point index
MinimaxRadius minimax_radius(const std::vector<Point>& pts,
                             const std::vector<std::size_t>& members);

double minimax_linkage(const std::vector<Point>& pts,
                       const std::vector<std::size_t>& a,
                       const std::vector<std::size_t>& b);

// Full agglomerative merge history: start from singletons and repeatedly
// merge the pair of clusters whose union has the smallest minimax radius.
// Ties are broken by the lexicographically smallest (min id, max id) pair.
Dendrogram hierarchical_cluster(const std::vector<Point>& pts);

// Partition after exactly leaf_count - m merges. Labels are assigned in
// order of each cluster's smallest member index. Throws std::out_of_range
// unless 1 <= m <= leaf_count.
Clustering cut_dendrogram(const Dendrogram& d, std::size_t m);

// Lloyd's algorithm from k-means++ seeding, best of 10 restarts by
// within-cluster sum of squares. Deterministic given the stream.
Clustering kmeans_cluster(const std::vector<Point>& pts, std::size_t m, Rng& rng);

// k-means on arbitrary-dimension rows; used for the spectral embedding
Clustering kmeans_rows(const Matrix& rows, std::size_t m, Rng& rng);

// Gaussian affinity exp(-d^2 / (2 sigma^2)) with zero diagonal
Matrix spectral_affinity(const std::vector<Point>& pts, double sigma);

// Normalized-affinity spectral clustering: embed points into the top-m
// eigenvector rows (unit-normalized) and run k-means there.
Clustering spectral_cluster(const std::vector<Point>& pts, std::size_t m,
                            double sigma, Rng& rng);

} // namespace vcell
