#pragma once

#include <cstdint>
#include <vector>

#include "villagenet/data_io.hpp"
#include "villagenet/partition.hpp"

namespace villagenet {

// k x d village centers, row-major.
struct Centroids {
    std::vector<double> centers;
    int k = 0;
    std::size_t d = 0;

    const double* center(int u) const { return centers.data() + static_cast<std::size_t>(u) * d; }
    double* center(int u) { return centers.data() + static_cast<std::size_t>(u) * d; }
};

struct KMeansResult {
    Partition partition;
    Centroids centroids;
    int iterations = 0;
    double wcss = 0.0;
    // Within-cluster sum of squares recorded after every assignment pass;
    // non-increasing by construction of Lloyd's algorithm.
    std::vector<double> wcss_history;
};

// Picks k distinct rows of the dataset as initial centers, uniformly
// without replacement. Duplicate-valued rows are permitted.
Centroids init_random(const DataMatrix& data, int k, std::uint64_t seed);

// Nearest-center assignment with ties broken toward the lowest center
// index. Distances use the |x|^2 - 2 x.mu + |mu|^2 expansion with
// precomputed norms; this is the O(N*k*d) hot path of the pipeline.
Partition assign(const DataMatrix& data, const Centroids& centroids);

// Lloyd's algorithm from random initialization. Stops when assignments
// stabilize, when the largest center displacement drops below
// tol * sqrt(mean feature variance), or after max_iter rounds. Villages
// emptied by reassignment are re-seeded at the point currently farthest
// from its own center, so every returned village is non-empty.
KMeansResult fit(const DataMatrix& data, int k, std::uint64_t seed,
                 int max_iter = 100, double tol = 1e-6);

// Runs fit `restarts` times on seeds drawn from `seed` and keeps the
// lowest-WCSS solution (first such on ties).
KMeansResult fit_best(const DataMatrix& data, int k, std::uint64_t seed,
                      int max_iter = 100, double tol = 1e-6, int restarts = 1);

}  // namespace villagenet
