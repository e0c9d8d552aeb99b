#include "villagenet/village_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "villagenet/parallel.hpp"

namespace villagenet {

namespace {

void check_build_inputs(const DataMatrix& data, const Partition& villages,
                        const Centroids& centroids, int r) {
    if (villages.n_items() != data.n_rows) {
        throw std::invalid_argument("exterior_sets: partition covers " +
                                    std::to_string(villages.n_items()) + " points but data has " +
                                    std::to_string(data.n_rows) + " rows");
    }
    if (villages.m != centroids.k) {
        throw std::invalid_argument("exterior_sets: partition has " + std::to_string(villages.m) +
                                    " villages but centroids has " + std::to_string(centroids.k));
    }
    if (centroids.d != data.n_cols) {
        throw std::invalid_argument("exterior_sets: centroids are " + std::to_string(centroids.d) +
                                    "-dimensional but data has " + std::to_string(data.n_cols) +
                                    " columns");
    }
    if (centroids.k < 2) {
        throw std::invalid_argument(
            "exterior_sets: need at least 2 villages to define exteriors, got " +
            std::to_string(centroids.k));
    }
    if (r < 1) {
        throw std::invalid_argument("exterior_sets: r must be >= 1, got " + std::to_string(r));
    }
    if (r < 5 || r > 100) {
        std::cerr << "warning: exterior size r = " << r
                  << " is outside the usual range [5, 100]; the village network may be too "
                  << (r < 5 ? "sparse" : "dense") << "\n";
    }
}

}  // namespace

WeightedGraph VillageGraph::to_weighted_graph() const {
    return WeightedGraph::from_edges(n_nodes, edges);
}

double projection_distance(const std::vector<double>& point,
                           const std::vector<double>& own_centroid,
                           const std::vector<double>& other_centroid) {
    if (point.size() != own_centroid.size() || point.size() != other_centroid.size()) {
        throw std::invalid_argument("projection_distance: dimension mismatch");
    }
    double norm_sq = 0.0;
    for (std::size_t c = 0; c < point.size(); ++c) {
        const double diff = own_centroid[c] - other_centroid[c];
        norm_sq += diff * diff;
    }
    if (norm_sq <= 0.0) {
        throw std::invalid_argument("projection_distance: centroids coincide");
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    double dot = 0.0;
    for (std::size_t c = 0; c < point.size(); ++c) {
        const double mid = 0.5 * (own_centroid[c] + other_centroid[c]);
        dot += (point[c] - mid) * (own_centroid[c] - other_centroid[c]);
    }
    return dot * inv_norm;
}

std::vector<ExteriorSet> exterior_sets(const DataMatrix& data, const Partition& villages,
                                       const Centroids& centroids, int r) {
    check_build_inputs(data, villages, centroids, r);
    const std::size_t n = data.n_rows;
    const std::size_t d = data.n_cols;
    const int k = centroids.k;

    std::vector<ExteriorSet> result(static_cast<std::size_t>(k));
    parallel_chunks(static_cast<std::size_t>(k), 1, [&](std::size_t, std::size_t begin,
                                                        std::size_t end) {
        // Per-pair projection data toward village u: for a point in village
        // a, D = x . axis_a - offset_a where axis_a is the unit vector from
        // mu_u to mu_a and offset_a centers it on the bisector. Coincident
        // centroid pairs get a zero axis, scoring those points at 0 so the
        // two villages stay maximally connected.
        std::vector<double> axis(static_cast<std::size_t>(k) * d);
        std::vector<double> offset(static_cast<std::size_t>(k));
        std::vector<std::pair<double, int>> candidates;
        for (std::size_t u = begin; u < end; ++u) {
            for (int a = 0; a < k; ++a) {
                if (a == static_cast<int>(u)) {
                    continue;
                }
                double* ax = axis.data() + static_cast<std::size_t>(a) * d;
                const double* mu_a = centroids.center(a);
                const double* mu_u = centroids.center(static_cast<int>(u));
                double norm_sq = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    ax[c] = mu_a[c] - mu_u[c];
                    norm_sq += ax[c] * ax[c];
                }
                if (norm_sq <= 0.0) {
                    std::fill(ax, ax + d, 0.0);
                    offset[static_cast<std::size_t>(a)] = 0.0;
                    continue;
                }
                const double inv_norm = 1.0 / std::sqrt(norm_sq);
                double mid_dot = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    ax[c] *= inv_norm;
                    mid_dot += 0.5 * (mu_a[c] + mu_u[c]) * ax[c];
                }
                offset[static_cast<std::size_t>(a)] = mid_dot;
            }

            candidates.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const int a = villages.assignment[i];
                if (a == static_cast<int>(u)) {
                    continue;
                }
                const double* ax = axis.data() + static_cast<std::size_t>(a) * d;
                const double* x = data.values.data() + i * d;
                double dot = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    dot += x[c] * ax[c];
                }
                candidates.emplace_back(dot - offset[static_cast<std::size_t>(a)],
                                        static_cast<int>(i));
            }

            ExteriorSet& exterior = result[u];
            exterior.village = static_cast<int>(u);
            const std::size_t take =
                std::min(static_cast<std::size_t>(r), candidates.size());
            if (take > 0) {
                // Lexicographic (distance, index) order makes the threshold
                // tie-break "lowest point index" automatic.
                std::nth_element(candidates.begin(),
                                 candidates.begin() + static_cast<std::ptrdiff_t>(take) - 1,
                                 candidates.end());
                exterior.epsilon = candidates[take - 1].first;
                exterior.members.resize(take);
                for (std::size_t i = 0; i < take; ++i) {
                    exterior.members[i] = candidates[i].second;
                }
                std::sort(exterior.members.begin(), exterior.members.end());
            }
        }
    });
    return result;
}

VillageGraph build_graph(const DataMatrix& data, const Partition& villages,
                         const Centroids& centroids, int r) {
    const std::vector<ExteriorSet> exteriors = exterior_sets(data, villages, centroids, r);
    const int k = centroids.k;
    std::map<std::pair<int, int>, double> weight;
    for (const ExteriorSet& exterior : exteriors) {
        for (int i : exterior.members) {
            const int v = villages.assignment[static_cast<std::size_t>(i)];
            const std::pair<int, int> key =
                exterior.village < v ? std::make_pair(exterior.village, v)
                                     : std::make_pair(v, exterior.village);
            weight[key] += 1.0;
        }
    }
    VillageGraph graph;
    graph.n_nodes = k;
    graph.node_strengths.assign(static_cast<std::size_t>(k), 0.0);
    graph.edges.reserve(weight.size());
    for (const auto& [pair, w] : weight) {
        graph.edges.push_back({pair.first, pair.second, w});
        graph.node_strengths[static_cast<std::size_t>(pair.first)] += w;
        graph.node_strengths[static_cast<std::size_t>(pair.second)] += w;
    }
    return graph;
}

}  // namespace villagenet
