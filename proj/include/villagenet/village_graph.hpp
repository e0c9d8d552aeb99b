#pragma once

#include <vector>

#include "villagenet/data_io.hpp"
#include "villagenet/graph.hpp"
#include "villagenet/kmeans.hpp"
#include "villagenet/partition.hpp"

namespace villagenet {

// The r points outside village U that project closest to it, plus the
// selection threshold that admitted them.
struct ExteriorSet {
    int village = 0;
    std::vector<int> members;  // ascending point ids, none belonging to village
    double epsilon = 0.0;      // largest projection distance among members
};

// Weighted network over villages: nodes are villages, edge weights count
// exterior memberships between each pair. Symmetric, integer-valued, no
// self-loops, zero-weight pairs absent.
struct VillageGraph {
    int n_nodes = 0;
    std::vector<WeightedEdge> edges;  // u < v, sorted by (u, v), weights >= 1
    std::vector<double> node_strengths;

    // CSR form for the community finder.
    WeightedGraph to_weighted_graph() const;
};

// Signed distance from `point` to the perpendicular bisector hyperplane
// between the two centroids, positive on the own-centroid side:
// (x - (mu_own + mu_other)/2) . (mu_own - mu_other) / |mu_own - mu_other|.
// Nearest-centroid-assigned points therefore score >= 0 toward every other
// centroid. Throws std::invalid_argument on coincident centroids.
double projection_distance(const std::vector<double>& point,
                           const std::vector<double>& own_centroid,
                           const std::vector<double>& other_centroid);

// For each village U, selects the min(r, N - |U|) outside points with the
// smallest projection distance toward U (ties at the threshold broken by
// lowest point index). Villages whose centroids coincide see each other's
// points as candidates at distance zero. Villages are processed in
// parallel; output order is by village id.
std::vector<ExteriorSet> exterior_sets(const DataMatrix& data, const Partition& villages,
                                       const Centroids& centroids, int r);

// Builds the village network: A_UV = (exterior members of U lying in V) +
// (exterior members of V lying in U). Every exterior membership lands in
// exactly one unordered pair, so total edge weight equals total exterior
// membership count.
VillageGraph build_graph(const DataMatrix& data, const Partition& villages,
                         const Centroids& centroids, int r);

}  // namespace villagenet
