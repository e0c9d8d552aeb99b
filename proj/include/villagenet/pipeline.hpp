#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "villagenet/data_io.hpp"
#include "villagenet/partition.hpp"
#include "villagenet/village_graph.hpp"

namespace villagenet {

struct VillageNetParams {
    int k = 15;                 // village count for the over-clustering stage
    int r = 20;                 // exterior size per village
    std::uint64_t seed = 0;
    int kmeans_max_iter = 100;
    double kmeans_tol = 1e-6;
    int restarts = 1;           // K-Means restarts, best WCSS kept
    int walk_length = 0;        // community-finder walk length; 0 = automatic
    int max_outer = 50;
    double tol_accept = 1e-9;
    int proposal_tries = 8;
    bool standardize = false;
};

struct StageTimings {
    double kmeans_seconds = 0.0;
    double graph_seconds = 0.0;
    double communities_seconds = 0.0;
    double total_seconds = 0.0;
};

struct ClusteringReport {
    Partition final_labels;              // cluster per data point
    Partition village_labels;            // village per data point
    std::vector<int> village_to_cluster; // length k
    VillageGraph network;                // the graph the communities were found on
    int m_predicted = 0;
    double kmeans_wcss = 0.0;
    StageTimings timings;
    VillageNetParams params_used;
    // Filled only when the dataset carries ground-truth labels; the
    // clustering path itself never reads them.
    std::optional<double> nmi_vs_truth;
    std::optional<double> ari_vs_truth;
    std::optional<double> worst_purity;
};

// End-to-end clustering: K-Means over-clustering into k villages, village
// network construction, community finding on the network, then each point
// inherits its village's community. Deterministic for fixed params.
ClusteringReport fit(const DataMatrix& data, const VillageNetParams& params);

// Majority-label fraction per village and the minimum across villages.
// worst >= 1 - eps certifies that the over-clustering only shattered
// ground-truth clusters (rather than straddling them) at tolerance eps.
std::pair<std::vector<double>, double> shattering_purity(const Partition& villages,
                                                         const std::vector<int>& labels);

}  // namespace villagenet
