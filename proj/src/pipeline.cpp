#include "villagenet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include "villagenet/kmeans.hpp"
#include "villagenet/metrics.hpp"
#include "villagenet/village_graph.hpp"
#include "villagenet/wlcf.hpp"

namespace villagenet {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_params(const DataMatrix& data, const VillageNetParams& params) {
    if (data.n_rows == 0 || data.n_cols == 0) {
        throw std::invalid_argument("fit: dataset is empty");
    }
    if (params.k < 2) {
        throw std::invalid_argument("fit: k must be >= 2 (one village cannot form a network), got " +
                                    std::to_string(params.k));
    }
    if (static_cast<std::size_t>(params.k) > data.n_rows) {
        throw std::invalid_argument("fit: k = " + std::to_string(params.k) +
                                    " exceeds the number of data points (" +
                                    std::to_string(data.n_rows) + ")");
    }
    if (params.r < 1) {
        throw std::invalid_argument("fit: r must be >= 1, got " + std::to_string(params.r));
    }
    if (params.kmeans_tol < 0.0 || params.tol_accept < 0.0) {
        throw std::invalid_argument("fit: tolerances must be >= 0");
    }
    if (params.restarts < 1) {
        throw std::invalid_argument("fit: restarts must be >= 1, got " +
                                    std::to_string(params.restarts));
    }
    if (static_cast<std::size_t>(params.k) > data.n_rows / 2) {
        std::cerr << "warning: k = " << params.k << " leaves fewer than 2 points per village on "
                  << "average (N = " << data.n_rows << "); villages may be too small to be "
                  << "meaningful\n";
    }
}

}  // namespace

ClusteringReport fit(const DataMatrix& data, const VillageNetParams& params) {
    check_params(data, params);
    const auto t_start = std::chrono::steady_clock::now();

    const DataMatrix* working = &data;
    DataMatrix standardized;
    if (params.standardize) {
        standardized = standardize(data);
        working = &standardized;
    }

    ClusteringReport report;
    report.params_used = params;

    auto t_stage = std::chrono::steady_clock::now();
    KMeansResult km = fit_best(*working, params.k, params.seed, params.kmeans_max_iter,
                               params.kmeans_tol, params.restarts);
    report.timings.kmeans_seconds = seconds_since(t_stage);
    report.kmeans_wcss = km.wcss;

    t_stage = std::chrono::steady_clock::now();
    report.network = build_graph(*working, km.partition, km.centroids, params.r);
    report.timings.graph_seconds = seconds_since(t_stage);

    t_stage = std::chrono::steady_clock::now();
    WlcfParams community_params;
    community_params.walk_length = params.walk_length;
    community_params.max_outer = params.max_outer;
    community_params.tol_accept = params.tol_accept;
    community_params.proposal_tries = params.proposal_tries;
    const CommunityState communities =
        wlcf_run(report.network.to_weighted_graph(), params.seed, community_params);
    report.timings.communities_seconds = seconds_since(t_stage);

    // Amalgamation: each point inherits its village's community, so the
    // final clustering is disjoint by construction.
    report.village_to_cluster = communities.partition.assignment;
    std::vector<int> final_labels(data.n_rows);
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        final_labels[i] = report.village_to_cluster[static_cast<std::size_t>(
            km.partition.assignment[i])];
    }
    report.final_labels = Partition::from_assignment(std::move(final_labels),
                                                     communities.partition.m);
    report.village_labels = std::move(km.partition);
    report.m_predicted = report.final_labels.m;

    if (data.has_labels()) {
        report.nmi_vs_truth = nmi(report.final_labels.assignment, data.labels);
        report.ari_vs_truth = ari(report.final_labels.assignment, data.labels);
        report.worst_purity = shattering_purity(report.village_labels, data.labels).second;
    }
    report.timings.total_seconds = seconds_since(t_start);
    return report;
}

std::pair<std::vector<double>, double> shattering_purity(const Partition& villages,
                                                         const std::vector<int>& labels) {
    if (labels.size() != villages.n_items()) {
        throw std::invalid_argument("shattering_purity: " + std::to_string(labels.size()) +
                                    " labels for " + std::to_string(villages.n_items()) +
                                    " clustered points");
    }
    std::vector<std::map<int, std::size_t>> counts(static_cast<std::size_t>(villages.m));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        counts[static_cast<std::size_t>(villages.assignment[i])][labels[i]] += 1;
    }
    std::vector<double> purity(static_cast<std::size_t>(villages.m), 0.0);
    double worst = 1.0;
    for (std::size_t u = 0; u < counts.size(); ++u) {
        std::size_t majority = 0;
        std::size_t total = 0;
        for (const auto& [label, count] : counts[u]) {
            majority = std::max(majority, count);
            total += count;
        }
        purity[u] = total > 0 ? static_cast<double>(majority) / static_cast<double>(total) : 1.0;
        worst = std::min(worst, purity[u]);
    }
    return {std::move(purity), worst};
}

}  // namespace villagenet
