#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace villagenet {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    double w = 0.0;
};

// Undirected weighted graph in compressed sparse row form. Random-walk
// confinement is always measured against the stationary share of the graph
// the run started from, so induced subgraphs carry the original total
// strength along in root_strength.
struct WeightedGraph {
    int n = 0;
    std::vector<std::size_t> offsets;  // n + 1
    std::vector<int> targets;
    std::vector<double> weights;
    std::vector<double> strengths;     // w_i = sum_j w_ij
    double total_strength = 0.0;       // W = sum_i w_i
    double root_strength = 0.0;        // W of the graph this one was cut from

    // Builds from an edge list; parallel edges accumulate, zero-weight
    // edges are dropped, negative weights are rejected.
    static WeightedGraph from_edges(int n, const std::vector<WeightedEdge>& edges);

    bool is_isolated(int i) const { return strengths[static_cast<std::size_t>(i)] <= 0.0; }

    // y = P^T x where P is the row-stochastic transition matrix; rows of
    // zero strength emit nothing.
    void walk_step(const std::vector<double>& x, std::vector<double>& y) const;
};

// Component count and per-node component id (by BFS order of lowest node).
std::pair<int, std::vector<int>> connected_components(const WeightedGraph& graph);

// Induced subgraph on the given nodes (local ids follow the list order);
// inherits root_strength.
WeightedGraph induced_subgraph(const WeightedGraph& graph, const std::vector<int>& nodes);

// Second-largest eigenvalue of the transition matrix, clamped to
// [0, 1). Fixed-length power iteration on the shifted symmetrized walk
// operator (S + I)/2 with the known stationary mode deflated; the shift
// keeps oscillatory (negative) modes from dominating, and the fixed
// iteration count with a fixed start vector makes the estimate
// deterministic.
double lambda2(const WeightedGraph& graph);

}  // namespace villagenet
