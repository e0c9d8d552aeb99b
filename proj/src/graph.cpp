#include "villagenet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace villagenet {

WeightedGraph WeightedGraph::from_edges(int n, const std::vector<WeightedEdge>& edges) {
    if (n < 0) throw std::invalid_argument("graph: negative node count");
    WeightedGraph g;
    g.n = n;

    // Expand to directed arcs (self-loops stored once), validating as we go.
    std::vector<WeightedEdge> arcs;
    arcs.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("graph: edge endpoint " + std::to_string(e.u) + "-" +
                                        std::to_string(e.v) + " outside [0, " + std::to_string(n) + ")");
        if (e.w < 0) throw std::invalid_argument("graph: negative edge weight");
        if (e.w == 0) continue;
        arcs.push_back({e.u, e.v, e.w});
        if (e.u != e.v) arcs.push_back({e.v, e.u, e.w});
    }
    std::sort(arcs.begin(), arcs.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    g.strengths.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i = 0; i < arcs.size();) {
        std::size_t j = i;
        double w = 0.0;
        while (j < arcs.size() && arcs[j].u == arcs[i].u && arcs[j].v == arcs[i].v) {
            w += arcs[j].w;
            ++j;
        }
        g.targets.push_back(arcs[i].v);
        g.weights.push_back(w);
        ++g.offsets[static_cast<std::size_t>(arcs[i].u) + 1];
        g.strengths[static_cast<std::size_t>(arcs[i].u)] += w;
        i = j;
    }
    for (std::size_t u = 0; u < static_cast<std::size_t>(n); ++u) g.offsets[u + 1] += g.offsets[u];

    for (double s : g.strengths) g.total_strength += s;
    g.root_strength = g.total_strength;
    return g;
}

void WeightedGraph::walk_step(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double s = strengths[static_cast<std::size_t>(i)];
        if (s <= 0.0 || x[static_cast<std::size_t>(i)] == 0.0) continue;
        const double scaled = x[static_cast<std::size_t>(i)] / s;
        for (std::size_t e = offsets[static_cast<std::size_t>(i)]; e < offsets[static_cast<std::size_t>(i) + 1]; ++e)
            y[static_cast<std::size_t>(targets[e])] += weights[e] * scaled;
    }
}

std::pair<int, std::vector<int>> connected_components(const WeightedGraph& graph) {
    std::vector<int> component(static_cast<std::size_t>(graph.n), -1);
    std::vector<int> queue;
    int count = 0;
    for (int start = 0; start < graph.n; ++start) {
        if (component[static_cast<std::size_t>(start)] >= 0) continue;
        component[static_cast<std::size_t>(start)] = count;
        queue.assign(1, start);
        while (!queue.empty()) {
            const int i = queue.back();
            queue.pop_back();
            for (std::size_t e = graph.offsets[static_cast<std::size_t>(i)];
                 e < graph.offsets[static_cast<std::size_t>(i) + 1]; ++e) {
                const int j = graph.targets[e];
                if (component[static_cast<std::size_t>(j)] < 0) {
                    component[static_cast<std::size_t>(j)] = count;
                    queue.push_back(j);
                }
            }
        }
        ++count;
    }
    return {count, std::move(component)};
}

WeightedGraph induced_subgraph(const WeightedGraph& graph, const std::vector<int>& nodes) {
    std::vector<int> local(static_cast<std::size_t>(graph.n), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);

    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int u = nodes[i];
        for (std::size_t e = graph.offsets[static_cast<std::size_t>(u)];
             e < graph.offsets[static_cast<std::size_t>(u) + 1]; ++e) {
            const int v = graph.targets[e];
            const int lv = local[static_cast<std::size_t>(v)];
            if (lv < 0) continue;
            if (v < u) continue;  // keep each undirected edge (and self-loop) once
            edges.push_back({static_cast<int>(i), lv, graph.weights[e]});
        }
    }
    WeightedGraph sub = WeightedGraph::from_edges(static_cast<int>(nodes.size()), edges);
    sub.root_strength = graph.root_strength;
    return sub;
}

double lambda2(const WeightedGraph& graph) {
    const auto n = static_cast<std::size_t>(graph.n);
    if (n < 2) return 0.0;

    std::vector<double> d(n), dd(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = std::sqrt(std::max(graph.strengths[i], 0.0));
        dd[i] = d[i] > 0.0 ? d[i] : 1.0;
        norm += d[i] * d[i];
    }
    if (norm <= 0.0) return 0.0;
    norm = std::sqrt(norm);
    std::vector<double> top(n);
    for (std::size_t i = 0; i < n; ++i) top[i] = d[i] / norm;

    std::vector<double> v(n), scaled(n), av(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(static_cast<double>(i) + 1.0);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += top[i] * v[i];
    for (std::size_t i = 0; i < n; ++i) v[i] -= top[i] * dot;

    double mu = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        // next = ((S + I)/2) v with S = D^-1/2 A D^-1/2
        for (std::size_t i = 0; i < n; ++i) scaled[i] = v[i] / dd[i];
        av.assign(n, 0.0);
        for (int i = 0; i < graph.n; ++i)
            for (std::size_t e = graph.offsets[static_cast<std::size_t>(i)];
                 e < graph.offsets[static_cast<std::size_t>(i) + 1]; ++e)
                av[static_cast<std::size_t>(i)] += graph.weights[e] * scaled[static_cast<std::size_t>(graph.targets[e])];
        double next_norm = 0.0, sign_dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) av[i] = 0.5 * (av[i] / dd[i] + v[i]);
        dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += top[i] * av[i];
        for (std::size_t i = 0; i < n; ++i) {
            av[i] -= top[i] * dot;
            next_norm += av[i] * av[i];
            sign_dot += av[i] * v[i];
        }
        next_norm = std::sqrt(next_norm);
        if (next_norm < 1e-15) return 0.0;
        mu = sign_dot >= 0.0 ? next_norm : -next_norm;
        for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / next_norm;
    }
    const double lam = 2.0 * mu - 1.0;
    return std::min(std::max(lam, 0.0), 1.0 - 1e-9);
}

}  // namespace villagenet
