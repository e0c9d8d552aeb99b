#include "villagenet/wlcf.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "villagenet/parallel.hpp"

namespace villagenet {

namespace {

// Adaptive walk length: ell = clamp(round(2 * tau), 8, 512) with
// tau = 1/(1 - lambda2) the component's relaxation time. Twice the
// relaxation time lets walks mix across genuine communities' interiors
// while still distinguishing them; the floor keeps the scale ladder
// meaningful on tiny graphs and the ceiling bounds cost on near-bipartite
// chains where tau blows up.
constexpr double kAdaptScale = 2.0;
constexpr int kAdaptMinWalk = 8;
constexpr int kAdaptMaxWalk = 512;

constexpr double kNearOne = 1.0 - 1e-12;

std::vector<double> community_weights(const WeightedGraph& graph, const Partition& partition) {
    std::vector<double> weights(static_cast<std::size_t>(partition.m), 0.0);
    for (int i = 0; i < graph.n; ++i) {
        weights[static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(i)])] +=
            graph.strengths[static_cast<std::size_t>(i)];
    }
    return weights;
}

// Dense re-labeling that keeps surviving ids in ascending order, so the
// lowest-id tie-break in the refinement argmax is stable across iterations.
int compact_ascending(std::vector<int>& assignment) {
    if (assignment.empty()) {
        return 0;
    }
    const int max_id = *std::max_element(assignment.begin(), assignment.end());
    std::vector<char> present(static_cast<std::size_t>(max_id) + 1, 0);
    for (int id : assignment) {
        present[static_cast<std::size_t>(id)] = 1;
    }
    std::vector<int> remap(static_cast<std::size_t>(max_id) + 1, -1);
    int next = 0;
    for (int id = 0; id <= max_id; ++id) {
        if (present[static_cast<std::size_t>(id)]) {
            remap[static_cast<std::size_t>(id)] = next++;
        }
    }
    for (int& id : assignment) {
        id = remap[static_cast<std::size_t>(id)];
    }
    return next;
}

// A state whose weighted sizes and objective are yet to be computed;
// wla_refine fills both, so internal callers skip make_state's extra
// objective evaluation.
CommunityState seed_state(Partition partition, int walk_length) {
    CommunityState state;
    state.partition = std::move(partition);
    state.walk_length = walk_length;
    return state;
}

// For each community with positive weighted size, runs walk_length steps of
// x <- P^T x from the community's internal stationary start and hands the
// running visit sums (sum over t so far of s_j^T P^t, as a full node
// vector) to on_rung each time t reaches a ladder scale. Communities are
// processed in parallel; on_rung must only write per-community slots.
void for_each_community_sweep(
    const WeightedGraph& graph, const Partition& partition,
    const std::vector<double>& weighted_sizes, const std::vector<int>& ladder,
    const std::function<void(int community, int scale, const std::vector<double>& visits)>&
        on_rung) {
    const std::size_t n = static_cast<std::size_t>(graph.n);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(partition.m));
    for (int i = 0; i < graph.n; ++i) {
        members[static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(i)])]
            .push_back(i);
    }
    parallel_chunks(static_cast<std::size_t>(partition.m), 1,
                    [&](std::size_t, std::size_t begin, std::size_t end) {
                        std::vector<double> x(n), next(n), visits(n);
                        for (std::size_t j = begin; j < end; ++j) {
                            const double weight = weighted_sizes[j];
                            if (weight <= 0.0) {
                                continue;
                            }
                            std::fill(x.begin(), x.end(), 0.0);
                            for (int i : members[j]) {
                                x[static_cast<std::size_t>(i)] =
                                    graph.strengths[static_cast<std::size_t>(i)] / weight;
                            }
                            std::fill(visits.begin(), visits.end(), 0.0);
                            std::size_t rung = 0;
                            const int deepest = ladder.back();
                            for (int t = 1; t <= deepest; ++t) {
                                graph.walk_step(x, next);
                                x.swap(next);
                                for (std::size_t i = 0; i < n; ++i) {
                                    visits[i] += x[i];
                                }
                                if (t == ladder[rung]) {
                                    on_rung(static_cast<int>(j), t, visits);
                                    if (++rung == ladder.size()) {
                                        break;
                                    }
                                }
                            }
                        }
                    });
}

double time_inside(const std::vector<int>& members, const std::vector<double>& visits) {
    double total = 0.0;
    for (int i : members) {
        total += visits[static_cast<std::size_t>(i)];
    }
    return total;
}

std::vector<std::vector<int>> members_by_community(const Partition& partition) {
    std::vector<std::vector<int>> members(static_cast<std::size_t>(partition.m));
    for (std::size_t i = 0; i < partition.assignment.size(); ++i) {
        members[static_cast<std::size_t>(partition.assignment[i])].push_back(static_cast<int>(i));
    }
    return members;
}

void check_inputs(const WeightedGraph& graph, const Partition& partition, int walk_length,
                  const char* where) {
    if (partition.n_items() != static_cast<std::size_t>(graph.n)) {
        throw std::invalid_argument(std::string(where) + ": partition covers " +
                                    std::to_string(partition.n_items()) + " items but graph has " +
                                    std::to_string(graph.n) + " nodes");
    }
    if (walk_length < 1) {
        throw std::invalid_argument(std::string(where) + ": walk length must be >= 1, got " +
                                    std::to_string(walk_length));
    }
}

}  // namespace

std::vector<int> scale_ladder(int walk_length) {
    if (walk_length < 1) {
        throw std::invalid_argument("scale_ladder: walk length must be >= 1, got " +
                                    std::to_string(walk_length));
    }
    std::set<int> rungs{walk_length};
    for (int divisor : {4, 2}) {
        const int scale = std::max(2, walk_length / divisor);
        if (scale <= walk_length) {
            rungs.insert(scale);
        }
    }
    return {rungs.begin(), rungs.end()};
}

VisitStatistics visit_statistics(const WeightedGraph& graph, const Partition& partition,
                                 int walk_length) {
    check_inputs(graph, partition, walk_length, "visit_statistics");
    VisitStatistics stats;
    stats.n = graph.n;
    stats.m = partition.m;
    stats.expected_visits.assign(static_cast<std::size_t>(graph.n) *
                                     static_cast<std::size_t>(partition.m),
                                 0.0);
    stats.time_inside.assign(static_cast<std::size_t>(partition.m), 0.0);
    const std::vector<double> weights = community_weights(graph, partition);
    const std::vector<std::vector<int>> members = members_by_community(partition);
    for_each_community_sweep(
        graph, partition, weights, {walk_length},
        [&](int community, int, const std::vector<double>& visits) {
            for (int i = 0; i < graph.n; ++i) {
                stats.expected_visits[static_cast<std::size_t>(i) *
                                          static_cast<std::size_t>(partition.m) +
                                      static_cast<std::size_t>(community)] =
                    visits[static_cast<std::size_t>(i)];
            }
            stats.time_inside[static_cast<std::size_t>(community)] =
                time_inside(members[static_cast<std::size_t>(community)], visits);
        });
    return stats;
}

double confinement_objective(const WeightedGraph& graph, const Partition& partition,
                             int walk_length) {
    check_inputs(graph, partition, walk_length, "confinement_objective");
    const std::vector<double> weights = community_weights(graph, partition);
    const std::vector<std::vector<int>> members = members_by_community(partition);
    const std::vector<int> ladder = scale_ladder(walk_length);
    // One slot per community: each is written only by that community's sweep.
    std::vector<double> contributions(static_cast<std::size_t>(partition.m), 0.0);
    for_each_community_sweep(
        graph, partition, weights, ladder,
        [&](int community, int scale, const std::vector<double>& visits) {
            const std::size_t j = static_cast<std::size_t>(community);
            // Both are fractions of a conserved total; clamping strips the
            // rounding drift that would otherwise leave a whole connected
            // graph scoring an ulp above zero.
            const double pi = std::min(weights[j] / graph.root_strength, 1.0);
            const double q = std::min(time_inside(members[j], visits) / scale, 1.0);
            if (q <= pi) {
                return;  // one-sided: only better-than-stationary confinement scores
            }
            double kl = q * std::log(q / pi);
            if (q < kNearOne) {
                kl += (1.0 - q) * std::log((1.0 - q) / (1.0 - pi));
            }
            contributions[j] += scale * pi * kl;
        });
    return std::accumulate(contributions.begin(), contributions.end(), 0.0);
}

std::vector<double> confinement_field(const WeightedGraph& graph, const Partition& partition,
                                      int walk_length) {
    check_inputs(graph, partition, walk_length, "confinement_field");
    const std::size_t n = static_cast<std::size_t>(graph.n);
    const std::size_t m = static_cast<std::size_t>(partition.m);
    const std::vector<double> weights = community_weights(graph, partition);
    const std::vector<std::vector<int>> members = members_by_community(partition);
    const std::vector<int> ladder = scale_ladder(walk_length);
    std::vector<double> field(n * m, 0.0);
    for_each_community_sweep(
        graph, partition, weights, ladder,
        [&](int community, int scale, const std::vector<double>& visits) {
            const std::size_t j = static_cast<std::size_t>(community);
            const double pi = std::min(weights[j] / graph.root_strength, 1.0);
            const double inside = std::min(time_inside(members[j], visits),
                                           static_cast<double>(scale));
            const double q = inside / scale;
            // Visit-weighted term: rewards (or penalizes, when q < pi) time
            // a node's walks would spend inside community j.
            const double visit_gain = q > 0.0 ? std::log(q / pi) : 0.0;
            // Complement term: the walk mass spent outside, attributed to
            // nodes by stationary share.
            double outside_gain = 0.0;
            if (q < kNearOne && pi < kNearOne) {
                outside_gain = (scale - inside) * std::log((1.0 - q) / (1.0 - pi));
            }
            for (std::size_t i = 0; i < n; ++i) {
                field[i * m + j] += pi * visit_gain * visits[i] +
                                    graph.strengths[i] / graph.root_strength * outside_gain;
            }
        });
    return field;
}

CommunityState make_state(const WeightedGraph& graph, Partition partition, int walk_length) {
    check_inputs(graph, partition, walk_length, "make_state");
    CommunityState state;
    state.partition = std::move(partition);
    state.weighted_sizes = community_weights(graph, state.partition);
    state.objective = confinement_objective(graph, state.partition, walk_length);
    state.walk_length = walk_length;
    return state;
}

CommunityState wla_refine(const WeightedGraph& graph, CommunityState state, int max_iter) {
    check_inputs(graph, state.partition, state.walk_length, "wla_refine");
    const int n = graph.n;
    for (int iter = 0; iter < max_iter && state.partition.m > 1; ++iter) {
        const std::size_t m = static_cast<std::size_t>(state.partition.m);
        const std::vector<double> field =
            confinement_field(graph, state.partition, state.walk_length);
        std::vector<int> next(static_cast<std::size_t>(n));
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const std::size_t row = static_cast<std::size_t>(i) * m;
            if (graph.strengths[static_cast<std::size_t>(i)] <= 0.0) {
                // Isolated nodes see a zero field everywhere; leave them put.
                next[static_cast<std::size_t>(i)] =
                    state.partition.assignment[static_cast<std::size_t>(i)];
                continue;
            }
            std::size_t best = 0;
            for (std::size_t j = 1; j < m; ++j) {
                if (field[row + j] > field[row + best]) {
                    best = j;
                }
            }
            next[static_cast<std::size_t>(i)] = static_cast<int>(best);
            changed = changed ||
                      next[static_cast<std::size_t>(i)] !=
                          state.partition.assignment[static_cast<std::size_t>(i)];
        }
        if (!changed) {
            break;
        }
        const int next_m = compact_ascending(next);
        state.partition = Partition::from_assignment(std::move(next), next_m);
    }
    state.weighted_sizes = community_weights(graph, state.partition);
    state.objective = confinement_objective(graph, state.partition, state.walk_length);
    return state;
}

std::optional<CommunityState> bifurcate(const WeightedGraph& graph, const CommunityState& state,
                                        int community, Rng& rng, const WlcfParams& params) {
    check_inputs(graph, state.partition, state.walk_length, "bifurcate");
    if (community < 0 || community >= state.partition.m) {
        throw std::invalid_argument("bifurcate: community " + std::to_string(community) +
                                    " out of range [0, " + std::to_string(state.partition.m) +
                                    ")");
    }
    std::vector<int> members;
    for (int i = 0; i < graph.n; ++i) {
        if (state.partition.assignment[static_cast<std::size_t>(i)] == community) {
            members.push_back(i);
        }
    }
    const std::size_t size = members.size();
    if (size < 2) {
        return std::nullopt;
    }
    const WeightedGraph sub = induced_subgraph(graph, members);

    std::vector<std::vector<int>> inits;
    const auto [n_comp, comp] = connected_components(sub);
    if (n_comp > 1) {
        // Internally disconnected community: peel everything off the first
        // component's side. This split needs no luck to find.
        std::vector<int> init(size);
        for (std::size_t i = 0; i < size; ++i) {
            init[i] = comp[i] == comp[0] ? 0 : 1;
        }
        inits.push_back(std::move(init));
    }
    for (int attempt = 0; attempt < params.proposal_tries; ++attempt) {
        std::vector<int> order(size);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        std::vector<int> init(size, 0);
        for (std::size_t i = 0; i < size / 2; ++i) {
            init[static_cast<std::size_t>(order[i])] = 1;
        }
        inits.push_back(std::move(init));
    }

    // Refine each seed on the subgraph at every ladder scale: short walks
    // settle fine splits, long walks settle elongated ones.
    std::vector<std::vector<int>> splits;
    std::set<std::vector<int>> seen;
    for (const std::vector<int>& init : inits) {
        for (int scale : scale_ladder(state.walk_length)) {
            const CommunityState refined = wla_refine(
                sub, seed_state(Partition::from_assignment(init, 2), scale),
                params.refine_max_iter);
            if (refined.partition.m != 2) {
                continue;
            }
            std::vector<int> canonical = refined.partition.assignment;
            if (canonical[0] == 1) {
                for (int& side : canonical) {
                    side = 1 - side;
                }
            }
            if (seen.insert(canonical).second) {
                splits.push_back(std::move(canonical));
            }
        }
    }

    const double old_objective =
        confinement_objective(graph, state.partition, state.walk_length);
    std::optional<CommunityState> best;
    for (const std::vector<int>& split : splits) {
        std::vector<int> trial = state.partition.assignment;
        for (std::size_t i = 0; i < size; ++i) {
            if (split[i] == 1) {
                trial[static_cast<std::size_t>(members[i])] = state.partition.m;
            }
        }
        const int trial_m = compact_ascending(trial);
        CommunityState candidate =
            wla_refine(graph, seed_state(Partition::from_assignment(std::move(trial), trial_m),
                                         state.walk_length),
                       params.refine_max_iter);
        if (candidate.objective > old_objective + params.tol_accept &&
            (!best || candidate.objective > best->objective)) {
            best = std::move(candidate);
        }
    }
    return best;
}

std::optional<CommunityState> merge(const WeightedGraph& graph, const CommunityState& state,
                                    int a, int b, const WlcfParams& params) {
    check_inputs(graph, state.partition, state.walk_length, "merge");
    if (a == b || a < 0 || b < 0 || a >= state.partition.m || b >= state.partition.m) {
        throw std::invalid_argument("merge: invalid community pair (" + std::to_string(a) + ", " +
                                    std::to_string(b) + ") for m = " +
                                    std::to_string(state.partition.m));
    }
    std::vector<int> trial = state.partition.assignment;
    for (int& id : trial) {
        if (id == b) {
            id = a;
        }
    }
    const int trial_m = compact_ascending(trial);
    const double old_objective =
        confinement_objective(graph, state.partition, state.walk_length);
    CommunityState candidate = wla_refine(
        graph,
        seed_state(Partition::from_assignment(std::move(trial), trial_m), state.walk_length),
        params.refine_max_iter);
    if (candidate.objective > old_objective + params.tol_accept) {
        return candidate;
    }
    return std::nullopt;
}

namespace {

// Accumulated edge weight between every connected pair of communities,
// ordered heaviest first (ties by ascending pair).
std::vector<std::pair<std::pair<int, int>, double>> community_pair_weights(
    const WeightedGraph& graph, const Partition& partition) {
    std::map<std::pair<int, int>, double> weights;
    for (int i = 0; i < graph.n; ++i) {
        const int a = partition.assignment[static_cast<std::size_t>(i)];
        for (std::size_t arc = graph.offsets[static_cast<std::size_t>(i)];
             arc < graph.offsets[static_cast<std::size_t>(i) + 1]; ++arc) {
            const int b = partition.assignment[static_cast<std::size_t>(graph.targets[arc])];
            if (a < b) {  // counts each undirected edge exactly once
                weights[{a, b}] += graph.weights[arc];
            }
        }
    }
    std::vector<std::pair<std::pair<int, int>, double>> ordered(weights.begin(), weights.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& lhs, const auto& rhs) {
        if (lhs.second != rhs.second) {
            return lhs.second > rhs.second;
        }
        return lhs.first < rhs.first;
    });
    return ordered;
}

CommunityState wlcf_component(const WeightedGraph& graph, int walk_length, Rng& rng,
                              const WlcfParams& params) {
    CommunityState state = wla_refine(
        graph,
        seed_state(Partition::from_assignment(std::vector<int>(static_cast<std::size_t>(graph.n), 0), 1),
                   walk_length),
        params.refine_max_iter);
    for (int outer = 0; outer < params.max_outer; ++outer) {
        bool accepted = false;
        // Bifurcation sweep, largest community first; restart after every
        // accepted split so the new halves are immediately candidates.
        while (true) {
            std::vector<int> order(static_cast<std::size_t>(state.partition.m));
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
                const std::size_t ls = state.partition.sizes[static_cast<std::size_t>(lhs)];
                const std::size_t rs = state.partition.sizes[static_cast<std::size_t>(rhs)];
                if (ls != rs) {
                    return ls > rs;
                }
                return lhs < rhs;
            });
            bool split_accepted = false;
            for (int community : order) {
                if (state.partition.sizes[static_cast<std::size_t>(community)] < 2) {
                    continue;
                }
                if (auto result = bifurcate(graph, state, community, rng, params)) {
                    state = std::move(*result);
                    split_accepted = true;
                    accepted = true;
                    break;
                }
            }
            if (!split_accepted) {
                break;
            }
        }
        // Merge sweep, heaviest connected pair first; restart after every
        // accepted merge since community ids and weights change.
        while (state.partition.m > 1) {
            bool merge_accepted = false;
            for (const auto& [pair, weight] : community_pair_weights(graph, state.partition)) {
                if (auto result = merge(graph, state, pair.first, pair.second, params)) {
                    state = std::move(*result);
                    merge_accepted = true;
                    accepted = true;
                    break;
                }
            }
            if (!merge_accepted) {
                break;
            }
        }
        if (!accepted) {
            break;
        }
    }
    return state;
}

}  // namespace

CommunityState wlcf_run(const WeightedGraph& graph, std::uint64_t seed,
                        const WlcfParams& params) {
    if (params.walk_length < 0) {
        throw std::invalid_argument("wlcf_run: walk_length must be >= 0 (0 = automatic), got " +
                                    std::to_string(params.walk_length));
    }
    if (params.max_outer < 1) {
        throw std::invalid_argument("wlcf_run: max_outer must be >= 1, got " +
                                    std::to_string(params.max_outer));
    }
    if (params.proposal_tries < 0) {
        throw std::invalid_argument("wlcf_run: proposal_tries must be >= 0, got " +
                                    std::to_string(params.proposal_tries));
    }
    Rng rng(seed);
    const auto [n_comp, comp] = connected_components(graph);
    std::vector<int> global(static_cast<std::size_t>(graph.n), -1);
    int next_id = 0;
    double objective = 0.0;
    for (int c = 0; c < n_comp; ++c) {
        std::vector<int> members;
        for (int i = 0; i < graph.n; ++i) {
            if (comp[static_cast<std::size_t>(i)] == c) {
                members.push_back(i);
            }
        }
        if (members.size() == 1) {
            global[static_cast<std::size_t>(members[0])] = next_id++;
            continue;
        }
        const WeightedGraph sub = induced_subgraph(graph, members);
        int walk_length = params.walk_length;
        if (walk_length == 0) {
            const double tau = 1.0 / (1.0 - lambda2(sub));
            walk_length = static_cast<int>(std::clamp<long long>(
                std::llround(kAdaptScale * tau), kAdaptMinWalk, kAdaptMaxWalk));
        }
        const CommunityState component_state = wlcf_component(sub, walk_length, rng, params);
        for (std::size_t i = 0; i < members.size(); ++i) {
            global[static_cast<std::size_t>(members[i])] =
                next_id + component_state.partition.assignment[i];
        }
        next_id += component_state.partition.m;
        objective += component_state.objective;
    }
    CommunityState result;
    result.partition = Partition::from_assignment(std::move(global), next_id);
    result.weighted_sizes = community_weights(graph, result.partition);
    result.objective = objective;
    result.walk_length = params.walk_length;
    return result;
}

}  // namespace villagenet
