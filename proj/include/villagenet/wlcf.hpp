#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "villagenet/graph.hpp"
#include "villagenet/partition.hpp"
#include "villagenet/rng.hpp"

namespace villagenet {

struct WlcfParams {
    // Walk length ell. 0 selects it per connected component from the
    // component's relaxation time tau = 1/(1 - lambda2): long enough that
    // walks probe the slowest structure, short enough that they have not
    // fully crossed it. An explicit value applies to every component.
    int walk_length = 0;
    int max_outer = 50;
    double tol_accept = 1e-9;
    // Random balanced 2-colorings attempted per bifurcation proposal.
    int proposal_tries = 8;
    int refine_max_iter = 100;
};

// Community assignment over graph nodes plus the cached quantities the
// accept/reject loop needs.
struct CommunityState {
    Partition partition;
    std::vector<double> weighted_sizes;  // W_j = sum of member strengths
    double objective = 0.0;              // confinement score; see confinement_objective
    int walk_length = 0;                 // 0 when chosen adaptively per component
};

struct VisitStatistics {
    std::vector<double> expected_visits;  // n x m row-major: K_ij
    std::vector<double> time_inside;      // ell_j = sum over members of K_ij
    int n = 0;
    int m = 0;
};

// Walk lengths the objective and refinement field aggregate over: a
// geometric ladder {ell/4, ell/2, ell} (clipped to [1, ell], deduplicated)
// so that fine block structure and slow elongated structure are both
// visible whatever single scale would miss.
std::vector<int> scale_ladder(int walk_length);

// K_ij = sum_{t=1..ell} (s_j^T P^t)_i where s_j is community j's internal
// stationary start distribution s_j(i) = w_i [i in C_j] / W_j. Columns of
// communities with zero weighted size are zero. For every community with
// W_j > 0, sum_i K_ij = ell exactly (walk mass is conserved).
VisitStatistics visit_statistics(const WeightedGraph& graph, const Partition& partition,
                                 int walk_length);

// Global objective: for each ladder scale s and community j, walks started
// inside j spend an average fraction q_j of their s steps inside; the
// community scores s * pi_j * KL(Bernoulli(q_j) || Bernoulli(pi_j)) when it
// is better-confined than its stationary share pi_j = W_j / W_root, and 0
// otherwise. Summed over communities and ladder scales. A connected graph
// kept whole scores exactly 0; anti-confined communities cannot raise it.
double confinement_objective(const WeightedGraph& graph, const Partition& partition,
                             int walk_length);

// Signed per-node, per-community reassignment field summed over the same
// ladder. Row sums over a community recover the signed one-scale objective
// terms, so argmax reassignment climbs a signed relaxation of the
// objective; unlike the objective it is not clamped, so badly-confined
// communities actively repel members.
std::vector<double> confinement_field(const WeightedGraph& graph, const Partition& partition,
                                      int walk_length);

// Builds a consistent state (weighted sizes + objective) for a partition.
CommunityState make_state(const WeightedGraph& graph, Partition partition, int walk_length);

// Iterated argmax reassignment under the confinement field until stable or
// max_iter. Isolated nodes keep their community; emptied communities are
// dropped and ids compacted (ascending id order).
CommunityState wla_refine(const WeightedGraph& graph, CommunityState state, int max_iter = 100);

// Proposes splitting one community: several random balanced 2-colorings
// (plus the component split when the community is internally disconnected),
// each refined on the induced subgraph at every ladder scale, grafted,
// globally refined, and the best accepted iff the global objective improves
// by more than tol_accept. Returns nothing when every proposal is rejected.
std::optional<CommunityState> bifurcate(const WeightedGraph& graph, const CommunityState& state,
                                        int community, Rng& rng, const WlcfParams& params);

// Unions two communities, refines globally, accepts on strict improvement.
std::optional<CommunityState> merge(const WeightedGraph& graph, const CommunityState& state,
                                    int a, int b, const WlcfParams& params);

// Full community search: connected components are processed independently
// (walks never cross them); per component, alternating bifurcation sweeps
// (largest community first) and merge sweeps (heaviest connected pair
// first) until a full pass accepts nothing or max_outer is hit.
// Deterministic for a fixed seed.
CommunityState wlcf_run(const WeightedGraph& graph, std::uint64_t seed,
                        const WlcfParams& params = {});

}  // namespace villagenet
