#include "villagenet/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "villagenet/parallel.hpp"
#include "villagenet/rng.hpp"

namespace villagenet {

namespace {

constexpr std::size_t kAssignChunk = 4096;

std::vector<double> row_squared_norms(const DataMatrix& data) {
    std::vector<double> norms(data.n_rows);
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        const double* row = data.values.data() + i * data.n_cols;
        double s = 0.0;
        for (std::size_t c = 0; c < data.n_cols; ++c) s += row[c] * row[c];
        norms[i] = s;
    }
    return norms;
}

std::vector<double> center_squared_norms(const Centroids& centroids) {
    std::vector<double> norms(static_cast<std::size_t>(centroids.k));
    for (int u = 0; u < centroids.k; ++u) {
        const double* mu = centroids.center(u);
        double s = 0.0;
        for (std::size_t c = 0; c < centroids.d; ++c) s += mu[c] * mu[c];
        norms[static_cast<std::size_t>(u)] = s;
    }
    return norms;
}

// Assignment pass that also accumulates the per-point squared distance to
// the chosen center (clamped at zero against cancellation noise).
void assign_into(const DataMatrix& data, const Centroids& centroids,
                 const std::vector<double>& point_norms, std::vector<int>& out,
                 double* wcss_out) {
    const std::vector<double> mu_norms = center_squared_norms(centroids);
    const std::size_t d = data.n_cols;
    const int k = centroids.k;

    const std::size_t n_chunks = (data.n_rows + kAssignChunk - 1) / kAssignChunk;
    std::vector<double> chunk_wcss(n_chunks, 0.0);
    parallel_chunks(data.n_rows, kAssignChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        double local = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double* row = data.values.data() + i * d;
            double best = std::numeric_limits<double>::infinity();
            int best_u = 0;
            for (int u = 0; u < k; ++u) {
                const double* mu = centroids.center(u);
                double dot = 0.0;
                for (std::size_t c = 0; c < d; ++c) dot += row[c] * mu[c];
                const double dist = mu_norms[static_cast<std::size_t>(u)] - 2.0 * dot;
                if (dist < best) {  // strict: ties stay with the lowest index
                    best = dist;
                    best_u = u;
                }
            }
            out[i] = best_u;
            local += std::max(0.0, best + point_norms[i]);
        }
        chunk_wcss[chunk] = local;
    });
    if (wcss_out) {
        double total = 0.0;
        for (double w : chunk_wcss) total += w;  // fixed chunk order
        *wcss_out = total;
    }
}

// Mean of each village's members; villages with no members keep their old
// center and are reported for repair.
std::vector<int> update_centers(const DataMatrix& data, const std::vector<int>& assignment,
                                Centroids& centroids) {
    const std::size_t d = data.n_cols;
    const std::size_t k = static_cast<std::size_t>(centroids.k);

    const std::size_t n_chunks = (data.n_rows + kAssignChunk - 1) / kAssignChunk;
    std::vector<std::vector<double>> chunk_sums(n_chunks);
    std::vector<std::vector<std::size_t>> chunk_counts(n_chunks);
    parallel_chunks(data.n_rows, kAssignChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& sums = chunk_sums[chunk];
        auto& counts = chunk_counts[chunk];
        sums.assign(k * d, 0.0);
        counts.assign(k, 0);
        for (std::size_t i = begin; i < end; ++i) {
            const auto u = static_cast<std::size_t>(assignment[i]);
            const double* row = data.values.data() + i * d;
            double* sum = sums.data() + u * d;
            for (std::size_t c = 0; c < d; ++c) sum[c] += row[c];
            ++counts[u];
        }
    });

    std::vector<double> sums(k * d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {  // fixed chunk order
        for (std::size_t j = 0; j < k * d; ++j) sums[j] += chunk_sums[chunk][j];
        for (std::size_t u = 0; u < k; ++u) counts[u] += chunk_counts[chunk][u];
    }

    std::vector<int> empty;
    for (std::size_t u = 0; u < k; ++u) {
        if (counts[u] == 0) {
            empty.push_back(static_cast<int>(u));
            continue;
        }
        double* mu = centroids.center(static_cast<int>(u));
        const double inv = 1.0 / static_cast<double>(counts[u]);
        for (std::size_t c = 0; c < d; ++c) mu[c] = sums[u * d + c] * inv;
    }
    return empty;
}

// Re-seeds each emptied village at the point farthest from its own center,
// one distinct point per village, in village-index order.
void repair_empty(const DataMatrix& data, const std::vector<int>& assignment,
                  const std::vector<int>& empty, Centroids& centroids) {
    const std::size_t d = data.n_cols;
    std::vector<char> taken(data.n_rows, 0);
    for (int u : empty) {
        double worst = -1.0;
        std::size_t worst_i = 0;
        for (std::size_t i = 0; i < data.n_rows; ++i) {
            if (taken[i]) continue;
            const double* row = data.values.data() + i * d;
            const double* mu = centroids.center(assignment[i]);
            double dist = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double dev = row[c] - mu[c];
                dist += dev * dev;
            }
            if (dist > worst) {
                worst = dist;
                worst_i = i;
            }
        }
        taken[worst_i] = 1;
        const double* row = data.values.data() + worst_i * d;
        double* mu = centroids.center(u);
        for (std::size_t c = 0; c < d; ++c) mu[c] = row[c];
    }
}

// Exact within-cluster sum of squares for a fixed assignment/center pair.
double compute_wcss(const DataMatrix& data, const std::vector<int>& assignment,
                    const Centroids& centroids) {
    const std::size_t d = data.n_cols;
    double total = 0.0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        const double* row = data.values.data() + i * d;
        const double* mu = centroids.center(assignment[i]);
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = row[c] - mu[c];
            total += dev * dev;
        }
    }
    return total;
}

double feature_scale(const DataMatrix& data) {
    double total_variance = 0.0;
    const double n = static_cast<double>(data.n_rows);
    for (std::size_t c = 0; c < data.n_cols; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < data.n_rows; ++r) mean += data.at(r, c);
        mean /= n;
        double var = 0.0;
        for (std::size_t r = 0; r < data.n_rows; ++r) {
            const double dev = data.at(r, c) - mean;
            var += dev * dev;
        }
        total_variance += var / n;
    }
    return std::sqrt(total_variance / static_cast<double>(data.n_cols));
}

}  // namespace

Centroids init_random(const DataMatrix& data, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("init_random: k must be >= 1");
    if (static_cast<std::size_t>(k) > data.n_rows)
        throw std::invalid_argument("init_random: k exceeds the number of rows");

    Rng rng(seed);
    const auto rows = rng.sample_without_replacement(data.n_rows, static_cast<std::size_t>(k));

    Centroids centroids;
    centroids.k = k;
    centroids.d = data.n_cols;
    centroids.centers.resize(static_cast<std::size_t>(k) * data.n_cols);
    for (int u = 0; u < k; ++u) {
        const double* row = data.values.data() + rows[static_cast<std::size_t>(u)] * data.n_cols;
        std::copy(row, row + data.n_cols, centroids.center(u));
    }
    return centroids;
}

Partition assign(const DataMatrix& data, const Centroids& centroids) {
    if (centroids.k < 1) throw std::invalid_argument("assign: need at least one center");
    if (centroids.d != data.n_cols) throw std::invalid_argument("assign: dimension mismatch");
    std::vector<int> assignment(data.n_rows);
    const auto norms = row_squared_norms(data);
    assign_into(data, centroids, norms, assignment, nullptr);
    return Partition::from_assignment(std::move(assignment), centroids.k);
}

KMeansResult fit(const DataMatrix& data, int k, std::uint64_t seed, int max_iter, double tol) {
    if (max_iter < 1) throw std::invalid_argument("fit: max_iter must be >= 1");
    if (tol < 0) throw std::invalid_argument("fit: tol must be >= 0");

    KMeansResult result;
    result.centroids = init_random(data, k, seed);
    const std::size_t d = data.n_cols;
    const auto point_norms = row_squared_norms(data);
    const double move_threshold = tol * feature_scale(data);

    std::vector<int> assignment(data.n_rows);
    double wcss = 0.0;
    assign_into(data, result.centroids, point_norms, assignment, &wcss);
    result.wcss_history.push_back(wcss);

    std::vector<int> next(data.n_rows);
    std::vector<double> previous_centers;
    for (int iter = 0; iter < max_iter; ++iter) {
        previous_centers = result.centroids.centers;
        const auto empty = update_centers(data, assignment, result.centroids);
        if (!empty.empty()) repair_empty(data, assignment, empty, result.centroids);

        double displacement = 0.0;
        for (std::size_t u = 0; u < static_cast<std::size_t>(k); ++u) {
            double dist = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double dev = result.centroids.centers[u * d + c] - previous_centers[u * d + c];
                dist += dev * dev;
            }
            displacement = std::max(displacement, dist);
        }

        assign_into(data, result.centroids, point_norms, next, &wcss);
        result.wcss_history.push_back(wcss);
        result.iterations = iter + 1;

        const bool stable = std::equal(next.begin(), next.end(), assignment.begin());
        assignment.swap(next);
        if (stable || std::sqrt(displacement) < move_threshold) break;
    }

    // Make the returned centers exact means of the returned assignment,
    // whichever stop condition fired. Repairing an empty village forces one
    // more assignment pass so the repaired center owns its seed point.
    for (int round = 0; round < 3; ++round) {
        const auto empty = update_centers(data, assignment, result.centroids);
        if (empty.empty()) break;
        repair_empty(data, assignment, empty, result.centroids);
        assign_into(data, result.centroids, point_norms, assignment, nullptr);
    }
    result.wcss = compute_wcss(data, assignment, result.centroids);

    result.partition = Partition::from_assignment(std::move(assignment), k);
    return result;
}

KMeansResult fit_best(const DataMatrix& data, int k, std::uint64_t seed, int max_iter,
                      double tol, int restarts) {
    if (restarts < 1) throw std::invalid_argument("fit_best: restarts must be >= 1");
    Rng seeder(seed);
    KMeansResult best;
    bool have_best = false;
    for (int attempt = 0; attempt < restarts; ++attempt) {
        KMeansResult candidate = fit(data, k, seeder.next_u64(), max_iter, tol);
        if (!have_best || candidate.wcss < best.wcss) {
            best = std::move(candidate);
            have_best = true;
        }
    }
    return best;
}

}  // namespace villagenet
