#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "villagenet/data_io.hpp"
#include "villagenet/kmeans.hpp"
#include "villagenet/parallel.hpp"

using namespace villagenet;

namespace {

DataMatrix matrix_1d(const std::vector<double>& values) {
    DataMatrix data;
    data.values = values;
    data.n_rows = values.size();
    data.n_cols = 1;
    return data;
}

double exact_wcss(const DataMatrix& data, const KMeansResult& result) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        const double* mu = result.centroids.center(result.partition.assignment[i]);
        for (std::size_t c = 0; c < data.n_cols; ++c) {
            const double dev = data.at(i, c) - mu[c];
            total += dev * dev;
        }
    }
    return total;
}

// Global optimum for 1-D k=2 by enumerating every split point of the
// sorted values (1-D optima are contiguous in sorted order).
double best_two_cluster_wcss_1d(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t cut = 1; cut < values.size(); ++cut) {
        double wcss = 0.0;
        for (const auto& [lo, hi] : {std::pair<std::size_t, std::size_t>{0, cut},
                                     std::pair<std::size_t, std::size_t>{cut, values.size()}}) {
            double mean = 0.0;
            for (std::size_t i = lo; i < hi; ++i) mean += values[i];
            mean /= static_cast<double>(hi - lo);
            for (std::size_t i = lo; i < hi; ++i) {
                wcss += (values[i] - mean) * (values[i] - mean);
            }
        }
        best = std::min(best, wcss);
    }
    return best;
}

}  // namespace

TEST_CASE("fit_best reaches the enumerated 1-D optimum") {
    const std::vector<double> values{0.0, 2.0, 3.0, 9.0, 10.0};
    const DataMatrix data = matrix_1d(values);
    const KMeansResult result = fit_best(data, 2, 11, 100, 1e-9, 20);
    // optimum {0,2,3} | {9,10}: 14/3 + 1/2
    const double optimum = best_two_cluster_wcss_1d(values);
    CHECK(optimum == doctest::Approx(14.0 / 3.0 + 0.5).epsilon(1e-12));
    CHECK(result.wcss == doctest::Approx(optimum).epsilon(1e-9));
    CHECK(result.partition.assignment[0] == result.partition.assignment[1]);
    CHECK(result.partition.assignment[1] == result.partition.assignment[2]);
    CHECK(result.partition.assignment[3] == result.partition.assignment[4]);
    CHECK(result.partition.assignment[0] != result.partition.assignment[3]);
}

TEST_CASE("fit output is self-consistent on random data") {
    const DataMatrix data = make_two_moons(300, 0.1, 5);
    for (std::uint64_t seed : {0, 1, 2}) {
        const KMeansResult result = fit(data, 12, seed);
        CAPTURE(seed);
        REQUIRE(result.partition.m == 12);

        // reported WCSS is exactly the WCSS of the returned labeling
        CHECK(result.wcss == doctest::Approx(exact_wcss(data, result)).epsilon(1e-9));

        // centers are the means of their members
        std::vector<double> sums(12 * 2, 0.0);
        std::vector<std::size_t> counts(12, 0);
        for (std::size_t i = 0; i < data.n_rows; ++i) {
            const auto u = static_cast<std::size_t>(result.partition.assignment[i]);
            sums[u * 2] += data.at(i, 0);
            sums[u * 2 + 1] += data.at(i, 1);
            ++counts[u];
        }
        for (std::size_t u = 0; u < 12; ++u) {
            REQUIRE(counts[u] > 0);  // no empty villages survive
            CHECK(result.centroids.centers[u * 2] ==
                  doctest::Approx(sums[u * 2] / counts[u]).epsilon(1e-9));
            CHECK(result.centroids.centers[u * 2 + 1] ==
                  doctest::Approx(sums[u * 2 + 1] / counts[u]).epsilon(1e-9));
        }

        // every point sits with its nearest center
        for (std::size_t i = 0; i < data.n_rows; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_u = 0;
            for (int u = 0; u < 12; ++u) {
                const double dx = data.at(i, 0) - result.centroids.center(u)[0];
                const double dy = data.at(i, 1) - result.centroids.center(u)[1];
                const double dist = dx * dx + dy * dy;
                if (dist < best) {
                    best = dist;
                    best_u = u;
                }
            }
            const double dx = data.at(i, 0) - result.centroids.center(result.partition.assignment[i])[0];
            const double dy = data.at(i, 1) - result.centroids.center(result.partition.assignment[i])[1];
            CHECK(dx * dx + dy * dy <= best + 1e-9);
            CHECK(best_u <= result.partition.assignment[i]);  // ties go to the lowest index
        }
    }
}

TEST_CASE("WCSS history is non-increasing") {
    const DataMatrix data = make_two_moons(500, 0.08, 2);
    const KMeansResult result = fit(data, 15, 3);
    REQUIRE(result.wcss_history.size() >= 2);
    CHECK(static_cast<int>(result.wcss_history.size()) == result.iterations + 1);
    for (std::size_t i = 1; i < result.wcss_history.size(); ++i) {
        CHECK(result.wcss_history[i] <= result.wcss_history[i - 1] + 1e-9);
    }
}

TEST_CASE("assignment ties break toward the lowest center index") {
    DataMatrix data;
    data.values = {1.0, 5.0};  // exactly between the two centers
    data.n_rows = 1;
    data.n_cols = 2;
    Centroids centroids;
    centroids.k = 2;
    centroids.d = 2;
    centroids.centers = {0.0, 0.0, 2.0, 0.0};
    const Partition p = assign(data, centroids);
    CHECK(p.assignment[0] == 0);
}

TEST_CASE("fit is deterministic per seed and thread-count independent") {
    const DataMatrix data = make_two_moons(400, 0.06, 8);
    const KMeansResult a = fit(data, 10, 42);
    const KMeansResult b = fit(data, 10, 42);
    CHECK(a.partition.assignment == b.partition.assignment);
    CHECK(a.centroids.centers == b.centroids.centers);
    CHECK(a.wcss == b.wcss);

    set_max_threads(1);
    const KMeansResult serial = fit(data, 10, 42);
    set_max_threads(0);
    CHECK(serial.partition.assignment == a.partition.assignment);
    CHECK(serial.centroids.centers == a.centroids.centers);  // bit-identical, not approx
    CHECK(serial.wcss == a.wcss);
}

TEST_CASE("duplicate-heavy data still yields k non-empty villages") {
    std::vector<double> values;
    for (int rep = 0; rep < 3; ++rep) {
        for (int v = 0; v < 10; ++v) values.push_back(static_cast<double>(v));
    }
    const DataMatrix data = matrix_1d(values);
    for (std::uint64_t seed : {0, 1, 2, 3, 4}) {
        const KMeansResult result = fit(data, 5, seed);
        CAPTURE(seed);
        for (std::size_t size : result.partition.sizes) CHECK(size >= 1);
    }
}

TEST_CASE("init_random picks k distinct rows") {
    DataMatrix data;
    data.n_rows = 6;
    data.n_cols = 1;
    data.values = {0, 10, 20, 30, 40, 50};
    const Centroids centroids = init_random(data, 6, 9);
    std::vector<double> picked(centroids.centers);
    std::sort(picked.begin(), picked.end());
    CHECK(picked == data.values);  // k = n means every row appears once
}

TEST_CASE("fit_best keeps the lowest-WCSS restart") {
    const DataMatrix data = make_two_moons(200, 0.1, 4);
    const KMeansResult once = fit_best(data, 8, 7, 100, 1e-6, 1);
    const KMeansResult many = fit_best(data, 8, 7, 100, 1e-6, 12);
    CHECK(many.wcss <= once.wcss + 1e-9);
}

TEST_CASE("fit validates its arguments") {
    const DataMatrix data = matrix_1d({1, 2, 3});
    CHECK_THROWS_AS(fit(data, 4, 0), std::invalid_argument);   // k > N
    CHECK_THROWS_AS(fit(data, 2, 0, 0), std::invalid_argument);  // max_iter < 1
    CHECK_THROWS_AS(fit(data, 2, 0, 100, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_best(data, 2, 0, 100, 1e-6, 0), std::invalid_argument);
}
