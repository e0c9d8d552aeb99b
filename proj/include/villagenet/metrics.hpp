#pragma once

#include <cstddef>
#include <vector>

#include "villagenet/partition.hpp"

namespace villagenet {

// Joint label-count table both agreement metrics factor through.
struct ContingencyTable {
    std::vector<std::size_t> counts;  // m1 * m2, row-major
    std::size_t m1 = 0, m2 = 0;
    std::vector<std::size_t> row_sums;
    std::vector<std::size_t> col_sums;
    std::size_t total = 0;

    std::size_t at(std::size_t i, std::size_t j) const { return counts[i * m2 + j]; }
};

ContingencyTable contingency(const Partition& p, const Partition& q);

// Normalized mutual information with arithmetic-mean normalization and
// natural logs. Both partitions trivial -> 1; exactly one trivial -> 0.
double nmi(const Partition& p, const Partition& q);

// Same mutual information normalized by the geometric mean of the
// entropies; reported alongside nmi in benchmarks because published
// scores do not always state which normalization they used.
double nmi_geometric(const Partition& p, const Partition& q);

// Adjusted Rand index; returns 1 when both partitions are trivial
// (expected index equals maximum index). Requires N >= 2.
double ari(const Partition& p, const Partition& q);

// Convenience overloads for raw label arrays (ids need not be dense).
double nmi(const std::vector<int>& p, const std::vector<int>& q);
double ari(const std::vector<int>& p, const std::vector<int>& q);

}  // namespace villagenet
