#include "villagenet/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace villagenet {

namespace {

double entropy(const std::vector<std::size_t>& group_sizes, double n) {
    double h = 0.0;
    for (std::size_t size : group_sizes) {
        if (size == 0) continue;
        const double p = static_cast<double>(size) / n;
        h -= p * std::log(p);
    }
    return h;
}

double mutual_information(const ContingencyTable& table) {
    const double n = static_cast<double>(table.total);
    double info = 0.0;
    for (std::size_t i = 0; i < table.m1; ++i) {
        for (std::size_t j = 0; j < table.m2; ++j) {
            const std::size_t c = table.at(i, j);
            if (c == 0) continue;
            const double joint = static_cast<double>(c) / n;
            const double pi = static_cast<double>(table.row_sums[i]) / n;
            const double qj = static_cast<double>(table.col_sums[j]) / n;
            info += joint * std::log(joint / (pi * qj));
        }
    }
    return info;
}

double pairs_of(std::size_t count) {
    return 0.5 * static_cast<double>(count) * static_cast<double>(count ? count - 1 : 0);
}

}  // namespace

ContingencyTable contingency(const Partition& p, const Partition& q) {
    if (p.n_items() != q.n_items())
        throw std::invalid_argument("contingency: partitions cover different item counts");
    ContingencyTable table;
    table.m1 = static_cast<std::size_t>(p.m);
    table.m2 = static_cast<std::size_t>(q.m);
    table.total = p.n_items();
    table.counts.assign(table.m1 * table.m2, 0);
    table.row_sums.assign(table.m1, 0);
    table.col_sums.assign(table.m2, 0);
    for (std::size_t i = 0; i < p.n_items(); ++i) {
        const auto a = static_cast<std::size_t>(p.assignment[i]);
        const auto b = static_cast<std::size_t>(q.assignment[i]);
        ++table.counts[a * table.m2 + b];
        ++table.row_sums[a];
        ++table.col_sums[b];
    }
    return table;
}

static double nmi_impl(const Partition& p, const Partition& q, bool geometric) {
    const ContingencyTable table = contingency(p, q);
    const double n = static_cast<double>(table.total);
    const double hp = entropy(table.row_sums, n);
    const double hq = entropy(table.col_sums, n);
    if (hp == 0.0 && hq == 0.0) return 1.0;
    if (hp == 0.0 || hq == 0.0) return 0.0;
    const double denom = geometric ? std::sqrt(hp * hq) : 0.5 * (hp + hq);
    return mutual_information(table) / denom;
}

double nmi(const Partition& p, const Partition& q) { return nmi_impl(p, q, false); }

double nmi_geometric(const Partition& p, const Partition& q) { return nmi_impl(p, q, true); }

double ari(const Partition& p, const Partition& q) {
    if (p.n_items() < 2) throw std::invalid_argument("ari: need at least 2 items");
    const ContingencyTable table = contingency(p, q);

    double index = 0.0;
    for (std::size_t c : table.counts) index += pairs_of(c);
    double row_pairs = 0.0, col_pairs = 0.0;
    for (std::size_t a : table.row_sums) row_pairs += pairs_of(a);
    for (std::size_t b : table.col_sums) col_pairs += pairs_of(b);

    const double expected = row_pairs * col_pairs / pairs_of(table.total);
    const double maximum = 0.5 * (row_pairs + col_pairs);
    if (maximum == expected) return 1.0;  // both partitions trivial
    return (index - expected) / (maximum - expected);
}

double nmi(const std::vector<int>& p, const std::vector<int>& q) {
    return nmi(Partition::compacted(p), Partition::compacted(q));
}

double ari(const std::vector<int>& p, const std::vector<int>& q) {
    return ari(Partition::compacted(p), Partition::compacted(q));
}

}  // namespace villagenet
