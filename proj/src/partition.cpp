#include "villagenet/partition.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace villagenet {

Partition Partition::from_assignment(std::vector<int> assignment, int m) {
    Partition p;
    p.assignment = std::move(assignment);
    p.m = m;
    p.sizes.assign(static_cast<std::size_t>(m), 0);
    for (int g : p.assignment) {
        if (g < 0 || g >= m)
            throw std::invalid_argument("Partition: group id " + std::to_string(g) +
                                        " outside [0, " + std::to_string(m) + ")");
        ++p.sizes[static_cast<std::size_t>(g)];
    }
    return p;
}

Partition Partition::compacted(const std::vector<int>& raw) {
    std::unordered_map<int, int> remap;
    remap.reserve(raw.size());
    std::vector<int> dense(raw.size());
    int next_id = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(raw[i], next_id);
        if (inserted) ++next_id;
        dense[i] = it->second;
    }
    return from_assignment(std::move(dense), next_id);
}

void Partition::validate() const {
    if (static_cast<int>(sizes.size()) != m)
        throw std::invalid_argument("Partition: sizes length disagrees with m");
    std::vector<std::size_t> seen(static_cast<std::size_t>(m), 0);
    for (int g : assignment) {
        if (g < 0 || g >= m)
            throw std::invalid_argument("Partition: group id out of range");
        ++seen[static_cast<std::size_t>(g)];
    }
    for (int g = 0; g < m; ++g) {
        if (seen[static_cast<std::size_t>(g)] != sizes[static_cast<std::size_t>(g)])
            throw std::invalid_argument("Partition: sizes inconsistent with assignment");
    }
}

}  // namespace villagenet
