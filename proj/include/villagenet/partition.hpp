#pragma once

#include <cstddef>
#include <vector>

namespace villagenet {

// Disjoint assignment of N items into m groups, used for villages,
// communities, and final clusters alike. Group ids are dense in [0, m).
struct Partition {
    std::vector<int> assignment;
    int m = 0;
    std::vector<std::size_t> sizes;

    // Builds a Partition from a raw assignment whose ids are already dense.
    static Partition from_assignment(std::vector<int> assignment, int m);

    // Re-indexes arbitrary group ids to 0..m-1 preserving order of first
    // appearance, then recomputes sizes. Drops empty groups.
    static Partition compacted(const std::vector<int>& raw);

    std::size_t n_items() const { return assignment.size(); }

    // Throws std::invalid_argument when ids are out of range or sizes are
    // inconsistent with the assignment.
    void validate() const;
};

}  // namespace villagenet
