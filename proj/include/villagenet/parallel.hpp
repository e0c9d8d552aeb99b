#pragma once

#include <cstddef>
#include <functional>

namespace villagenet {

// Current thread cap (>= 1). Defaults to the hardware concurrency, or the
// VILLAGENET_THREADS environment variable when set.
int max_threads();

// Caps worker threads; 0 restores the default.
void set_max_threads(int n);

// Runs fn(chunk_index, begin, end) over [0, n_items) split into fixed-size
// chunks. Chunk boundaries depend only on n_items and min_chunk — never on
// the thread count — so callers that write per-chunk results and merge them
// in chunk order get bit-identical output on any machine configuration.
void parallel_chunks(std::size_t n_items, std::size_t min_chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace villagenet
