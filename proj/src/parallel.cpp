#include "villagenet/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace villagenet {

namespace {

int default_threads() {
    if (const char* env = std::getenv("VILLAGENET_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::atomic<int> thread_cap{0};  // 0 = uninitialized, resolve lazily

}  // namespace

int max_threads() {
    int cap = thread_cap.load();
    if (cap <= 0) {
        cap = default_threads();
        thread_cap.store(cap);
    }
    return cap;
}

void set_max_threads(int n) { thread_cap.store(n > 0 ? n : default_threads()); }

void parallel_chunks(std::size_t n_items, std::size_t min_chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n_items == 0) return;
    if (min_chunk == 0) min_chunk = 1;
    const std::size_t n_chunks = (n_items + min_chunk - 1) / min_chunk;

    const int workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n_chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * min_chunk, std::min(n_items, (c + 1) * min_chunk));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                fn(c, c * min_chunk, std::min(n_items, (c + 1) * min_chunk));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace villagenet
