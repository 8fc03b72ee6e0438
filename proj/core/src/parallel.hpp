#ifndef IMS_PARALLEL_HPP
#define IMS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ims::detail {

int max_threads();

// Runs body(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
// not depend on the thread count, so any reduction done per chunk and combined
// in chunk order is bit-identical for every --threads setting.
template <class Body>
void parallel_chunks(std::int64_t n, std::int64_t chunk, Body&& body) {
    if (n <= 0) return;
    std::int64_t nchunks = (n + chunk - 1) / chunk;
    int threads = max_threads();
    if (threads <= 1 || nchunks <= 1) {
        for (std::int64_t c = 0; c < nchunks; ++c)
            body(c, c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::int64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            try {
                body(c, c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    int spawn = static_cast<int>(std::min<std::int64_t>(threads, nchunks));
    std::vector<std::thread> pool;
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ims::detail

#endif
