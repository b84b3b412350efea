#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sil {

// SIL_THREADS caps the worker count; default is the hardware concurrency
inline int worker_count()
{
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("SIL_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) return cap < hw ? cap : hw;
    }
    return hw;
}

// Runs fn(chunk, begin, end) over fixed-size chunks of [0, n). Chunk boundaries do not
// depend on the worker count, so per-chunk partial results combine deterministically.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, Fn&& fn)
{
    std::size_t nchunks = (n + chunk - 1) / chunk;
    int workers = worker_count();
    if (workers <= 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    if (static_cast<std::size_t>(workers) > nchunks) workers = static_cast<int>(nchunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            try {
                fn(c, c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(nchunks);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

inline constexpr std::size_t kChunk = 4096;

}  // namespace sil
