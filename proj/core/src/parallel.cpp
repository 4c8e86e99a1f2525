#include "evg/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace evg {

unsigned resolve_threads(unsigned requested) {
    unsigned cap = 0;
    if (const char* env = std::getenv("EVG_THREADS")) {
        try {
            cap = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            cap = 0;
        }
    }
    unsigned n = requested ? requested : (cap ? cap : std::max(1u, std::thread::hardware_concurrency()));
    if (cap) n = std::min(n, cap);
    return std::max(1u, n);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace evg
