#include "nullcone/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nullcone {

int max_threads() {
    if (const char* env = std::getenv("NULLCONE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(Index n, const std::function<void(Index)>& body) {
    const int workers = std::min<Index>(max_threads(), n);
    if (workers <= 1) {
        for (Index i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<Index> next(0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (Index i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace nullcone
