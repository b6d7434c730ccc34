#include "qcauchy/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qcauchy {

int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("QCAUCHY_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) hw = std::min(hw, cap);
        } catch (...) {
            // unparseable cap: keep the hardware default
        }
    }
    return hw;
}

void parallel_for(long n, const std::function<void(long)>& fn) {
    int nt = max_threads();
    if (nt <= 1 || n < 8) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    nt = static_cast<int>(std::min<long>(nt, n));
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                long i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace qcauchy
