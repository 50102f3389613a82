#include "nvscatter/parallel.hpp"

#include <atomic>
#include <limits>

namespace nv {

namespace {
std::atomic<int> g_thread_cap{0};
}

void set_thread_cap(int n) { g_thread_cap.store(n < 0 ? 0 : n); }

int thread_cap() {
    int cap = g_thread_cap.load();
    if (cap == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        cap = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), count);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    struct Failure {
        std::size_t index = std::numeric_limits<std::size_t>::max();
        std::exception_ptr err;
    };
    std::vector<Failure> failures(nthreads);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (count + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&, t, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    failures[t] = {i, std::current_exception()};
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();

    const Failure* first = nullptr;
    for (const auto& f : failures)
        if (f.err && (!first || f.index < first->index)) first = &f;
    if (first) std::rethrow_exception(first->err);
}

}  // namespace nv
