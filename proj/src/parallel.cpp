// parallel.cpp
//
// Block-based deterministic parallel execution and pairwise reduction.

#include "freemimo/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

namespace freemimo {

int thread_count() {
    if (const char* env = std::getenv("FREE_MIMO_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested >= 1) return requested;
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? static_cast<int>(hw) : 1;
}

void parallel_blocks(std::int64_t total,
                     const std::function<void(std::int64_t, std::int64_t, std::size_t)>& fn) {
    if (total <= 0) return;
    const std::size_t blocks = block_count(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto work = [&] {
        try {
            for (;;) {
                const std::size_t block = next.fetch_add(1, std::memory_order_relaxed);
                if (block >= blocks) break;
                const std::int64_t first = static_cast<std::int64_t>(block) * kTrialBlock;
                const std::int64_t last = std::min(total, first + kTrialBlock);
                fn(first, last, block);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(blocks, std::memory_order_relaxed);  // drain remaining work
        }
    };

    const int workers =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(thread_count()), blocks));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers - 1));
        for (int i = 0; i < workers - 1; ++i) pool.emplace_back(work);
        work();
        for (auto& thread : pool) thread.join();
    }
    if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(const double* values, std::size_t count) {
    if (count == 0) return 0.0;
    if (count <= 4) {
        double sum = values[0];
        for (std::size_t i = 1; i < count; ++i) sum += values[i];
        return sum;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

}  // namespace freemimo
