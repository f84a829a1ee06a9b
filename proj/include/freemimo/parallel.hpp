// parallel.hpp
//
// Deterministic parallel Monte Carlo plumbing. Work is split into fixed-size
// blocks of consecutive trial indices; each block's partial results land in a
// slot owned by that block, and slots are reduced pairwise in block order.
// Summation order therefore depends only on the block size constant, never on
// the number of threads, so reports are bit-identical under any FREE_MIMO_THREADS
// setting.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace freemimo {

// Number of worker threads: FREE_MIMO_THREADS if set to a positive integer,
// otherwise the hardware concurrency (at least 1).
int thread_count();

// Trials per reduction block. Fixed so that summation order is scheduling
// independent.
inline constexpr std::int64_t kTrialBlock = 256;

// Runs fn(first, last, block_index) over the blocks covering [0, total).
// Blocks are claimed dynamically by an atomic counter; fn must write only to
// state owned by its block index.
void parallel_blocks(std::int64_t total,
                     const std::function<void(std::int64_t, std::int64_t, std::size_t)>& fn);

inline std::size_t block_count(std::int64_t total) {
    return static_cast<std::size_t>((total + kTrialBlock - 1) / kTrialBlock);
}

// Pairwise (binary tree) sum over values in index order.
double pairwise_sum(const double* values, std::size_t count);
inline double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(values.data(), values.size());
}

// Streaming mean/variance bookkeeping for one statistic: per-block sums of x
// and x^2, reduced deterministically.
class BlockAccumulator {
  public:
    BlockAccumulator(std::int64_t total_trials)
        : trials_(total_trials), sum_(block_count(total_trials), 0.0),
          sum_sq_(block_count(total_trials), 0.0) {}

    void add(std::size_t block, double x) {
        sum_[block] += x;
        sum_sq_[block] += x * x;
    }

    double mean() const { return pairwise_sum(sum_) / static_cast<double>(trials_); }

    // Unbiased sample variance; 0 for a single trial.
    double variance() const {
        if (trials_ < 2) return 0.0;
        const double n = static_cast<double>(trials_);
        const double s1 = pairwise_sum(sum_);
        const double s2 = pairwise_sum(sum_sq_);
        double var = (s2 - s1 * s1 / n) / (n - 1.0);
        return var > 0.0 ? var : 0.0;
    }

    // Standard error of the mean.
    double standard_error() const {
        if (trials_ < 2) return 0.0;
        return std::sqrt(variance() / static_cast<double>(trials_));
    }

  private:
    std::int64_t trials_;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

}  // namespace freemimo
