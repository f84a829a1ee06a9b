// simulate.hpp
//
// Samplers for the two channel observation models and the deterministic
// Monte Carlo harness behind the experiment sweeps: fixed random channel,
// fresh noise (and phases) per trial, estimator statistics aggregated with
// scheduling-independent reductions.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "freemimo/estimators.hpp"
#include "freemimo/moments.hpp"
#include "freemimo/rng.hpp"

namespace freemimo {

// A sampled rank-r channel, normalized so tr_n(H H^H / m) = 1 (this pins the
// scale the sigma2 sweeps are read against).
struct ChannelMatrix {
    int n = 0;
    int m = 0;
    int rank = 0;
    Eigen::MatrixXcd H;
    MomentVector true_moments;  // trace moments of H H^H / m, order 4

    // Definitional capacity (1/n) log2 det(I + H H^H / (m sigma2)); unchanged
    // by phase impairments.
    double true_capacity_at(double sigma2) const;
};

// H = sum_{k=1}^{r} u_k v_k^H with i.i.d. standard complex Gaussian vectors,
// rescaled to the unit-first-moment normalization. Deterministic in seed.
// r = 0 gives the zero channel. Throws std::invalid_argument for
// r > min(n, m) or r < 0.
ChannelMatrix sample_channel(int n, int m, int r, std::uint64_t seed);

// One noisy observation. plain: H + sigma X. phase_impaired:
// Dr H Dt + sigma X with fresh uniform phase diagonals each call. Draws come
// from the supplied stream.
Eigen::MatrixXcd sample_observation(const ChannelMatrix& channel, double sigma2, Model model,
                                    StreamRng& rng);

// Convenience overload matching the seed-based contract.
Eigen::MatrixXcd sample_observation(const ChannelMatrix& channel, double sigma2, Model model,
                                    std::uint64_t seed);

// Experiment description: one channel, one sweep axis (observation count or
// noise level), a trial count per sweep point, and an estimator selection.
struct ExperimentConfig {
    enum class Sweep { over_L, over_sigma };

    int n = 0;
    int m = 0;
    int rank = 0;
    std::vector<int> L_values;         // >= 1 entry; multiple iff sweep == over_L
    std::vector<double> sigma2_values; // >= 1 entry; multiple iff sweep == over_sigma
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    Model model = Model::plain;
    std::vector<Estimator> estimators;
    Sweep sweep = Sweep::over_L;
    bool force_stacking = false;  // allow Cf on phase-impaired batches with L > 1

    void validate() const;  // throws std::invalid_argument / ApplicabilityError
};

// One aggregated row of the sweep table. Moment statistics are NaN for the
// classical estimators, which do not produce moment estimates.
struct SweepRow {
    double sweep_value = 0.0;
    Estimator estimator = Estimator::Cf;
    double mean_capacity = 0.0;
    double se_capacity = 0.0;
    double true_capacity = 0.0;
    std::array<double, 4> mean_moments{};
    std::array<double, 4> se_moments{};
    std::int64_t flags_count = 0;  // trials whose report carried any flag
};

struct ExperimentResult {
    ChannelMatrix channel;
    std::vector<SweepRow> rows;  // sweep-major, estimator order as configured
};

// Runs the configured sweep: the channel is fixed for the whole experiment,
// noise and phases are fresh per trial, and the output is bit-identical for
// a given (config, seed) regardless of thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// One row of the closed-form-vs-Monte-Carlo comparison for the expected
// trace moments of the noisy Gram matrix.
struct MomentCheckRow {
    int j = 0;
    double empirical_mean = 0.0;
    double closed_form = 0.0;
    double standard_error = 0.0;
    double z = 0.0;  // (empirical - closed form) / SE; 0 when SE is 0
};

// Draws `trials` observations of a seeded rank-`rank` channel and compares
// empirical E[tr_n(W^j)], j = 1..4, with the exact closed forms.
std::vector<MomentCheckRow> verify_expected_moments(int n, int m, int rank, double sigma2,
                                                    std::int64_t trials, std::uint64_t seed);

}  // namespace freemimo
