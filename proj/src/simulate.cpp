// simulate.cpp
//
// Channel/observation sampling and the deterministic Monte Carlo harness.

#include "freemimo/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "freemimo/parallel.hpp"
#include "freemimo/wishart_oracle.hpp"

namespace freemimo {

namespace {

// Purpose tags keep the channel draw, standalone observation draws, per-trial
// experiment streams, and the moment-check streams in disjoint stream
// families for any base seed.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kObservationStream = 2;
constexpr std::uint64_t kExperimentStream = 3;
constexpr std::uint64_t kMomentCheckStream = 4;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double ChannelMatrix::true_capacity_at(double sigma2) const {
    if (sigma2 <= 0.0) throw std::invalid_argument("true_capacity_at: sigma2 must be > 0");
    return log2_det_identity_plus(H * H.adjoint() / (static_cast<double>(m) * sigma2)) /
           static_cast<double>(n);
}

ChannelMatrix sample_channel(int n, int m, int r, std::uint64_t seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("sample_channel: n and m must be >= 1");
    if (r < 0 || r > std::min(n, m))
        throw std::invalid_argument("sample_channel: rank must be in [0, min(n, m)]");

    StreamRng rng(seed, 0, 0, kChannelStream);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, m);
    for (int k = 0; k < r; ++k) {
        Eigen::VectorXcd u(n), v(m);
        for (int i = 0; i < n; ++i) u(i) = rng.cgauss();
        for (int j = 0; j < m; ++j) v(j) = rng.cgauss();
        H += u * v.adjoint();
    }

    // Rescale to tr_n(H H^H / m) = 1, i.e. ||H||_F^2 = n m.
    const double norm = H.norm();
    if (norm > 0.0) H *= std::sqrt(static_cast<double>(n) * static_cast<double>(m)) / norm;

    ChannelMatrix channel;
    channel.n = n;
    channel.m = m;
    channel.rank = r;
    channel.H = H;
    channel.true_moments = trace_moments(H * H.adjoint() / static_cast<double>(m), 4);
    return channel;
}

Eigen::MatrixXcd sample_observation(const ChannelMatrix& channel, double sigma2, Model model,
                                    StreamRng& rng) {
    if (sigma2 < 0.0) throw std::invalid_argument("sample_observation: sigma2 must be >= 0");

    Eigen::MatrixXcd obs;
    if (model == Model::phase_impaired) {
        Eigen::VectorXcd receive_phases(channel.n), transmit_phases(channel.m);
        for (int i = 0; i < channel.n; ++i) receive_phases(i) = rng.phase();
        for (int j = 0; j < channel.m; ++j) transmit_phases(j) = rng.phase();
        obs = receive_phases.asDiagonal() * channel.H * transmit_phases.asDiagonal();
    } else {
        obs = channel.H;
    }

    if (sigma2 > 0.0) {
        const double sigma = std::sqrt(sigma2);
        for (int i = 0; i < channel.n; ++i)
            for (int j = 0; j < channel.m; ++j) obs(i, j) += sigma * rng.cgauss();
    }
    return obs;
}

Eigen::MatrixXcd sample_observation(const ChannelMatrix& channel, double sigma2, Model model,
                                    std::uint64_t seed) {
    StreamRng rng(seed, 0, 0, kObservationStream);
    return sample_observation(channel, sigma2, model, rng);
}

void ExperimentConfig::validate() const {
    if (n < 1 || m < 1) throw std::invalid_argument("experiment: n and m must be >= 1");
    if (rank < 1 || rank > std::min(n, m))
        throw std::invalid_argument("experiment: rank must be in [1, min(n, m)]");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (L_values.empty() || sigma2_values.empty())
        throw std::invalid_argument("experiment: L and sigma2 lists must be nonempty");
    for (int L : L_values)
        if (L < 1) throw std::invalid_argument("experiment: every L must be >= 1");
    for (double s2 : sigma2_values)
        if (!(s2 > 0.0)) throw std::invalid_argument("experiment: every sigma2 must be > 0");
    if (sweep == Sweep::over_L && sigma2_values.size() != 1)
        throw std::invalid_argument("experiment: sigma2 must be a single value when sweeping L");
    if (sweep == Sweep::over_sigma && L_values.size() != 1)
        throw std::invalid_argument("experiment: L must be a single value when sweeping sigma2");
    if (estimators.empty()) throw std::invalid_argument("experiment: estimator list is empty");

    const bool uses_moments =
        std::any_of(estimators.begin(), estimators.end(),
                    [](Estimator e) { return e == Estimator::Cf || e == Estimator::CG; });
    if (uses_moments && rank > 4)
        throw std::invalid_argument("experiment: moment estimators support rank <= 4 only");

    const bool uses_cf = std::count(estimators.begin(), estimators.end(), Estimator::Cf) > 0;
    const bool multi_L =
        std::any_of(L_values.begin(), L_values.end(), [](int L) { return L > 1; });
    if (uses_cf && model == Model::phase_impaired && multi_L && !force_stacking)
        throw ApplicabilityError(
            "stacking is invalid for the phase-impaired model with more than one observation; "
            "select CG/C1/C2/C3, keep L = 1, or set force_stacking");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    ExperimentResult result;
    result.channel = sample_channel(cfg.n, cfg.m, cfg.rank, cfg.seed);

    const std::size_t sweep_points =
        cfg.sweep == ExperimentConfig::Sweep::over_L ? cfg.L_values.size() : cfg.sigma2_values.size();
    const std::size_t n_estimators = cfg.estimators.size();
    const bool wants_classical =
        std::any_of(cfg.estimators.begin(), cfg.estimators.end(), [](Estimator e) {
            return e == Estimator::C1 || e == Estimator::C2 || e == Estimator::C3;
        });

    for (std::size_t s = 0; s < sweep_points; ++s) {
        const int L = cfg.sweep == ExperimentConfig::Sweep::over_L ? cfg.L_values[s] : cfg.L_values[0];
        const double sigma2 = cfg.sweep == ExperimentConfig::Sweep::over_sigma
                                  ? cfg.sigma2_values[s]
                                  : cfg.sigma2_values[0];
        const double sweep_value =
            cfg.sweep == ExperimentConfig::Sweep::over_L ? static_cast<double>(L) : sigma2;
        const double true_capacity = result.channel.true_capacity_at(sigma2);

        std::vector<BlockAccumulator> capacity_acc(n_estimators, BlockAccumulator(cfg.trials));
        std::vector<std::array<BlockAccumulator, 4>> moment_acc(
            n_estimators, {BlockAccumulator(cfg.trials), BlockAccumulator(cfg.trials),
                           BlockAccumulator(cfg.trials), BlockAccumulator(cfg.trials)});
        std::vector<std::vector<std::int64_t>> flag_counts(
            n_estimators, std::vector<std::int64_t>(block_count(cfg.trials), 0));

        parallel_blocks(cfg.trials, [&](std::int64_t first, std::int64_t last, std::size_t block) {
            for (std::int64_t trial = first; trial < last; ++trial) {
                StreamRng rng(cfg.seed, static_cast<std::uint64_t>(trial),
                              static_cast<std::uint64_t>(s), kExperimentStream);
                ObservationBatch batch;
                batch.n = cfg.n;
                batch.m = cfg.m;
                batch.sigma2 = sigma2;
                batch.model = cfg.model;
                batch.observations.reserve(static_cast<std::size_t>(L));
                for (int i = 0; i < L; ++i)
                    batch.observations.push_back(
                        sample_observation(result.channel, sigma2, cfg.model, rng));

                std::array<EstimationReport, 3> classical;
                if (wants_classical) classical = classical_estimators(batch);

                for (std::size_t e = 0; e < n_estimators; ++e) {
                    const Estimator which = cfg.estimators[e];
                    EstimationReport report;
                    switch (which) {
                        case Estimator::Cf:
                            report = capacity_estimate(batch, cfg.rank, which, cfg.force_stacking);
                            break;
                        case Estimator::CG:
                            report = capacity_estimate(batch, cfg.rank, which);
                            break;
                        case Estimator::C1: report = classical[0]; break;
                        case Estimator::C2: report = classical[1]; break;
                        case Estimator::C3: report = classical[2]; break;
                    }
                    capacity_acc[e].add(block, report.capacity);
                    if (report.moments)
                        for (std::size_t j = 1; j <= report.moments->order(); ++j)
                            moment_acc[e][j - 1].add(block, report.moments->m(j));
                    if (report.clamped || report.negative_moment ||
                        report.stacking_invalid_for_model)
                        ++flag_counts[e][block];
                }
            }
        });

        for (std::size_t e = 0; e < n_estimators; ++e) {
            const Estimator which = cfg.estimators[e];
            const bool has_moments = which == Estimator::Cf || which == Estimator::CG;

            SweepRow row;
            row.sweep_value = sweep_value;
            row.estimator = which;
            row.mean_capacity = capacity_acc[e].mean();
            row.se_capacity = capacity_acc[e].standard_error();
            row.true_capacity = true_capacity;
            for (std::size_t j = 0; j < 4; ++j) {
                const bool present = has_moments && j < static_cast<std::size_t>(cfg.rank);
                row.mean_moments[j] = present ? moment_acc[e][j].mean() : kNaN;
                row.se_moments[j] = present ? moment_acc[e][j].standard_error() : kNaN;
            }
            row.flags_count = 0;
            for (std::int64_t count : flag_counts[e]) row.flags_count += count;
            result.rows.push_back(row);
        }
    }
    return result;
}

std::vector<MomentCheckRow> verify_expected_moments(int n, int m, int rank, double sigma2,
                                                    std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("verify_expected_moments: trials must be >= 1");

    const ChannelMatrix channel = sample_channel(n, m, rank, seed);
    const double c = static_cast<double>(n) / static_cast<double>(m);
    const MomentVector closed = mixed_moment_expectation(channel.true_moments, c, m, sigma2);

    std::array<BlockAccumulator, 4> acc{BlockAccumulator(trials), BlockAccumulator(trials),
                                        BlockAccumulator(trials), BlockAccumulator(trials)};
    parallel_blocks(trials, [&](std::int64_t first, std::int64_t last, std::size_t block) {
        for (std::int64_t trial = first; trial < last; ++trial) {
            StreamRng rng(seed, static_cast<std::uint64_t>(trial), 0, kMomentCheckStream);
            const Eigen::MatrixXcd obs = sample_observation(channel, sigma2, Model::plain, rng);
            const MomentVector observed =
                trace_moments(obs * obs.adjoint() / static_cast<double>(m), 4);
            for (std::size_t j = 1; j <= 4; ++j) acc[j - 1].add(block, observed.m(j));
        }
    });

    std::vector<MomentCheckRow> rows;
    for (int j = 1; j <= 4; ++j) {
        MomentCheckRow row;
        row.j = j;
        row.empirical_mean = acc[static_cast<std::size_t>(j - 1)].mean();
        row.closed_form = closed.m(static_cast<std::size_t>(j));
        row.standard_error = acc[static_cast<std::size_t>(j - 1)].standard_error();
        row.z = row.standard_error > 0.0
                    ? (row.empirical_mean - row.closed_form) / row.standard_error
                    : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace freemimo
