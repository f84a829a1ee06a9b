// estimators.cpp
//
// Moment and capacity estimators on observation batches.

#include "freemimo/estimators.hpp"

#include <cmath>

#include "freemimo/wishart_oracle.hpp"

namespace freemimo {

namespace {

void validate_batch(const ObservationBatch& batch) {
    if (batch.n < 1 || batch.m < 1)
        throw std::invalid_argument("ObservationBatch: n and m must be >= 1");
    if (batch.observations.empty())
        throw std::invalid_argument("ObservationBatch: at least one observation required");
    for (const auto& obs : batch.observations)
        if (obs.rows() != batch.n || obs.cols() != batch.m)
            throw std::invalid_argument("ObservationBatch: observation dimensions must be n x m");
    if (batch.sigma2 < 0.0)
        throw std::invalid_argument("ObservationBatch: sigma2 must be >= 0");
}

void validate_rank(const ObservationBatch& batch, int r) {
    if (r < 1 || r > 4)
        throw std::invalid_argument("moment estimators support rank 1..4 only");
    if (r > batch.n || r > batch.m)
        throw std::invalid_argument("rank exceeds min(n, m)");
}

EstimationReport classical_report(Estimator which, double capacity) {
    EstimationReport report;
    report.estimator = which;
    report.capacity = capacity;
    return report;
}

}  // namespace

Eigen::MatrixXcd stack_observations(const ObservationBatch& batch) {
    validate_batch(batch);
    const int L = batch.L();
    Eigen::MatrixXcd stacked(batch.n, static_cast<Eigen::Index>(batch.m) * L);
    const double scale = 1.0 / std::sqrt(static_cast<double>(L));
    for (int i = 0; i < L; ++i)
        stacked.middleCols(static_cast<Eigen::Index>(i) * batch.m, batch.m) =
            scale * batch.observations[static_cast<std::size_t>(i)];
    return stacked;
}

MomentVector free_moment_estimator(const ObservationBatch& batch, int r, bool force) {
    validate_batch(batch);
    validate_rank(batch, r);
    if (batch.model == Model::phase_impaired && batch.L() > 1 && !force)
        throw ApplicabilityError(
            "stacking is invalid for the phase-impaired model with more than one observation; "
            "use the per-observation estimator or pass --force to reproduce the biased curve");

    const Eigen::MatrixXcd stacked = stack_observations(batch);
    const Eigen::MatrixXcd gram = stacked * stacked.adjoint() / static_cast<double>(batch.m);
    const MomentVector observed = trace_moments(gram, r);
    const double c = static_cast<double>(batch.n) / (static_cast<double>(batch.m) * batch.L());
    return mixed_moment_unmap(observed, batch.sigma2, c, /*corr=*/0.0);
}

MomentVector gmm_moment_estimator(const ObservationBatch& batch, int r) {
    validate_batch(batch);
    validate_rank(batch, r);

    const double c = static_cast<double>(batch.n) / static_cast<double>(batch.m);
    const double corr = 1.0 / (static_cast<double>(batch.m) * static_cast<double>(batch.m));
    MomentVector mean = MomentVector::zeros(static_cast<std::size_t>(r));
    for (const auto& obs : batch.observations) {
        const Eigen::MatrixXcd gram = obs * obs.adjoint() / static_cast<double>(batch.m);
        const MomentVector solved =
            mixed_moment_unmap(trace_moments(gram, r), batch.sigma2, c, corr);
        for (std::size_t j = 1; j <= mean.order(); ++j) mean.m(j) += solved.m(j);
    }
    for (std::size_t j = 1; j <= mean.order(); ++j) mean.m(j) /= batch.L();
    return mean;
}

EstimationReport capacity_estimate(const ObservationBatch& batch, int r, Estimator which,
                                   bool force) {
    if (which != Estimator::Cf && which != Estimator::CG)
        throw std::invalid_argument(
            "capacity_estimate handles the moment estimators; use classical_estimators for C1/C2/C3");

    EstimationReport report;
    report.estimator = which;
    if (which == Estimator::Cf) {
        report.moments = free_moment_estimator(batch, r, force);
        report.stacking_invalid_for_model =
            force && batch.model == Model::phase_impaired && batch.L() > 1;
    } else {
        report.moments = gmm_moment_estimator(batch, r);
    }

    std::vector<double> power_sums(static_cast<std::size_t>(r), 0.0);
    for (int j = 1; j <= r; ++j) {
        const double hj = report.moments->m(static_cast<std::size_t>(j));
        if (hj < 0.0) report.negative_moment = true;
        power_sums[static_cast<std::size_t>(j - 1)] = static_cast<double>(batch.n) * hj;
    }

    const CapacityValue value =
        capacity_from_spectrum(power_sums_to_elementary(power_sums), batch.sigma2, batch.n);
    report.clamped = value.clamped || value.bits_per_antenna < 0.0;
    report.capacity = value.bits_per_antenna < 0.0 ? 0.0 : value.bits_per_antenna;
    return report;
}

std::array<EstimationReport, 3> classical_estimators(const ObservationBatch& batch) {
    validate_batch(batch);
    if (batch.sigma2 <= 0.0)
        throw std::invalid_argument("classical_estimators: sigma2 must be > 0");

    const double n = batch.n;
    const double m = batch.m;
    const double L = batch.L();
    const double s2 = batch.sigma2;

    double c1 = 0.0;
    Eigen::MatrixXcd gram_sum = Eigen::MatrixXcd::Zero(batch.n, batch.n);
    Eigen::MatrixXcd obs_mean = Eigen::MatrixXcd::Zero(batch.n, batch.m);
    for (const auto& obs : batch.observations) {
        const Eigen::MatrixXcd gram = obs * obs.adjoint();
        c1 += log2_det_identity_plus(gram / (m * s2));
        gram_sum += gram;
        obs_mean += obs;
    }
    c1 /= n * L;
    obs_mean /= L;

    const double c2 = log2_det_identity_plus(gram_sum / (L * s2 * m)) / n;
    const double c3 = log2_det_identity_plus(obs_mean * obs_mean.adjoint() / (s2 * m)) / n;

    return {classical_report(Estimator::C1, c1), classical_report(Estimator::C2, c2),
            classical_report(Estimator::C3, c3)};
}

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::Cf: return "Cf";
        case Estimator::CG: return "CG";
        case Estimator::C1: return "C1";
        case Estimator::C2: return "C2";
        case Estimator::C3: return "C3";
    }
    return "?";
}

}  // namespace freemimo
