// estimators.hpp
//
// Capacity and moment estimators operating on batches of noisy channel
// observations: the stacking-plus-deconvolution moment estimator (Cf), the
// per-observation Gaussian-matrix-mean estimator (CG), and the classical
// log-det baselines C1/C2/C3.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "freemimo/moments.hpp"

namespace freemimo {

// Channel observation model: plain additive noise, or additive noise plus
// per-observation random diagonal phase impairments at both ends.
enum class Model { plain, phase_impaired };

enum class Estimator { Cf, CG, C1, C2, C3 };

// Raised when an estimator is asked to run outside its validity region
// (e.g. stacked deconvolution on phase-impaired batches with L > 1). The CLI
// maps this to exit code 2.
class ApplicabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// L noisy observations of one n x m channel, with known noise variance.
struct ObservationBatch {
    int n = 0;
    int m = 0;
    std::vector<Eigen::MatrixXcd> observations;
    double sigma2 = 0.0;  // > 0 in production; 0 accepted as a degenerate test hook
    Model model = Model::plain;

    int L() const { return static_cast<int>(observations.size()); }
};

// Per-estimator result. capacity is clamped to >= 0 (with the clamped flag
// set) because a noisy spectrum estimate can push the raw log below zero.
struct EstimationReport {
    Estimator estimator = Estimator::Cf;
    double capacity = 0.0;                    // bits/s/Hz per receive antenna
    std::optional<MomentVector> moments;      // estimated moments of H H^H / m; Cf and CG only
    bool clamped = false;                     // capacity floor or nonnegativity clamp hit
    bool negative_moment = false;             // some estimated moment came out negative
    bool stacking_invalid_for_model = false;  // Cf forced onto a phase-impaired batch with L > 1
};

// Horizontal concatenation of the L observations scaled by 1/sqrt(L), so the
// result S satisfies S S^H = (1/L) sum_i Hhat_i Hhat_i^H. Throws
// std::invalid_argument for an empty batch or mismatched dimensions.
Eigen::MatrixXcd stack_observations(const ObservationBatch& batch);

// Stacked moment estimator: trace moments of the stacked Gram matrix are
// pushed through the triangular system with ratio c = n/(mL) and no
// finite-size correction. Throws ApplicabilityError for phase-impaired
// batches with L > 1 unless force is set (forcing reproduces the known
// biased curve; callers should surface the stacking_invalid_for_model flag).
// r is the channel rank (<= 4), which equals the number of moments solved.
MomentVector free_moment_estimator(const ObservationBatch& batch, int r, bool force = false);

// Per-observation moment estimator: each observation's trace moments are
// solved with ratio c = n/m and finite-size correction 1/m^2, then averaged.
// Valid for both models (phase impairments cancel inside per-observation
// Gram traces in expectation).
MomentVector gmm_moment_estimator(const ObservationBatch& batch, int r);

// Full capacity pipeline for Cf or CG: estimated moments -> power sums
// S_j = n h_j -> elementary symmetric polynomials -> capacity. r must equal
// the (caller-known) channel rank and be <= 4.
EstimationReport capacity_estimate(const ObservationBatch& batch, int r, Estimator which,
                                   bool force = false);

// The three classical baselines, in order {C1, C2, C3}:
//   C1 = (1/(nL)) sum_i log2 det(I + Hhat_i Hhat_i^H / (m sigma2))
//   C2 = (1/n) log2 det(I + (1/(L sigma2 m)) sum_i Hhat_i Hhat_i^H)
//   C3 = (1/n) log2 det(I + (1/(sigma2 m)) Hbar Hbar^H), Hbar = (1/L) sum_i Hhat_i
std::array<EstimationReport, 3> classical_estimators(const ObservationBatch& batch);

const char* estimator_name(Estimator e);

}  // namespace freemimo
