// acceptance.cpp
//
// End-to-end acceptance runner. Each numbered criterion below is checked
// independently and reported as exactly one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Some criteria carry a wall-clock
// budget that is enforced as part of the criterion itself.
//
//  1  exact expected Gram trace moments vs closed forms (rationals)
//  2  permutation class table for p=3 vs the frozen reference
//  3  Marchenko-Pastur moments: closed forms exact, quadrature to 1e-5
//  4  transform round trips over 1000 random moment vectors
//  5  closed-form expected noisy-Gram moments vs Monte Carlo (|z| <= 4)
//  6  per-observation moment estimator unbiased within resolution
//  7  stacked estimator's third-moment bias follows the 1/(m^2 L^2) law
//  8  single-observation coincidence of the two moment estimators
//  9  sweep-table shape checks on the bundled L-sweep configs
// 10  capacity from moments equals the log-det capacity (and the
//     miscopied Newton-Girard coefficient fails it)
// 11  first-moment estimator variance decays in the observation count

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "freemimo/estimators.hpp"
#include "freemimo/io.hpp"
#include "freemimo/moments.hpp"
#include "freemimo/mp_transforms.hpp"
#include "freemimo/rng.hpp"
#include "freemimo/simulate.hpp"
#include "freemimo/wishart_oracle.hpp"
#include "test_support.hpp"

using freemimo::ChannelMatrix;
using freemimo::Estimator;
using freemimo::ExperimentConfig;
using freemimo::ExperimentResult;
using freemimo::Model;
using freemimo::MomentVector;
using freemimo::ObservationBatch;
using freemimo::StreamRng;
using freemimo::SweepRow;

namespace {

// Collects failure details for one criterion; empty means pass.
struct Checker {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& detail) {
        if (!ok) failures.push_back(detail);
    }

    template <typename T>
    static std::string str(const T& value) {
        std::ostringstream out;
        out << value;
        return out.str();
    }
};

// Relative-or-absolute comparison used by the round-trip criteria.
bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Streaming mean/SE accumulator for the Monte Carlo criteria.
struct Welford {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / double(count);
        m2 += delta * (x - mean);
    }
    double standard_error() const {
        return std::sqrt(m2 / double(count - 1) / double(count));
    }
};

Eigen::MatrixXcd random_matrix(StreamRng& rng, int rows, int cols) {
    Eigen::MatrixXcd mat(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) mat(i, j) = rng.cgauss();
    return mat;
}

ExperimentConfig load_config(const std::string& name) {
    const std::string path = std::string(FREEMIMO_CONFIG_DIR) + "/" + name;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return freemimo::io::parse_experiment_config(nlohmann::json::parse(in));
}

const SweepRow& find_row(const ExperimentResult& result, double sweep_value, Estimator e) {
    for (const SweepRow& row : result.rows)
        if (row.sweep_value == sweep_value && row.estimator == e) return row;
    throw std::runtime_error("sweep row not found");
}

// ---- criteria -------------------------------------------------------------

void criterion_wishart_exact(Checker& c) {
    for (int n = 1; n <= 6; ++n)
        for (int N = 1; N <= 6; ++N)
            for (int p = 1; p <= 4; ++p) {
                const auto enumerated = freemimo::expected_wishart_moment(n, N, p);
                const auto closed = test_support::closed_form_gram_moment(n, N, p);
                c.require(enumerated == closed,
                          "n=" + Checker::str(n) + " N=" + Checker::str(N) + " p=" +
                              Checker::str(p) + ": " + Checker::str(enumerated) +
                              " != " + Checker::str(closed));
            }
}

void criterion_class_table(Checker& c) {
    for (const auto& row : test_support::s3_reference_rows()) {
        const auto paired = freemimo::equivalence_classes(row.pi);
        std::string pi_text;
        for (int v : row.pi) pi_text += Checker::str(v);
        c.require(paired.classes == row.classes, "pi=" + pi_text + ": class partition differs");
        c.require(paired.k_classes == row.k && paired.l_classes == row.l,
                  "pi=" + pi_text + ": (k,l) = (" + Checker::str(paired.k_classes) + "," +
                      Checker::str(paired.l_classes) + "), expected (" + Checker::str(row.k) +
                      "," + Checker::str(row.l) + ")");
    }
}

void criterion_mp_moments(Checker& c) {
    for (double ratio : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        const MomentVector m = freemimo::mp_moments(ratio, 4);
        const double closed[4] = {1.0, ratio + 1.0, ratio * ratio + 3.0 * ratio + 1.0,
                                  ratio * ratio * ratio + 6.0 * ratio * ratio + 6.0 * ratio + 1.0};
        for (int k = 1; k <= 4; ++k)
            c.require(m.m(size_t(k)) == closed[k - 1],
                      "c=" + Checker::str(ratio) + " order " + Checker::str(k) +
                          ": partition sum differs from the closed form");
        if (ratio == 0.0) continue;  // point mass at 1: nothing to integrate

        const double atom = ratio > 1.0 ? 1.0 - 1.0 / ratio : 0.0;
        const double mass = atom + test_support::mp_continuous_moment_quadrature(ratio, 0);
        c.require(std::abs(mass - 1.0) <= 1e-5,
                  "c=" + Checker::str(ratio) + ": density+atom mass " + Checker::str(mass));
        for (int k = 1; k <= 4; ++k) {
            const double integrated = test_support::mp_continuous_moment_quadrature(ratio, k);
            c.require(std::abs(integrated - m.m(size_t(k))) <= 1e-5,
                      "c=" + Checker::str(ratio) + " order " + Checker::str(k) +
                          ": quadrature " + Checker::str(integrated) + " vs " +
                          Checker::str(m.m(size_t(k))));
        }
    }
}

void criterion_roundtrips(Checker& c) {
    StreamRng rng(0xACC4);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        MomentVector m = MomentVector::zeros(4);
        for (size_t j = 1; j <= 4; ++j) m.m(j) = 10.0 * rng.uniform() - 5.0;
        const double ratio = trial % 10 == 0 ? 0.0 : 2.5 * rng.uniform();
        const double shift = 6.0 * rng.uniform() - 3.0;

        const MomentVector there = freemimo::mult_conv_mp(m, ratio);
        const MomentVector back = freemimo::mult_deconv_mp(there, ratio);
        const MomentVector dethere = freemimo::mult_deconv_mp(m, ratio);
        const MomentVector deback = freemimo::mult_conv_mp(dethere, ratio);
        const MomentVector shifted = freemimo::add_conv_dirac(m, shift);
        const MomentVector unshifted = freemimo::add_conv_dirac(shifted, -shift);
        for (size_t j = 1; j <= 4; ++j) {
            if (!close(back.m(j), m.m(j), 1e-10) || !close(deback.m(j), m.m(j), 1e-10) ||
                !close(unshifted.m(j), m.m(j), 1e-10))
                ++bad;
        }
    }
    c.require(bad == 0, Checker::str(bad) + " of 4000 round-tripped moments off by > 1e-10");

    // Multiplying the unit point mass by the square-limit law gives the law
    // itself, exactly.
    const MomentVector ones(std::vector<double>{1, 1, 1, 1});
    for (double ratio : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        const MomentVector conv = freemimo::mult_conv_mp(ones, ratio);
        const MomentVector law = freemimo::mp_moments(ratio, 4);
        for (size_t j = 1; j <= 4; ++j)
            c.require(conv.m(j) == law.m(j),
                      "unit mass convolution differs from the law at c=" + Checker::str(ratio) +
                          ", order " + Checker::str(j));
    }
}

void criterion_expected_moments_mc(Checker& c) {
    for (double sigma2 : {0.1, 0.25, 1.0}) {
        const auto rows = freemimo::verify_expected_moments(4, 4, 3, sigma2, 100000, 4242);
        for (const auto& row : rows)
            c.require(std::abs(row.z) <= 4.0,
                      "sigma2=" + Checker::str(sigma2) + " j=" + Checker::str(row.j) +
                          ": z=" + Checker::str(row.z));
    }
}

void criterion_per_observation_unbiased(Checker& c) {
    // sigma2 = 0.1: the estimator's (real, quantified elsewhere) O(sigma^4/m^2)
    // third/fourth-moment distortion sits far below the 4 SE resolution of
    // 1e5 trials, so the within-resolution unbiasedness claim is testable.
    const double sigma2 = 0.1;
    const ChannelMatrix channel = freemimo::sample_channel(4, 4, 3, 606);
    const long long trials = 100000;

    for (Model model : {Model::plain, Model::phase_impaired}) {
        for (int L : {1, 4}) {
            std::array<Welford, 4> stats;
            for (long long t = 0; t < trials; ++t) {
                StreamRng rng(606, std::uint64_t(t),
                              (model == Model::plain ? 0u : 2u) + (L == 1 ? 0u : 1u), 11);
                ObservationBatch batch;
                batch.n = channel.n;
                batch.m = channel.m;
                batch.sigma2 = sigma2;
                batch.model = model;
                for (int i = 0; i < L; ++i)
                    batch.observations.push_back(
                        freemimo::sample_observation(channel, sigma2, model, rng));
                const MomentVector h = freemimo::gmm_moment_estimator(batch, 4);
                for (size_t j = 1; j <= 4; ++j) stats[j - 1].add(h.m(j));
            }
            for (size_t j = 1; j <= 4; ++j) {
                const double gap = stats[j - 1].mean - channel.true_moments.m(j);
                const double se = stats[j - 1].standard_error();
                c.require(std::abs(gap) <= 4.0 * se,
                          std::string(model == Model::plain ? "plain" : "phase_impaired") +
                              " L=" + Checker::str(L) + " j=" + Checker::str(j) + ": gap " +
                              Checker::str(gap) + " vs 4SE " + Checker::str(4.0 * se));
            }
        }
    }
}

void criterion_stacked_bias(Checker& c) {
    // sigma2 = 0.25: large enough that the third-moment bias is resolvable,
    // small enough that terms beyond the quoted leading law stay inside 4 SE.
    const double sigma2 = 0.25;
    const ChannelMatrix channel = freemimo::sample_channel(4, 4, 3, 707);
    const long long trials = 100000;

    for (int L : {1, 2}) {
        std::array<Welford, 3> stats;
        for (long long t = 0; t < trials; ++t) {
            StreamRng rng(707, std::uint64_t(t), std::uint64_t(L), 13);
            ObservationBatch batch;
            batch.n = channel.n;
            batch.m = channel.m;
            batch.sigma2 = sigma2;
            for (int i = 0; i < L; ++i)
                batch.observations.push_back(
                    freemimo::sample_observation(channel, sigma2, Model::plain, rng));
            const MomentVector h = freemimo::free_moment_estimator(batch, 3);
            for (size_t j = 1; j <= 3; ++j) stats[j - 1].add(h.m(j));
        }

        const double m1 = channel.true_moments.m(1);
        const double predicted_bias3 = -(3.0 * sigma2 * sigma2 * m1 + sigma2 * sigma2 * sigma2) /
                                       (double(channel.m) * channel.m * L * L);
        const double expected[3] = {channel.true_moments.m(1), channel.true_moments.m(2),
                                    channel.true_moments.m(3) + predicted_bias3};
        for (size_t j = 1; j <= 3; ++j) {
            const double gap = stats[j - 1].mean - expected[j - 1];
            const double se = stats[j - 1].standard_error();
            c.require(std::abs(gap) <= 4.0 * se,
                      "L=" + Checker::str(L) + " j=" + Checker::str(j) + ": residual " +
                          Checker::str(gap) + " vs 4SE " + Checker::str(4.0 * se));
        }
    }
}

void criterion_single_observation_coincidence(Checker& c) {
    StreamRng rng(0xACC8);
    for (int trial = 0; trial < 20; ++trial) {
        const double sigma2 = 0.1 + 0.9 * rng.uniform();
        ObservationBatch batch;
        batch.n = 4;
        batch.m = 4;
        batch.sigma2 = sigma2;
        batch.observations.push_back(random_matrix(rng, 4, 4));

        const MomentVector h_free = freemimo::free_moment_estimator(batch, 4);
        const MomentVector h_gmm = freemimo::gmm_moment_estimator(batch, 4);
        for (size_t j = 1; j <= 2; ++j)
            c.require(close(h_free.m(j), h_gmm.m(j), 1e-12),
                      "trial " + Checker::str(trial) + ": order-" + Checker::str(j) +
                          " estimates differ by " + Checker::str(h_free.m(j) - h_gmm.m(j)));
    }

    // Rank <= 2 channels use only the coinciding orders: identical reports.
    for (int rank : {1, 2}) {
        Eigen::MatrixXcd channel = Eigen::MatrixXcd::Zero(4, 4);
        for (int k = 0; k < rank; ++k)
            channel += random_matrix(rng, 4, 1) * random_matrix(rng, 1, 4);
        ObservationBatch batch;
        batch.n = 4;
        batch.m = 4;
        batch.sigma2 = 0.3;
        batch.observations.push_back(channel + std::sqrt(0.3) * random_matrix(rng, 4, 4));

        const auto report_f = freemimo::capacity_estimate(batch, rank, Estimator::Cf);
        const auto report_g = freemimo::capacity_estimate(batch, rank, Estimator::CG);
        c.require(report_f.capacity == report_g.capacity &&
                      report_f.clamped == report_g.clamped &&
                      report_f.negative_moment == report_g.negative_moment,
                  "rank " + Checker::str(rank) + ": single-observation reports differ");
    }
}

void criterion_figure_shapes(Checker& c) {
    // (a) With several observations the averaged-observation log-det
    //     estimator beats the other two classical ones.
    const ExperimentResult classical = freemimo::run_experiment(load_config("fig1.json"));
    const double truth = classical.rows.front().true_capacity;
    const double gap1 = std::abs(find_row(classical, 50, Estimator::C1).mean_capacity - truth);
    const double gap2 = std::abs(find_row(classical, 50, Estimator::C2).mean_capacity - truth);
    const double gap3 = std::abs(find_row(classical, 50, Estimator::C3).mean_capacity - truth);
    c.require(gap3 < gap1 && gap3 < gap2,
              "classical gaps at L=50: averaged-observation " + Checker::str(gap3) +
                  ", per-observation " + Checker::str(gap1) + ", averaged-Gram " +
                  Checker::str(gap2));

    // (b) Both moment estimators land within 0.05 bits of the true capacity
    //     once L >= 10 (threshold frozen from converged reference runs).
    const ExperimentResult moment = freemimo::run_experiment(load_config("fig2.json"));
    for (double L : {10.0, 20.0, 50.0}) {
        for (Estimator e : {Estimator::Cf, Estimator::CG}) {
            const SweepRow& row = find_row(moment, L, e);
            c.require(std::abs(row.mean_capacity - row.true_capacity) <= 0.05,
                      std::string(freemimo::estimator_name(e)) + " at L=" + Checker::str(L) +
                          ": |mean - true| = " +
                          Checker::str(std::abs(row.mean_capacity - row.true_capacity)));
        }
    }

    // (c) Under phase impairments the forced stack is visibly biased while
    //     the per-observation estimator stays close.
    const ExperimentResult impaired = freemimo::run_experiment(load_config("fig3.json"));
    const SweepRow& forced = find_row(impaired, 20, Estimator::Cf);
    const SweepRow& robust = find_row(impaired, 20, Estimator::CG);
    const double forced_gap = std::abs(forced.mean_capacity - forced.true_capacity);
    const double robust_gap = std::abs(robust.mean_capacity - robust.true_capacity);
    c.require(forced_gap > robust_gap, "phase-impaired gaps at L=20: forced stack " +
                                           Checker::str(forced_gap) + ", per-observation " +
                                           Checker::str(robust_gap));
    c.require(forced.flags_count == 2000, "forced stack rows must flag every trial");
}

void criterion_capacity_path(Checker& c) {
    StreamRng rng(0xACC10);
    double worst_wrong = 0.0;
    int rank3plus = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + int(rng.next() % 3);
        const int m = 4 + int(rng.next() % 4);
        const int rank = 1 + trial % 4;
        const double sigma2 = 0.2 + 0.8 * rng.uniform();

        Eigen::MatrixXcd channel = Eigen::MatrixXcd::Zero(n, m);
        for (int k = 0; k < rank; ++k)
            channel += random_matrix(rng, n, 1) * random_matrix(rng, 1, m);
        const Eigen::MatrixXcd gram = channel * channel.adjoint() / double(m);

        const MomentVector h = freemimo::trace_moments(gram, rank);
        std::vector<double> power_sums(static_cast<size_t>(rank));
        for (int j = 1; j <= rank; ++j) power_sums[size_t(j - 1)] = double(n) * h.m(size_t(j));

        const double via_moments =
            freemimo::capacity_from_spectrum(freemimo::power_sums_to_elementary(power_sums),
                                             sigma2, n)
                .bits_per_antenna;
        const double via_logdet = freemimo::log2_det_identity_plus(gram / sigma2) / n;
        c.require(std::abs(via_moments - via_logdet) <= 1e-9,
                  "trial " + Checker::str(trial) + " (rank " + Checker::str(rank) +
                      "): moment path off by " + Checker::str(via_moments - via_logdet));

        // Regression guard: with the third elementary symmetric polynomial
        // miscopied as (S1^3 - 7 S1 S2 + 2 S3)/6 the identity must break.
        if (rank >= 3) {
            ++rank3plus;
            auto spectrum = freemimo::power_sums_to_elementary(power_sums);
            const double s1 = power_sums[0], s2 = power_sums[1], s3 = power_sums[2];
            spectrum.elementary[2] = (s1 * s1 * s1 - 7.0 * s1 * s2 + 2.0 * s3) / 6.0;
            const double wrong =
                freemimo::capacity_from_spectrum(spectrum, sigma2, n).bits_per_antenna;
            worst_wrong = std::max(worst_wrong, std::abs(wrong - via_logdet));
        }
    }
    c.require(rank3plus >= 25, "not enough rank >= 3 samples");
    c.require(worst_wrong > 1e-6,
              "miscopied coefficient still matched the log-det capacity (max gap " +
                  Checker::str(worst_wrong) + ")");
}

void criterion_variance_decay(Checker& c) {
    for (double sigma2 : {0.1, 0.25, 1.0}) {
        ExperimentConfig cfg;
        cfg.n = 4;
        cfg.m = 4;
        cfg.rank = 3;
        cfg.L_values = {4, 16};
        cfg.sigma2_values = {sigma2};
        cfg.trials = 3000;
        cfg.seed = 1111;
        cfg.estimators = {Estimator::CG};

        const ExperimentResult result = freemimo::run_experiment(cfg);
        const double var_4 = std::pow(find_row(result, 4, Estimator::CG).se_moments[0], 2);
        const double var_16 = std::pow(find_row(result, 16, Estimator::CG).se_moments[0], 2);
        c.require(var_16 < var_4, "sigma2=" + Checker::str(sigma2) +
                                      ": first-moment variance did not decay (" +
                                      Checker::str(var_16) + " vs " + Checker::str(var_4) + ")");
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* summary;
        double budget_seconds;  // 0 = no budget
        std::function<void(Checker&)> run;
    };

    const std::vector<Criterion> criteria = {
        {1, "expected Gram trace moments exact for n,N in 1..6, p in 1..4", 1.0,
         criterion_wishart_exact},
        {2, "permutation class table for p=3 matches the frozen reference", 0.0,
         criterion_class_table},
        {3, "square-limit law moments: closed forms exact, quadrature to 1e-5", 0.0,
         criterion_mp_moments},
        {4, "transform round trips within 1e-10 on 1000 random moment vectors", 0.0,
         criterion_roundtrips},
        {5, "noisy-Gram moment closed forms confirmed by 1e5-trial Monte Carlo", 120.0,
         criterion_expected_moments_mc},
        {6, "per-observation moment estimator unbiased within 4 SE (both models)", 0.0,
         criterion_per_observation_unbiased},
        {7, "stacked third-moment bias follows the 1/(m^2 L^2) law within 4 SE", 0.0,
         criterion_stacked_bias},
        {8, "single-observation estimators coincide (orders 1-2, rank <= 2 reports)", 0.0,
         criterion_single_observation_coincidence},
        {9, "bundled sweep configs reproduce the published curve shapes", 300.0,
         criterion_figure_shapes},
        {10, "moment-path capacity equals log-det capacity; miscopied coefficient fails", 0.0,
         criterion_capacity_path},
        {11, "first-moment estimator variance strictly decays from L=4 to L=16", 0.0,
         criterion_variance_decay},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(checker);
        } catch (const std::exception& e) {
            checker.failures.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.budget_seconds > 0.0 && elapsed > criterion.budget_seconds)
            checker.failures.push_back("runtime " + Checker::str(elapsed) + " s exceeds budget " +
                                       Checker::str(criterion.budget_seconds) + " s");

        const bool ok = checker.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("%s  criterion %2d: %s  [%.2f s]\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.summary, elapsed);
        for (const std::string& detail : checker.failures)
            std::printf("      - %s\n", detail.c_str());
    }

    if (failed == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
