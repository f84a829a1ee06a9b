// freemimo.cpp
//
// Command-line front end. Three subcommands:
//   estimate    run capacity estimators on stored observation matrices
//   experiment  run a Monte Carlo sweep described by a JSON config
//   oracle      dump the exact combinatorial reference values
// Exit codes: 0 success, 1 input/parse error, 2 estimator-applicability
// error (e.g. stacking requested where it is invalid).

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "freemimo/estimators.hpp"
#include "freemimo/io.hpp"
#include "freemimo/simulate.hpp"
#include "freemimo/wishart_oracle.hpp"

namespace {

using freemimo::ApplicabilityError;
using freemimo::Estimator;
using freemimo::EstimationReport;
using freemimo::ObservationBatch;

int run_estimate(const std::vector<std::string>& files, double sigma2, int rank,
                 const std::string& model, const std::vector<std::string>& estimator_names,
                 bool force) {
    ObservationBatch batch;
    batch.sigma2 = sigma2;
    batch.model = freemimo::io::model_from_name(model);
    for (const std::string& path : files) {
        Eigen::MatrixXcd M = freemimo::io::read_matrix_csv(path);
        if (batch.observations.empty()) {
            batch.n = static_cast<int>(M.rows());
            batch.m = static_cast<int>(M.cols());
        } else if (M.rows() != batch.n || M.cols() != batch.m) {
            throw std::runtime_error("observation dimensions differ between '" + files.front() +
                                     "' and '" + path + "'");
        }
        batch.observations.push_back(std::move(M));
    }

    std::vector<Estimator> estimators;
    estimators.reserve(estimator_names.size());
    for (const std::string& name : estimator_names)
        estimators.push_back(freemimo::io::estimator_from_name(name));

    const bool wants_classical = std::any_of(estimators.begin(), estimators.end(), [](Estimator e) {
        return e == Estimator::C1 || e == Estimator::C2 || e == Estimator::C3;
    });
    std::array<EstimationReport, 3> classical;
    if (wants_classical) classical = freemimo::classical_estimators(batch);

    nlohmann::json out = nlohmann::json::array();
    for (Estimator which : estimators) {
        EstimationReport report;
        switch (which) {
            case Estimator::Cf: report = freemimo::capacity_estimate(batch, rank, which, force); break;
            case Estimator::CG: report = freemimo::capacity_estimate(batch, rank, which); break;
            case Estimator::C1: report = classical[0]; break;
            case Estimator::C2: report = classical[1]; break;
            case Estimator::C3: report = classical[2]; break;
        }
        out.push_back(freemimo::io::report_to_json(report));
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_path) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config '" + config_path + "'");
    nlohmann::json config_json;
    try {
        config_json = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(config_path + ": " + e.what());
    }

    const freemimo::ExperimentConfig cfg = freemimo::io::parse_experiment_config(config_json);
    const freemimo::ExperimentResult result = freemimo::run_experiment(cfg);
    const std::string csv = freemimo::io::sweep_table_csv(result);

    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << csv;
        if (!out) throw std::runtime_error("write failed for '" + out_path + "'");
    }
    return 0;
}

std::string format_classes(const std::vector<std::vector<int>>& classes) {
    std::ostringstream out;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (c > 0) out << ' ';
        out << '{';
        for (std::size_t i = 0; i < classes[c].size(); ++i) {
            if (i > 0) out << ' ';
            out << classes[c][i];
        }
        out << '}';
    }
    return out.str();
}

int run_oracle_table(int p) {
    std::vector<int> pi(static_cast<std::size_t>(p));
    std::iota(pi.begin(), pi.end(), 1);
    std::cout << "pi,classes,k,l\n";
    do {
        const freemimo::PairedPermutation paired = freemimo::equivalence_classes(pi);
        for (std::size_t i = 0; i < pi.size(); ++i)
            std::cout << (i > 0 ? " " : "") << pi[i];
        std::cout << ',' << format_classes(paired.classes) << ',' << paired.k_classes << ','
                  << paired.l_classes << '\n';
    } while (std::next_permutation(pi.begin(), pi.end()));
    return 0;
}

int run_oracle_moments(int n, int N, int p) {
    std::cout << freemimo::expected_wishart_moment(n, N, p) << '\n';
    return 0;
}

int run_oracle_verify(int n, int m, int rank, double sigma2, std::int64_t trials,
                      std::uint64_t seed) {
    const auto rows = freemimo::verify_expected_moments(n, m, rank, sigma2, trials, seed);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        out.push_back({{"j", row.j},
                       {"empirical_mean", row.empirical_mean},
                       {"closed_form", row.closed_form},
                       {"standard_error", row.standard_error},
                       {"z", row.z}});
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIMO channel capacity estimation from noisy observations"};
    app.require_subcommand(1);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Estimate capacity from observation files");
    std::vector<std::string> files;
    double sigma2 = 0.0;
    int rank = 0;
    std::string model = "plain";
    std::vector<std::string> estimator_names = {"Cf", "CG", "C1", "C2", "C3"};
    bool force = false;
    estimate->add_option("files", files, "Observation matrix CSV files")->required();
    estimate->add_option("--sigma2", sigma2, "Known noise variance (> 0)")
        ->required()
        ->check(CLI::PositiveNumber);
    estimate->add_option("--rank", rank, "Channel rank (1..4 for Cf/CG)")->required();
    estimate->add_option("--model", model, "Observation model: plain or phase_impaired");
    estimate->add_option("--estimators", estimator_names, "Subset of Cf,CG,C1,C2,C3")
        ->delimiter(',');
    estimate->add_flag("--force", force, "Run Cf even where stacking is invalid (flagged)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo sweep from a config");
    std::string config_path;
    std::string out_path;
    experiment->add_option("--config", config_path, "Experiment config JSON")->required();
    experiment->add_option("--out", out_path, "Output CSV path (stdout when omitted)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact combinatorial reference values");
    std::string table;
    std::vector<int> moments_args;
    std::vector<double> verify_args;
    oracle->add_option("--table", table, "Permutation class table: s3 or s4")
        ->check(CLI::IsMember({"s3", "s4"}));
    oracle->add_option("--moments", moments_args,
                       "n N p: exact expected Gram trace moment as a rational")
        ->expected(3);
    oracle->add_option("--verify-moments", verify_args,
                       "n m rank sigma2 trials seed: Monte Carlo check of the closed forms")
        ->expected(6);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse CLI11's per-error exit codes onto the documented contract:
        // anything that is not a clean help/version exit is an input error.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (estimate->parsed())
            return run_estimate(files, sigma2, rank, model, estimator_names, force);
        if (experiment->parsed()) return run_experiment_cmd(config_path, out_path);
        if (oracle->parsed()) {
            const int selected = (!table.empty() ? 1 : 0) + (!moments_args.empty() ? 1 : 0) +
                                 (!verify_args.empty() ? 1 : 0);
            if (selected != 1)
                throw std::runtime_error(
                    "oracle: pass exactly one of --table, --moments, --verify-moments");
            if (!table.empty()) return run_oracle_table(table == "s3" ? 3 : 4);
            if (!moments_args.empty()) {
                if (moments_args[2] > 8) {
                    std::cerr << "error: moment order p = " << moments_args[2]
                              << " exceeds the supported maximum of 8\n";
                    return 2;
                }
                return run_oracle_moments(moments_args[0], moments_args[1], moments_args[2]);
            }
            return run_oracle_verify(static_cast<int>(verify_args[0]),
                                     static_cast<int>(verify_args[1]),
                                     static_cast<int>(verify_args[2]), verify_args[3],
                                     static_cast<std::int64_t>(verify_args[4]),
                                     static_cast<std::uint64_t>(verify_args[5]));
        }
    } catch (const ApplicabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
