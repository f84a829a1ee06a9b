// io.hpp
//
// File formats and serialization for the CLI: complex matrices as CSV with
// an "n,m" dimension header and "a+bi" entries, estimation reports as JSON,
// experiment configs as JSON, and sweep tables as CSV. All floating point is
// written with 17 significant digits so a write/read round trip is exact.

#pragma once

#include <json.hpp>

#include <Eigen/Dense>
#include <string>

#include "freemimo/estimators.hpp"
#include "freemimo/simulate.hpp"

namespace freemimo::io {

// Shortest-exact decimal formatting (up to 17 significant digits).
std::string format_double(double v);

// Matrix CSV: first line "n,m" (the dimensions), then n row-major lines of m
// comma-separated complex entries "a+bi" / "a-bi". Readers throw
// std::runtime_error with a descriptive message on malformed input.
Eigen::MatrixXcd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& M);

std::string model_name(Model model);
Model model_from_name(const std::string& name);
Estimator estimator_from_name(const std::string& name);

// {"estimator": "...", "capacity": ..., "moments": [...], "flags": [...]}
// (moments omitted for the classical estimators).
nlohmann::json report_to_json(const EstimationReport& report);

// Parses and validates an experiment config. The sweep axis ("L" or
// "sigma2") may be a JSON array; the other must be a scalar.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

// Sweep table CSV with the fixed column set
// sweep_value,estimator,mean_capacity,se_capacity,true_capacity,
// mean_m1..mean_m4,flags_count. Moment cells are empty for the classical
// estimators.
std::string sweep_table_csv(const ExperimentResult& result);

}  // namespace freemimo::io
