// io.cpp
//
// CSV/JSON serialization for matrices, reports, configs, and sweep tables.

#include "freemimo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace freemimo::io {

namespace {

// Strict locale-independent double parse of the whole token.
double parse_real_token(std::string_view token, const std::string& context) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size())
        throw std::runtime_error(context + ": bad number '" + std::string(token) + "'");
    return value;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// "a+bi" / "a-bi" (exponents allowed in both parts); a bare real is accepted
// with zero imaginary part.
std::complex<double> parse_complex_entry(std::string_view token, const std::string& context) {
    token = trimmed(token);
    if (token.empty()) throw std::runtime_error(context + ": empty entry");
    if (token.back() != 'i') return {parse_real_token(token, context), 0.0};

    token.remove_suffix(1);  // drop 'i'
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i < token.size(); ++i) {
        const char c = token[i];
        const char prev = token[i - 1];
        if ((c == '+' || c == '-') && prev != 'e' && prev != 'E') split = i;
    }
    if (split == std::string_view::npos)
        throw std::runtime_error(context + ": expected 'a+bi' entry, got '" + std::string(token) + "i'");
    const double re = parse_real_token(token.substr(0, split), context);
    const double im = parse_real_token(token.substr(split), context);
    return {re, im};
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

std::string format_double(double v) {
    char buffer[32];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    (void)ec;  // cannot fail with this buffer size
    return std::string(buffer, end);
}

Eigen::MatrixXcd read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing 'n,m' header");
    const auto header = split_commas(trimmed(line));
    if (header.size() != 2) throw std::runtime_error(path + ": header must be 'n,m'");
    const int n = static_cast<int>(parse_real_token(trimmed(header[0]), path + " header"));
    const int m = static_cast<int>(parse_real_token(trimmed(header[1]), path + " header"));
    if (n < 1 || m < 1) throw std::runtime_error(path + ": dimensions must be positive");

    Eigen::MatrixXcd M(n, m);
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error(path + ": expected " + std::to_string(n) + " rows");
        const auto fields = split_commas(trimmed(line));
        if (static_cast<int>(fields.size()) != m)
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " has " +
                                     std::to_string(fields.size()) + " entries, expected " +
                                     std::to_string(m));
        for (int j = 0; j < m; ++j) {
            const std::complex<double> value =
                parse_complex_entry(fields[static_cast<std::size_t>(j)],
                                    path + " row " + std::to_string(i + 1));
            if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
                throw std::runtime_error(path + ": non-finite entry");
            M(i, j) = value;
        }
    }
    while (std::getline(in, line))
        if (!trimmed(line).empty()) throw std::runtime_error(path + ": trailing data after matrix");
    return M;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& M) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file '" + path + "'");
    out << M.rows() << ',' << M.cols() << '\n';
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            const std::complex<double> value = M(i, j);
            if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
                throw std::runtime_error("write_matrix_csv: non-finite entry");
            if (j > 0) out << ',';
            out << format_double(value.real()) << (std::signbit(value.imag()) ? '-' : '+')
                << format_double(std::abs(value.imag())) << 'i';
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string model_name(Model model) {
    return model == Model::phase_impaired ? "phase_impaired" : "plain";
}

Model model_from_name(const std::string& name) {
    if (name == "plain") return Model::plain;
    if (name == "phase_impaired" || name == "phase") return Model::phase_impaired;
    throw std::runtime_error("unknown model '" + name + "' (expected plain or phase_impaired)");
}

Estimator estimator_from_name(const std::string& name) {
    if (name == "Cf") return Estimator::Cf;
    if (name == "CG") return Estimator::CG;
    if (name == "C1") return Estimator::C1;
    if (name == "C2") return Estimator::C2;
    if (name == "C3") return Estimator::C3;
    throw std::runtime_error("unknown estimator '" + name + "' (expected Cf, CG, C1, C2 or C3)");
}

nlohmann::json report_to_json(const EstimationReport& report) {
    nlohmann::json j;
    j["estimator"] = estimator_name(report.estimator);
    j["capacity"] = report.capacity;
    if (report.moments) j["moments"] = report.moments->values;
    nlohmann::json flags = nlohmann::json::array();
    if (report.clamped) flags.push_back("clamped");
    if (report.negative_moment) flags.push_back("negative_moment");
    if (report.stacking_invalid_for_model) flags.push_back("stacking_invalid_for_model");
    j["flags"] = flags;
    return j;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
    if (!j.is_object()) throw std::runtime_error("config: expected a JSON object");

    const auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw std::runtime_error(std::string("config: missing key '") + key + "'");
        return j.at(key);
    };
    const auto int_list = [](const nlohmann::json& v, const char* key) {
        std::vector<int> out;
        if (v.is_array())
            for (const auto& e : v) out.push_back(e.get<int>());
        else
            out.push_back(v.get<int>());
        if (out.empty()) throw std::runtime_error(std::string("config: '") + key + "' is empty");
        return out;
    };
    const auto double_list = [](const nlohmann::json& v, const char* key) {
        std::vector<double> out;
        if (v.is_array())
            for (const auto& e : v) out.push_back(e.get<double>());
        else
            out.push_back(v.get<double>());
        if (out.empty()) throw std::runtime_error(std::string("config: '") + key + "' is empty");
        return out;
    };

    ExperimentConfig cfg;
    try {
        cfg.n = require("n").get<int>();
        cfg.m = require("m").get<int>();
        cfg.rank = require("rank").get<int>();
        cfg.trials = require("trials").get<std::int64_t>();
        cfg.seed = require("seed").get<std::uint64_t>();
        cfg.L_values = int_list(require("L"), "L");
        cfg.sigma2_values = double_list(require("sigma2"), "sigma2");
        cfg.model = j.contains("model") ? model_from_name(j.at("model").get<std::string>())
                                        : Model::plain;
        cfg.force_stacking = j.value("force_stacking", false);

        if (j.contains("estimators")) {
            for (const auto& name : j.at("estimators"))
                cfg.estimators.push_back(estimator_from_name(name.get<std::string>()));
        } else {
            cfg.estimators = {Estimator::Cf, Estimator::CG, Estimator::C1, Estimator::C2,
                              Estimator::C3};
        }

        if (j.contains("sweep")) {
            const std::string sweep = j.at("sweep").get<std::string>();
            if (sweep == "L")
                cfg.sweep = ExperimentConfig::Sweep::over_L;
            else if (sweep == "sigma2")
                cfg.sweep = ExperimentConfig::Sweep::over_sigma;
            else
                throw std::runtime_error("config: sweep must be 'L' or 'sigma2'");
        } else {
            // Infer the axis: whichever list has several entries is the sweep.
            cfg.sweep = cfg.sigma2_values.size() > 1 ? ExperimentConfig::Sweep::over_sigma
                                                     : ExperimentConfig::Sweep::over_L;
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }

    cfg.validate();
    return cfg;
}

std::string sweep_table_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "sweep_value,estimator,mean_capacity,se_capacity,true_capacity,"
           "mean_m1,mean_m2,mean_m3,mean_m4,flags_count\n";
    for (const SweepRow& row : result.rows) {
        out << format_double(row.sweep_value) << ',' << estimator_name(row.estimator) << ','
            << format_double(row.mean_capacity) << ',' << format_double(row.se_capacity) << ','
            << format_double(row.true_capacity);
        for (double mean_m : row.mean_moments) {
            out << ',';
            if (!std::isnan(mean_m)) out << format_double(mean_m);
        }
        out << ',' << row.flags_count << '\n';
    }
    return out.str();
}

}  // namespace freemimo::io
