#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "covdesign/design_search.hpp"
#include "covdesign/pcf_models.hpp"
#include "covdesign/point_set.hpp"
#include "covdesign/spectral.hpp"
#include "covdesign/synthesis.hpp"

namespace covdesign::io {

/// Full-precision decimal formatting used by every CSV writer, so reruns
/// with identical inputs are byte-identical.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << body;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

inline void write_profile_csv(const std::filesystem::path& path,
                              const RadialProfile& profile) {
    std::string body = "r,G\n";
    for (std::size_t j = 0; j < profile.values.size(); ++j) {
        body += format_double(profile.grid.points[j]);
        body += ',';
        body += format_double(profile.values[j]);
        body += '\n';
    }
    write_text(path, body);
}

inline void write_spectrum_csv(const std::filesystem::path& path,
                               const SpectrumProfile& spectrum) {
    std::string body = "k,P\n";
    for (std::size_t j = 0; j < spectrum.values.size(); ++j) {
        body += format_double(spectrum.grid.points[j]);
        body += ',';
        body += format_double(spectrum.values[j]);
        body += '\n';
    }
    write_text(path, body);
}

/// Point-set CSV: one row per point, d columns, no header.
inline void write_points_csv(const std::filesystem::path& path,
                             const PointSet& points) {
    std::string body;
    for (int i = 0; i < points.n; ++i) {
        for (int p = 0; p < points.d; ++p) {
            if (p) body += ',';
            body += format_double(points.at(i, p));
        }
        body += '\n';
    }
    write_text(path, body);
}

inline PointSet read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    PointSet points;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int columns = 0;
        while (std::getline(row, cell, ',')) {
            points.coords.push_back(std::stod(cell));
            ++columns;
        }
        if (points.d == 0) points.d = columns;
        if (columns != points.d)
            throw std::runtime_error("ragged point CSV: " + path.string());
        ++points.n;
    }
    return points;
}

/// Key/value structured text (one `key = value` per line, # comments).
inline std::map<std::string, std::string> read_kv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::map<std::string, std::string> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto begin = s.find_first_not_of(" \t\r");
            const auto end = s.find_last_not_of(" \t\r");
            if (begin == std::string::npos) return std::string();
            return s.substr(begin, end - begin + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) values[key] = value;
    }
    return values;
}

inline void write_coverage_report(const std::filesystem::path& path,
                                  const CoverageReport& report,
                                  const DesignSpec& spec) {
    std::string body;
    body += "family = " + std::string(family_name(report.params.family)) + "\n";
    body += "n = " + std::to_string(spec.n) + "\n";
    body += "d = " + std::to_string(spec.d) + "\n";
    body += "r_min = " + format_double(report.params.r_min) + "\n";
    body += "r_1 = " + format_double(report.params.r_1) + "\n";
    body += "p0 = " + format_double(report.params.p0) + "\n";
    body += "amplitude = " + format_double(report.params.amplitude) + "\n";
    body += "decay = " + format_double(report.params.decay) + "\n";
    body += "frequency = " + format_double(report.params.frequency) + "\n";
    body += "phase = " + format_double(report.params.phase) + "\n";
    body += "rho = " + format_double(report.rho) + "\n";
    body += "feasible = " + std::string(report.feasible ? "true" : "false") + "\n";
    body += "min_power = " + format_double(report.min_power) + "\n";
    write_text(path, body);
}

struct StoredDesign {
    DesignSpec spec;
    PcfParams params;
};

inline StoredDesign read_design_params(const std::filesystem::path& path) {
    const auto kv = read_kv(path);
    auto require = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error("missing key '" + key + "' in " + path.string());
        return it->second;
    };
    StoredDesign stored;
    stored.spec.n = std::stoi(require("n"));
    stored.spec.d = std::stoi(require("d"));
    const std::string family = require("family");
    if (family == "pds")
        stored.params.family = PcfFamily::kPds;
    else if (family == "sfsd")
        stored.params.family = PcfFamily::kSfsd;
    else if (family == "proposed")
        stored.params.family = PcfFamily::kProposed;
    else
        throw std::runtime_error("unknown family in " + path.string());
    stored.params.r_min = std::stod(require("r_min"));
    stored.params.r_1 = std::stod(require("r_1"));
    stored.params.p0 = std::stod(require("p0"));
    stored.params.amplitude = std::stod(require("amplitude"));
    stored.params.decay = std::stod(require("decay"));
    stored.params.frequency = std::stod(require("frequency"));
    stored.params.phase = std::stod(require("phase"));
    return stored;
}

/// Runtime configuration: every module default in one key/value schema.
/// Unknown keys are rejected; command-line flags take precedence.
class RunConfig {
public:
    RunConfig() {
        values_ = {
            {"radial.m", "200"},
            {"radial.cut_scale", "3"},
            {"spectral.m_k", "1000"},
            {"spectral.k_min", "1"},
            {"spectral.k_max_scale", "10"},
            {"realizability.tolerance", "1e-6"},
            {"search.step_scale", "0.001"},
            {"search.max_iters", "10000"},
            {"search.search_max_iters", "1200"},
            {"search.p0_min", "1.0"},
            {"search.p0_max", "2.5"},
            {"search.p0_step", "0.05"},
            {"search.exhaustive", "0"},
            {"search.exhaustive_steps", "3"},
            {"osc.amplitude", "0.5"},
            {"osc.decay", "4"},
            {"osc.frequency", "300"},
            {"osc.phase", "0"},
            {"estimator.sigma_scale", "0.25"},
            {"synth.t_max", "1000"},
            {"synth.clr_rate", "0.01"},
            {"synth.sigma_scale", "2"},
            {"synth.refresh_every", "50"},
            {"dart.max_failures", "100000"},
            {"eval.trials", "20"},
            {"eval.test_target", "10000"},
            {"eval.knn_k", "5"},
            {"eval.trees", "100"},
            {"eval.tree_depth", "12"},
            {"gp.length_scale", "0.2"},
            {"gp.signal_variance", "1"},
            {"gp.noise_variance", "1e-6"},
            {"seqopt.init", "50"},
            {"seqopt.budget", "150"},
            {"seqopt.candidate_pool", "2048"},
        };
    }

    void load(const std::filesystem::path& path) {
        for (const auto& [key, value] : read_kv(path)) {
            if (!values_.count(key))
                throw std::invalid_argument("unknown config key: " + key);
            values_[key] = value;
        }
    }

    void set(const std::string& key, const std::string& value) {
        if (!values_.count(key))
            throw std::invalid_argument("unknown config key: " + key);
        values_[key] = value;
    }

    double number(const std::string& key) const {
        return std::stod(values_.at(key));
    }
    int integer(const std::string& key) const { return std::stoi(values_.at(key)); }

    SearchOptions search_options() const {
        SearchOptions options;
        options.max_iters = integer("search.max_iters");
        options.search_max_iters = integer("search.search_max_iters");
        options.m_k = integer("spectral.m_k");
        options.exhaustive_oscillations = integer("search.exhaustive") != 0;
        options.exhaustive_steps = integer("search.exhaustive_steps");
        return options;
    }

    std::vector<double> p0_grid() const {
        std::vector<double> grid;
        const double lo = number("search.p0_min");
        const double hi = number("search.p0_max");
        const double step = number("search.p0_step");
        for (double p0 = lo; p0 <= hi + 1e-12; p0 += step) grid.push_back(p0);
        return grid;
    }

    PcfParams oscillation_defaults() const {
        PcfParams osc;
        osc.amplitude = number("osc.amplitude");
        osc.decay = number("osc.decay");
        osc.frequency = number("osc.frequency");
        osc.phase = number("osc.phase");
        return osc;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace covdesign::io
