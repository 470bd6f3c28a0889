#pragma once

#include "smf/functional.hpp"
#include "smf/solver.hpp"
#include "smf/threshold.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace smf::cli {

struct HTerm {
    enum class Kind { Cosine, Gaussian };
    Kind kind = Kind::Cosine;
    int kx = 0;
    int ky = 0;
    double amp = 0.0;
    double phase = 0.0;
    double sigma = 0.1;
    Point center{0.5, 0.5};
};

struct HSpec {
    double constant = 1.0;
    std::vector<HTerm> terms;
};

ScalarField sample_h(const HSpec& h, int n);

struct RunSpec {
    std::optional<double> rho;
    std::optional<int> steps;
    std::optional<std::uint64_t> seed;
    bool random_start = false;
    double lambda_ceiling = kBlowupCeiling;
    double margin = kDefaultMargin;
    double disk_radius = 0.4;
    double mt_dirichlet = 0.0;  // 0: use 8 pi
    int mt_kmax = 4;
    SolveOptions solver;
};

struct ExperimentConfig {
    int n = 0;
    PsiSpec psi;
    HSpec h;
    std::vector<SingularSource> sources;
    RunSpec run;
    nlohmann::json raw;
    std::string digest;  // FNV-1a 64 of the canonical dump, hex
};

// Raised with every problem found, one "key.path: message" per entry.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Builds the grid and problem; geometric failures are reported as ConfigError.
Problem build_problem(const ExperimentConfig& cfg);

struct Experiment {
    ExperimentConfig config;
    Problem problem;
};

// Parse and build with every error aggregated into one ConfigError.
Experiment load_experiment(const std::string& path);

struct Validated {
    std::optional<Problem> problem;
    std::vector<std::string> errors;
};

// Full validation of a config file; never throws on bad input.
Validated validate_config(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

} // namespace smf::cli
