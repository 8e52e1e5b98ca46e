#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/analysis.hpp"
#include "geoflow/metric.hpp"

namespace geoflow {

/// Standalone profile request for the riccati subcommand.
struct ProfileSpec {
    std::string kind = "constant";  // constant | fourier | sampled | matrix-diag
    double value = -1.0;            // constant K
    double period = 1.0;
    std::vector<double> cos_coef, sin_coef;  // fourier
    std::string csv_path;                    // sampled
    std::vector<double> diag;                // matrix-diag pinching entries
    std::optional<double> bound_b, bound_c;

    CurvatureProfile build() const;
};

/// Parsed experiment configuration (flat key-value file with [sections]).
struct ExperimentConfig {
    // [group]
    std::string group_kind = "schottky";
    double wall_foot = 0.6;
    // [metric]
    double base_curvature = -1.0;
    double epsilon = 0.0;
    std::string bump_profile = "poly";  // poly | smooth
    std::vector<Bump> bumps;
    // [integrator]
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double flow_output_dt = 0.005;
    int riccati_samples_per_period = 2048;
    // [census]
    int census_max_word_length = 4;
    // [rigidity]
    std::vector<double> epsilon_ladder;  // defaults to {epsilon}
    double oracle_periods = 500.0;
    // [entropy]
    std::size_t mc_samples = 200;
    double horizon = 50.0;
    double min_resident = 2.0;
    int entropy_max_word_length = 6;
    // [output]
    std::string output_dir = "out";
    // [run]
    std::uint64_t seed = 12345;
    int threads = 1;
    // [profile] (riccati subcommand only)
    ProfileSpec profile;

    std::shared_ptr<const FuchsianGroup> make_group_ptr() const;
    ConformalMetric make_metric() const;
    RigidityOptions rigidity_options() const;
    EntropyOptions entropy_options() const;
};

/// Parse a config file.  Unknown sections or keys raise ConfigError naming
/// the offending key; so do malformed numbers and invariant violations
/// (non-positive tolerances, unsorted epsilon ladder).
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace geoflow
