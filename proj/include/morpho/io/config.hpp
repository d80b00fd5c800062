#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "morpho/coopt.hpp"
#include "morpho/sim/vehicle.hpp"

namespace morpho {

/// Raised for an unreadable or invalid configuration. `line` and `column` are
/// 1-based and 0 when the problem has no source position (e.g. a flag).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, int column, const std::string& message);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct ProfileSection {
    std::string name = "desk";  // desk, full or custom
    double dt = 0.1;
    int steps = 20000;
    double success_radius = 0.075;
    double sensor_floor = 1e-3;
};

struct LandscapeSection {
    int bins = 5;
    int grid_n = 41;
    bool store_success_matrices = false;
};

struct EnvironmentSection {
    double d = EnvironmentSet::kDiagonalOffset;
    int count = 4;
    /// One heading for every environment, or one per environment.
    std::vector<double> headings{0.0};
};

struct TrainSection {
    std::vector<std::string> methods{"random", "gss", "snes", "de"};
    int seeds = 3;
    int budget = 3000;
    /// Explicit design indices; when empty, `sample` designs are drawn from
    /// the sweep's metrics table at evenly spaced M_L quantiles.
    std::vector<std::size_t> designs;
    int sample = 200;
    std::string metrics;  // metrics.csv path; default <out>/sweep/metrics.csv
};

struct CooptSection {
    int seeds = 15;
    int budget = 5000;
    int dtw_max_points = 500;
};

struct HillclimbSection {
    std::vector<std::string> combinators{"sum", "product", "min"};
    int seeds = 10;
    int pop = 50;
    int generations = 300;
    double m = 0.05;
};

struct ExperimentConfig {
    ProfileSection profile;
    LandscapeSection landscape;
    EnvironmentSection environments;
    TrainSection train;
    CooptSection coopt;
    HillclimbSection hillclimb;
    std::vector<Genome> dtw_genomes;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = MORPHO_WORKERS, then hardware concurrency
    std::string out = "morpho-out";

    SimProfile sim_profile() const;
    EnvironmentSet envset() const;
    /// Throws ConfigError without a position.
    void validate() const;
};

/// Selects a named profile ("desk" or "full"), overwriting dt/steps/radius/floor.
void apply_profile(ExperimentConfig& config, const std::string& name);

/// Parses YAML text; every error names the offending line.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Complete YAML form; parse_config(to_yaml(c)) reproduces c exactly.
std::string to_yaml(const ExperimentConfig& config);

}  // namespace morpho
