#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "morpho/hill_climb.hpp"

namespace morpho {

struct LineageMetrics {
    double m1 = 0.0;  // mean champion worst-environment end distance
    std::optional<double> m2;  // degrees; empty when no run has a champion mutation
    std::optional<double> m3;
    std::optional<double> m4;
    std::size_t runs = 0;
    std::size_t lineage_runs = 0;  // runs contributing to m2..m4
};

/// Angle in degrees between delta and the all-ones vector. Throws for a zero
/// vector.
double angle_to_ones(std::span<const double> delta);

/// Final individual with the smallest worst-environment distance; ties go to
/// the lowest index.
std::size_t champion_index(const LineageLog& log);

/// Per-run lineage statistics of the champion's climber.
struct LineageStats {
    double worst_distance = 0.0;
    std::size_t mutations = 0;
    double mean_angle = 0.0;
    double mean_norm = 0.0;
    double all_positive_fraction = 0.0;
};

LineageStats lineage_stats(const LineageLog& log);

/// Throws if `logs` is empty or a log's environment count differs from k.
LineageMetrics lineage_metrics(std::span<const LineageLog> logs, std::size_t k);

}  // namespace morpho
