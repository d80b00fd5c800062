#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "morpho/sim/vehicle.hpp"

namespace morpho {

enum class FitnessCombinator { sum, product, min };

std::string_view to_string(FitnessCombinator kind);
FitnessCombinator parse_combinator(std::string_view name);

/// Sum, product or minimum of the per-environment fitnesses. Throws on an
/// empty vector.
double combine_fitness(FitnessCombinator kind, std::span<const double> f);

/// 1 / max(end_distance, success_radius)^2
double environment_fitness(double end_distance, double success_radius);

/// -(child - parent), componentwise. Positive entries are improvements.
std::vector<double> delta_distances(std::span<const double> parent, std::span<const double> child);

struct MutationEvent {
    int generation = 0;  // generation that produced the child, 1-based
    std::size_t climber = 0;
    std::vector<double> parent_distances;
    std::vector<double> child_distances;
    std::vector<double> delta;
    double fitness_before = 0.0;
    double fitness_after = 0.0;

    friend bool operator==(const MutationEvent&, const MutationEvent&) = default;
};

struct HillClimbConfig {
    FitnessCombinator kind = FitnessCombinator::sum;
    int pop = 50;
    int generations = 300;
    double m = 0.05;  // mutation standard deviation
    std::uint64_t seed = 1;
    BodyDesign design = BodyDesign::canonical();

    void validate() const;
};

struct LineageLog {
    FitnessCombinator kind = FitnessCombinator::sum;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    int generations = 0;
    /// events[c] holds climber c's accepted mutations in generation order.
    std::vector<std::vector<MutationEvent>> events;
    std::vector<Policy> initial_policies;
    std::vector<Policy> final_policies;
    std::vector<double> final_fitness;
    std::vector<std::vector<double>> final_distances;
    /// fitness_trace[c][g]: climber c's combined fitness after generation g
    /// (g = 0 is the initial population).
    std::vector<std::vector<double>> fitness_trace;

    friend bool operator==(const LineageLog&, const LineageLog&) = default;
};

/// Parallel hill climber over the two controller weights. Climber c draws from
/// its own stream of `seed`, so the log does not depend on evaluation order.
LineageLog hill_climb(const EnvironmentSet& envset, const SimProfile& profile, const HillClimbConfig& config);

}  // namespace morpho
