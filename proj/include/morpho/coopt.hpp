#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "morpho/analysis/stats.hpp"
#include "morpho/sim/vehicle.hpp"

namespace morpho {

/// Sensor placement plus controller: genes (l1.x, l1.y, l2.x, l2.y, w1, w2).
struct Genome {
    BodyDesign design;
    Policy policy;

    friend bool operator==(const Genome&, const Genome&) = default;
};

enum class CooptMode { coopt, baseline };

std::string_view to_string(CooptMode mode);

namespace coopt_hyper {
inline constexpr std::size_t kPopulation = 52;
inline constexpr double kCrossoverRate = 0.9;
inline constexpr double kGeneSwap = 0.5;
inline constexpr double kMutationSigma = 0.05;  // fraction of each gene's range
}  // namespace coopt_hyper

struct CooptConfig {
    int budget = 5000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::size_t dtw_max_points = 500;
};

/// Emitted whenever the running best summed loss or the running maximum of
/// environments solved changes.
struct CooptCheckpoint {
    int eval = 0;
    double best_loss = 0.0;
    int envs_solved = 0;

    friend bool operator==(const CooptCheckpoint&, const CooptCheckpoint&) = default;
};

struct ArchiveEntry {
    int eval = 0;  // 1-based evaluation index; also the entry's identity
    int generation = 0;  // 0 is the initial population
    Genome genome;
    std::vector<double> objectives;  // per-environment closest approach

    friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

struct Admission {
    ArchiveEntry entry;
    double dtw = 0.0;

    friend bool operator==(const Admission&, const Admission&) = default;
};

struct CooptRunRecord {
    CooptMode mode = CooptMode::coopt;
    std::uint64_t seed = 0;
    int budget = 0;
    int evals_used = 0;
    int generations = 0;  // generations after the initial population, the last one possibly partial
    std::vector<CooptCheckpoint> curve;
    std::optional<int> evals_to_full_success;
    std::vector<Admission> admissions;  // in evaluation order
    std::vector<ArchiveEntry> archive;  // final non-dominated set, insertion order
    ArchiveEntry best;  // archive member with the smallest summed objectives

    bool censored() const { return !evals_to_full_success.has_value(); }
    friend bool operator==(const CooptRunRecord&, const CooptRunRecord&) = default;
};

/// a dominates b: a <= b everywhere and a < b somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Unbounded Pareto archive. A newcomer enters unless an existing member is at
/// least as good in every objective; members it dominates are dropped.
class ParetoArchive {
public:
    bool offer(ArchiveEntry entry);
    const std::vector<ArchiveEntry>& entries() const { return entries_; }

private:
    std::vector<ArchiveEntry> entries_;
};

/// Non-dominated fronts, each listing indices in ascending order.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const std::vector<double>> objectives);

/// Crowding distance of each member of one front (boundary members get +inf).
std::vector<double> crowding_distance(std::span<const std::vector<double>> objectives,
                                      std::span<const std::size_t> front);

/// Evolves all six genes. Requires budget >= population size.
CooptRunRecord co_optimize(const EnvironmentSet& envset, const SimProfile& profile, const CooptConfig& config);

/// Same machinery with the design pinned to the canonical placement.
CooptRunRecord baseline_optimize(const EnvironmentSet& envset, const SimProfile& profile,
                                 const CooptConfig& config);

CooptRunRecord run_coopt(CooptMode mode, const EnvironmentSet& envset, const SimProfile& profile,
                         const CooptConfig& config);

/// Mann-Whitney U on evaluations to full success (censored runs at budget + 1),
/// statistic belonging to `a`.
StatResult compare_runs(std::span<const CooptRunRecord> a, std::span<const CooptRunRecord> b);

}  // namespace morpho
