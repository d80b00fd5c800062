#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "morpho/sim/vehicle.hpp"

namespace morpho {

/// n evenly spaced controller weights over [-1, 1], endpoints included.
/// n must be odd so that 0 lies on the grid.
struct WeightGrid {
    int n = 0;
    std::vector<double> values;

    static WeightGrid make(int n);
};

/// `bins` evenly spaced sensor coordinates over [-0.5, 0.5]; a single bin
/// sits at 0. Designs are enumerated row-major over (l1.x, l1.y, l2.x, l2.y).
struct DesignGrid {
    int bins = 0;
    std::vector<double> positions;

    static DesignGrid make(int bins);
    std::size_t size() const;
    BodyDesign design(std::size_t index) const;
};

/// cells[i * n + j] is 1 iff policy (values[i], values[j]) solves the task.
struct SuccessMatrix {
    int n = 0;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }
    SuccessMatrix transposed() const;
    friend bool operator==(const SuccessMatrix&, const SuccessMatrix&) = default;
};

/// Cellwise sum of K success matrices: the number of environments each
/// weight pair solves.
struct OverlapMatrix {
    int n = 0;
    int k = 0;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }
    OverlapMatrix transposed() const;
    void validate() const;
    friend bool operator==(const OverlapMatrix&, const OverlapMatrix&) = default;
};

struct DesignMetrics {
    double m_l = 0.0;
    double m_ci = 0.0;
    std::vector<std::int64_t> counts;  // g_1 .. g_K
};

SuccessMatrix success_matrix(const BodyDesign& design, const Environment& env,
                             const WeightGrid& grid, const SimProfile& profile);

/// One success matrix per environment, integrated in a single batch.
std::vector<SuccessMatrix> success_matrices(const BodyDesign& design, const EnvironmentSet& envset,
                                            const WeightGrid& grid, const SimProfile& profile);

/// Throws std::invalid_argument on an empty list or mismatched sizes.
OverlapMatrix overlap(std::span<const SuccessMatrix> matrices);

/// g_0 .. g_K: how many cells hold each value.
std::vector<std::int64_t> level_counts(const OverlapMatrix& o);

/// g_K / n^2.
double metric_learnability(const OverlapMatrix& o);

/// g_K / (g_1 + ... + g_K), or 0 for a null matrix.
double metric_interference(const OverlapMatrix& o);

DesignMetrics design_metrics(const OverlapMatrix& o);

/// Reflection about the body's long axis: (M l2, M l1) with M(x, y) = (x, -y).
BodyDesign mirror_design(const BodyDesign& design);

struct SweepRow {
    std::size_t index = 0;
    BodyDesign design;
    DesignMetrics metrics;
};

struct DesignOutcome {
    SweepRow row;
    OverlapMatrix overlap;
    std::vector<SuccessMatrix> success;  // filled only when keep_success is set
};

struct SweepOptions {
    std::size_t workers = 1;
    bool keep_success = false;
    /// Designs are computed in blocks of this many and handed to the sink in
    /// index order before the next block starts.
    std::size_t block = 64;
};

/// Receives every design's outcome exactly once, in ascending index order.
using SweepSink = std::function<void(DesignOutcome&&)>;

void sweep_designs(const DesignGrid& dgrid, const WeightGrid& wgrid, const EnvironmentSet& envset,
                   const SimProfile& profile, const SweepOptions& options, const SweepSink& sink);

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<OverlapMatrix> overlaps;
};

SweepResult sweep_designs(const DesignGrid& dgrid, const WeightGrid& wgrid,
                          const EnvironmentSet& envset, const SimProfile& profile,
                          std::size_t workers = 1);

/// Metrics for an arbitrary list of designs (not necessarily on a grid).
std::vector<DesignMetrics> evaluate_designs(std::span<const BodyDesign> designs,
                                            const WeightGrid& wgrid, const EnvironmentSet& envset,
                                            const SimProfile& profile, std::size_t workers = 1);

}  // namespace morpho
