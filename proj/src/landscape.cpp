#include "morpho/landscape.hpp"

#include <algorithm>
#include <stdexcept>

#include "morpho/parallel.hpp"

namespace morpho {

namespace {

// (2i - (m - 1)) / (m - 1) * half: exact at the centre and antisymmetric in i.
std::vector<double> even_spacing(int count, double half) {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = 0.0;
        return out;
    }
    const double denom = count - 1;
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (2 * i - (count - 1)) / denom * half;
    return out;
}

template <class M>
M transpose_cells(const M& m) {
    M t = m;
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) t.cells[static_cast<std::size_t>(j) * m.n + i] = m.at(i, j);
    }
    return t;
}

}  // namespace

WeightGrid WeightGrid::make(int n) {
    if (n < 1 || n % 2 == 0) throw std::invalid_argument("weight grid size must be a positive odd number");
    return {n, even_spacing(n, 1.0)};
}

DesignGrid DesignGrid::make(int bins) {
    if (bins < 1) throw std::invalid_argument("design grid needs at least one bin");
    return {bins, even_spacing(bins, 0.5)};
}

std::size_t DesignGrid::size() const {
    const auto b = static_cast<std::size_t>(bins);
    return b * b * b * b;
}

BodyDesign DesignGrid::design(std::size_t index) const {
    if (index >= size()) throw std::out_of_range("design index outside grid");
    const auto b = static_cast<std::size_t>(bins);
    const std::size_t i3 = index % b;
    const std::size_t i2 = (index / b) % b;
    const std::size_t i1 = (index / (b * b)) % b;
    const std::size_t i0 = index / (b * b * b);
    return {{positions[i0], positions[i1]}, {positions[i2], positions[i3]}};
}

SuccessMatrix SuccessMatrix::transposed() const { return transpose_cells(*this); }

OverlapMatrix OverlapMatrix::transposed() const { return transpose_cells(*this); }

void OverlapMatrix::validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("overlap matrix needs n >= 1 and K >= 1");
    if (cells.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("overlap cell count != n^2");
    for (auto c : cells) {
        if (c > k) throw std::invalid_argument("overlap cell exceeds K");
    }
}

std::vector<SuccessMatrix> success_matrices(const BodyDesign& design, const EnvironmentSet& envset,
                                            const WeightGrid& grid, const SimProfile& profile) {
    const auto n = static_cast<std::size_t>(grid.n);
    const std::size_t cells = n * n;
    std::vector<TrialSpec> specs;
    specs.reserve(envset.size() * cells);
    for (const auto& env : envset.environments) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                specs.push_back({design, {grid.values[i], grid.values[j]}, env.start});
            }
        }
    }
    const auto results = run_trials(specs, profile);

    std::vector<SuccessMatrix> out(envset.size(), SuccessMatrix{grid.n, std::vector<std::uint8_t>(cells)});
    for (std::size_t k = 0; k < envset.size(); ++k) {
        for (std::size_t c = 0; c < cells; ++c) out[k].cells[c] = results[k * cells + c].success ? 1 : 0;
    }
    return out;
}

SuccessMatrix success_matrix(const BodyDesign& design, const Environment& env, const WeightGrid& grid,
                             const SimProfile& profile) {
    EnvironmentSet single{{env}};
    return std::move(success_matrices(design, single, grid, profile).front());
}

OverlapMatrix overlap(std::span<const SuccessMatrix> matrices) {
    if (matrices.empty()) throw std::invalid_argument("overlap of zero matrices");
    if (matrices.size() > 255) throw std::invalid_argument("overlap supports at most 255 environments");
    const int n = matrices.front().n;
    OverlapMatrix o{n, static_cast<int>(matrices.size()), std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n)};
    for (const auto& m : matrices) {
        if (m.n != n || m.cells.size() != o.cells.size()) throw std::invalid_argument("success matrix dimension mismatch");
        for (std::size_t c = 0; c < o.cells.size(); ++c) {
            if (m.cells[c] > 1) throw std::invalid_argument("success matrix cell is not binary");
            o.cells[c] = static_cast<std::uint8_t>(o.cells[c] + m.cells[c]);
        }
    }
    return o;
}

std::vector<std::int64_t> level_counts(const OverlapMatrix& o) {
    o.validate();
    std::vector<std::int64_t> g(static_cast<std::size_t>(o.k) + 1, 0);
    for (auto c : o.cells) ++g[c];
    return g;
}

double metric_learnability(const OverlapMatrix& o) {
    const auto g = level_counts(o);
    return static_cast<double>(g.back()) / static_cast<double>(o.cells.size());
}

double metric_interference(const OverlapMatrix& o) {
    const auto g = level_counts(o);
    std::int64_t solved_any = 0;
    for (std::size_t k = 1; k < g.size(); ++k) solved_any += g[k];
    if (solved_any == 0) return 0.0;
    return static_cast<double>(g.back()) / static_cast<double>(solved_any);
}

DesignMetrics design_metrics(const OverlapMatrix& o) {
    const auto g = level_counts(o);
    DesignMetrics m;
    m.counts.assign(g.begin() + 1, g.end());
    m.m_l = metric_learnability(o);
    m.m_ci = metric_interference(o);
    return m;
}

BodyDesign mirror_design(const BodyDesign& design) {
    return {{design.l2.x, -design.l2.y}, {design.l1.x, -design.l1.y}};
}

void sweep_designs(const DesignGrid& dgrid, const WeightGrid& wgrid, const EnvironmentSet& envset,
                   const SimProfile& profile, const SweepOptions& options, const SweepSink& sink) {
    profile.validate();
    if (envset.size() == 0) throw std::invalid_argument("environment set is empty");
    const std::size_t total = dgrid.size();
    const std::size_t block = std::max<std::size_t>(options.block, 1);

    for (std::size_t start = 0; start < total; start += block) {
        const std::size_t count = std::min(block, total - start);
        auto outcomes = parallel_map(count, options.workers, [&](std::size_t offset) {
            const std::size_t index = start + offset;
            const BodyDesign design = dgrid.design(index);
            auto matrices = success_matrices(design, envset, wgrid, profile);
            DesignOutcome outcome;
            outcome.overlap = overlap(matrices);
            outcome.row = {index, design, design_metrics(outcome.overlap)};
            if (options.keep_success) outcome.success = std::move(matrices);
            return outcome;
        });
        for (auto& outcome : outcomes) sink(std::move(outcome));
    }
}

SweepResult sweep_designs(const DesignGrid& dgrid, const WeightGrid& wgrid, const EnvironmentSet& envset,
                          const SimProfile& profile, std::size_t workers) {
    SweepResult result;
    SweepOptions options;
    options.workers = workers;
    sweep_designs(dgrid, wgrid, envset, profile, options, [&](DesignOutcome&& outcome) {
        result.rows.push_back(std::move(outcome.row));
        result.overlaps.push_back(std::move(outcome.overlap));
    });
    return result;
}

std::vector<DesignMetrics> evaluate_designs(std::span<const BodyDesign> designs, const WeightGrid& wgrid,
                                            const EnvironmentSet& envset, const SimProfile& profile,
                                            std::size_t workers) {
    return parallel_map(designs.size(), workers, [&](std::size_t i) {
        const auto matrices = success_matrices(designs[i], envset, wgrid, profile);
        return design_metrics(overlap(matrices));
    });
}

}  // namespace morpho
