#include <cmath>

#include <gtest/gtest.h>

#include "morpho/landscape.hpp"
#include "morpho/rng.hpp"

using namespace morpho;

namespace {

SuccessMatrix matrix(int n, std::vector<std::uint8_t> cells) { return {n, std::move(cells)}; }

SimProfile quick() { return {0.1, 3000, 0.075, 1e-3}; }

}  // namespace

TEST(Landscape, WeightGrid) {
    const auto g = WeightGrid::make(5);
    EXPECT_EQ(g.values, (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
    EXPECT_EQ(WeightGrid::make(1).values, std::vector<double>{0.0});
    EXPECT_THROW(WeightGrid::make(4), std::invalid_argument);
    EXPECT_THROW(WeightGrid::make(0), std::invalid_argument);
    EXPECT_EQ(WeightGrid::make(41).values[20], 0.0);
}

TEST(Landscape, DesignGrid) {
    const auto g = DesignGrid::make(5);
    EXPECT_EQ(g.size(), 625u);
    EXPECT_EQ(g.design(0), (BodyDesign{{-0.5, -0.5}, {-0.5, -0.5}}));
    EXPECT_EQ(g.design(624), (BodyDesign{{0.5, 0.5}, {0.5, 0.5}}));
    // Row-major over (l1.x, l1.y, l2.x, l2.y): canonical is (4, 4, 4, 0).
    EXPECT_EQ(g.design(4 * 125 + 4 * 25 + 4 * 5 + 0), BodyDesign::canonical());
    EXPECT_THROW(g.design(625), std::out_of_range);
    const auto one = DesignGrid::make(1);
    EXPECT_EQ(one.size(), 1u);
    EXPECT_EQ(one.design(0), (BodyDesign{{0, 0}, {0, 0}}));
}

TEST(Landscape, OverlapAndMetricsWorkedExample) {
    // Overlap [[4,1],[0,2]] with K = 4.
    const std::vector<SuccessMatrix> m = {
        matrix(2, {1, 1, 0, 1}), matrix(2, {1, 0, 0, 1}), matrix(2, {1, 0, 0, 0}), matrix(2, {1, 0, 0, 0})};
    const auto o = overlap(m);
    EXPECT_EQ(o.cells, (std::vector<std::uint8_t>{4, 1, 0, 2}));
    EXPECT_EQ(level_counts(o), (std::vector<std::int64_t>{1, 1, 1, 0, 1}));
    EXPECT_DOUBLE_EQ(metric_learnability(o), 0.25);
    EXPECT_DOUBLE_EQ(metric_interference(o), 1.0 / 3.0);
}

TEST(Landscape, NullMatrixHasZeroMetrics) {
    const std::vector<SuccessMatrix> m = {matrix(2, {0, 0, 0, 0}), matrix(2, {0, 0, 0, 0})};
    const auto o = overlap(m);
    EXPECT_EQ(metric_learnability(o), 0.0);
    EXPECT_EQ(metric_interference(o), 0.0);
}

TEST(Landscape, OverlapRejectsBadInput) {
    EXPECT_THROW(overlap(std::vector<SuccessMatrix>{}), std::invalid_argument);
    const std::vector<SuccessMatrix> mismatch = {matrix(2, {0, 0, 0, 0}), matrix(1, {1})};
    EXPECT_THROW(overlap(mismatch), std::invalid_argument);
    const std::vector<SuccessMatrix> nonbinary = {matrix(1, {2})};
    EXPECT_THROW(overlap(nonbinary), std::invalid_argument);
}

TEST(Landscape, MetricsMatchBruteForceOnRandomMatrices) {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + 2 * static_cast<int>(rng.below(5));
        const int k = 1 + static_cast<int>(rng.below(4));
        const double density = rng.uniform();
        std::vector<SuccessMatrix> ms;
        for (int e = 0; e < k; ++e) {
            SuccessMatrix s{n, std::vector<std::uint8_t>(n * n)};
            for (auto& c : s.cells) c = rng.uniform() < density;
            ms.push_back(s);
        }
        const auto o = overlap(ms);
        int full = 0, any = 0;
        for (int c = 0; c < n * n; ++c) {
            int sum = 0;
            for (const auto& s : ms) sum += s.cells[c];
            ASSERT_EQ(o.cells[c], sum);
            full += sum == k;
            any += sum > 0;
        }
        const auto m = design_metrics(o);
        EXPECT_DOUBLE_EQ(m.m_l, static_cast<double>(full) / (n * n));
        EXPECT_DOUBLE_EQ(m.m_ci, any == 0 ? 0.0 : static_cast<double>(full) / any);
        EXPECT_GE(m.m_l, 0.0);
        EXPECT_LE(m.m_l, 1.0);
        EXPECT_LE(m.m_l, m.m_ci);
        std::int64_t total = 0;
        for (auto g : level_counts(o)) total += g;
        EXPECT_EQ(total, n * n);
    }
}

TEST(Landscape, MirrorDesign) {
    EXPECT_EQ(mirror_design(BodyDesign::canonical()), BodyDesign::canonical());
    const BodyDesign d{{0.1, 0.2}, {-0.3, 0.4}};
    EXPECT_EQ(mirror_design(d), (BodyDesign{{-0.3, -0.4}, {0.1, -0.2}}));
    EXPECT_EQ(mirror_design(mirror_design(d)), d);
}

TEST(Landscape, MirroredDesignHasTransposedOverlap) {
    // The mirror swaps the weight roles and mirrors the environment set,
    // which the diagonal set maps onto itself.
    const auto grid = WeightGrid::make(11);
    const auto envs = EnvironmentSet::diagonal();
    Rng rng(4);
    for (int t = 0; t < 3; ++t) {
        const BodyDesign d{{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)},
                           {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}};
        const auto a = overlap(success_matrices(d, envs, grid, quick()));
        const auto b = overlap(success_matrices(mirror_design(d), envs, grid, quick()));
        EXPECT_EQ(a.transposed(), b);
    }
}

TEST(Landscape, CoincidentSensorsNeverSucceed) {
    // Equal readings give zero turning rate: the robot only drives straight.
    const auto envs = EnvironmentSet::diagonal();
    const BodyDesign same{{0.2, 0.1}, {0.2, 0.1}};
    const auto o = overlap(success_matrices(same, envs, WeightGrid::make(7), quick()));
    EXPECT_EQ(metric_learnability(o), 0.0);
}

TEST(Landscape, SuccessMatricesMatchPerEnvironment) {
    const auto envs = EnvironmentSet::diagonal();
    const auto grid = WeightGrid::make(5);
    const auto all = success_matrices(BodyDesign::canonical(), envs, grid, quick());
    for (std::size_t k = 0; k < envs.size(); ++k) {
        EXPECT_EQ(all[k], success_matrix(BodyDesign::canonical(), envs[k], grid, quick()));
    }
    // Cell (i, j) means policy (values[i], values[j]).
    const auto r = simulate(BodyDesign::canonical(), {grid.values[4], grid.values[1]}, envs[0], quick(), Traces::skip);
    EXPECT_EQ(all[0].at(4, 1), r.success ? 1 : 0);
}

TEST(Landscape, SweepIsDeterministicAndOrdered) {
    const auto dg = DesignGrid::make(2);
    const auto wg = WeightGrid::make(3);
    const auto envs = EnvironmentSet::diagonal();
    const auto a = sweep_designs(dg, wg, envs, quick(), 1);
    const auto b = sweep_designs(dg, wg, envs, quick(), 3);
    ASSERT_EQ(a.rows.size(), 16u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].index, i);
        EXPECT_EQ(a.rows[i].design, dg.design(i));
        EXPECT_EQ(a.rows[i].metrics.m_l, b.rows[i].metrics.m_l);
        EXPECT_EQ(a.overlaps[i], b.overlaps[i]);
    }

    std::vector<std::size_t> seen;
    sweep_designs(dg, wg, envs, quick(), {2, true, 5}, [&](DesignOutcome&& o) {
        seen.push_back(o.row.index);
        EXPECT_EQ(o.success.size(), 4u);
        EXPECT_EQ(overlap(o.success), o.overlap);
    });
    ASSERT_EQ(seen.size(), 16u);
    for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], i);
}

TEST(Landscape, SingleBinSweep) {
    const auto r = sweep_designs(DesignGrid::make(1), WeightGrid::make(3), EnvironmentSet::diagonal(), quick(), 1);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].metrics.m_l, 0.0);
    EXPECT_THROW(sweep_designs(DesignGrid::make(1), WeightGrid::make(3), EnvironmentSet{}, quick(), 1),
                 std::invalid_argument);
}

TEST(Landscape, EvaluateDesignsMatchesSweep) {
    const auto dg = DesignGrid::make(2);
    const auto wg = WeightGrid::make(3);
    const auto envs = EnvironmentSet::diagonal();
    const auto sweep = sweep_designs(dg, wg, envs, quick(), 1);
    std::vector<BodyDesign> designs = {dg.design(3), dg.design(9)};
    const auto m = evaluate_designs(designs, wg, envs, quick(), 2);
    EXPECT_EQ(m[0].counts, sweep.rows[3].metrics.counts);
    EXPECT_EQ(m[1].m_ci, sweep.rows[9].metrics.m_ci);
}
