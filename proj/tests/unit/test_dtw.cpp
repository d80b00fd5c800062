#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "morpho/analysis/dtw.hpp"
#include "morpho/rng.hpp"

using namespace morpho;

namespace {

// Minimum over every monotone warping path, by exhaustive recursion.
double dtw_exhaustive(const std::vector<double>& a, const std::vector<double>& b) {
    std::function<double(std::size_t, std::size_t)> best = [&](std::size_t i, std::size_t j) -> double {
        const double c = std::abs(a[i] - b[j]);
        if (i == 0 && j == 0) return c;
        double m = INFINITY;
        if (i > 0) m = std::min(m, best(i - 1, j));
        if (j > 0) m = std::min(m, best(i, j - 1));
        if (i > 0 && j > 0) m = std::min(m, best(i - 1, j - 1));
        return c + m;
    };
    return best(a.size() - 1, b.size() - 1);
}

std::vector<double> random_signal(Rng& rng, std::size_t n) {
    std::vector<double> s(n);
    for (auto& v : s) v = rng.uniform(-2, 2);
    return s;
}

}  // namespace

TEST(Dtw, WorkedExamples) {
    const std::vector<double> a{0, 0, 1}, b{0, 1};
    EXPECT_EQ(dtw(a, b), 0.0);
    const std::vector<double> c{1, 2, 3}, d{1, 2, 3};
    EXPECT_EQ(dtw(c, d), 0.0);
    const std::vector<double> e{0}, f{1, 2};
    EXPECT_EQ(dtw(e, f), 3.0);
    EXPECT_THROW(dtw(std::vector<double>{}, f), std::invalid_argument);
}

TEST(Dtw, MatchesExhaustiveSearch) {
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        const auto a = random_signal(rng, 1 + rng.below(6));
        const auto b = random_signal(rng, 1 + rng.below(6));
        EXPECT_NEAR(dtw(a, b), dtw_exhaustive(a, b), 1e-12);
    }
}

TEST(Dtw, SymmetricAndBoundedByDiagonal) {
    Rng rng(13);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.below(40);
        const auto a = random_signal(rng, n);
        const auto b = random_signal(rng, 1 + rng.below(40));
        EXPECT_EQ(dtw(a, b), dtw(b, a));
        EXPECT_GE(dtw(a, b), 0.0);
        const auto c = random_signal(rng, n);
        double diag = 0;
        for (std::size_t i = 0; i < n; ++i) diag += std::abs(a[i] - c[i]);
        EXPECT_LE(dtw(a, c), diag + 1e-12);
    }
}

TEST(Dtw, Downsample) {
    std::vector<double> s(1001);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
    const auto d = downsample(s, 500);
    // stride ceil(1001 / 500) = 3
    ASSERT_EQ(d.size(), 334u);
    EXPECT_EQ(d[1], 3.0);
    EXPECT_EQ(downsample(std::vector<double>(10, 1.0), 500).size(), 10u);
}

TEST(Dtw, AggregateOverPairs) {
    std::vector<TrialResult> trials(4);
    for (auto& t : trials) {
        t.sensor_trace_1 = {1, 2, 3};
        t.sensor_trace_2 = {3, 2, 1};
    }
    EXPECT_EQ(aggregate_dtw(trials), 0.0);
    // One outlier trace: 3 of the 6 pairs differ by one unit on sensor 1.
    trials[3].sensor_trace_1 = {2, 3, 4};
    EXPECT_NEAR(aggregate_dtw(trials), (3 * 2.0 / 6.0 + 0.0) / 2.0, 1e-15);
}

TEST(Dtw, AggregateFromSimulation) {
    const auto envs = EnvironmentSet::diagonal();
    const SimProfile p{0.1, 2000, 0.075, 1e-3};
    const double score = aggregate_dtw(BodyDesign::canonical(), {0.6, -0.1}, envs, p);
    EXPECT_GE(score, 0.0);
    EXPECT_TRUE(std::isfinite(score));
    EXPECT_EQ(score, aggregate_dtw(BodyDesign::canonical(), {0.6, -0.1}, envs, p));
}
