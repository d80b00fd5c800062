#include <cmath>

#include <gtest/gtest.h>

#include "morpho/landscape.hpp"
#include "morpho/optimizers.hpp"
#include "morpho/rng.hpp"

using namespace morpho;

namespace {

double sphere(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += (v - 0.3) * (v - 0.3);
    return s;
}

SimProfile quick() { return {0.1, 3000, 0.075, 1e-3}; }

}  // namespace

TEST(Optimizers, MethodNames) {
    for (auto m : kAllMethods) EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_THROW(parse_method("cma"), std::invalid_argument);
    EXPECT_EQ(hyper::snes_population(2), 6u);
}

TEST(Optimizers, ZeroPolicyLoss) {
    const auto l = loss(BodyDesign::canonical(), {0.0, 0.0}, EnvironmentSet::diagonal(), quick());
    EXPECT_NEAR(l.loss, 16.0, 1e-12);
    EXPECT_EQ(l.envs_solved, 0);
}

TEST(Optimizers, PolicyObjectiveMatchesLoss) {
    const auto envs = EnvironmentSet::diagonal();
    const auto f = policy_objective(BodyDesign::canonical(), envs, quick());
    const std::vector<std::vector<double>> xs = {{0.5, -0.2}, {0.9, 0.1}};
    const auto e = f(xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto l = loss(BodyDesign::canonical(), {xs[i][0], xs[i][1]}, envs, quick());
        EXPECT_EQ(e[i].loss, l.loss);
        EXPECT_EQ(e[i].solved, l.envs_solved);
    }
}

TEST(Optimizers, SphereOracle) {
    const auto bounds = Bounds::box(2, -1, 1);
    const auto f = batched(sphere);
    for (auto m : kAllMethods) {
        const auto r = minimize(m, f, bounds, 2000, 17);
        const double tol = m == Method::random ? 1e-2 : 1e-4;
        EXPECT_LE(r.best_loss, tol) << to_string(m);
        EXPECT_LE(r.evals_used, 2000);
        EXPECT_NEAR(sphere(r.best_x), r.best_loss, 1e-15);
    }
}

TEST(Optimizers, BudgetOfOne) {
    const auto f = batched(sphere);
    for (auto m : kAllMethods) {
        const auto r = minimize(m, f, Bounds::box(2, -1, 1), 1, 3);
        EXPECT_EQ(r.evals_used, 1) << to_string(m);
        EXPECT_EQ(r.best_loss_curve.size(), 1u);
    }
    EXPECT_THROW(minimize(Method::gss, f, Bounds::box(2, -1, 1), 0, 3), std::invalid_argument);
}

TEST(Optimizers, Deterministic) {
    const auto f = batched(sphere);
    for (auto m : kAllMethods) {
        EXPECT_EQ(minimize(m, f, Bounds::box(3, -1, 1), 300, 9), minimize(m, f, Bounds::box(3, -1, 1), 300, 9));
    }
}

TEST(Optimizers, CandidatesStayInBoundsAndCurvesAreMonotone) {
    Rng rng(1);
    for (int trial = 0; trial < 40; ++trial) {
        const auto dims = 1 + rng.below(4);
        const Bounds b = Bounds::box(dims, -1.0 - rng.uniform(), 1.0 + rng.uniform());
        const auto method = kAllMethods[rng.below(4)];
        const int budget = 1 + static_cast<int>(rng.below(400));
        int seen = 0;
        BatchObjective f = [&](std::span<const std::vector<double>> xs) {
            std::vector<Evaluation> out;
            for (const auto& x : xs) {
                EXPECT_TRUE(b.contains(x));
                out.push_back({sphere(x), 0});
            }
            seen += static_cast<int>(xs.size());
            return out;
        };
        const auto r = minimize(method, f, b, budget, rng.next_u64());
        // Pattern-search polls are computed as a batch and consumed one by one.
        EXPECT_GE(seen, r.evals_used);
        if (method != Method::gss) { EXPECT_EQ(seen, r.evals_used); }
        EXPECT_LE(r.evals_used, budget);
        for (std::size_t i = 1; i < r.best_loss_curve.size(); ++i) {
            EXPECT_LT(r.best_loss_curve[i].loss, r.best_loss_curve[i - 1].loss);
            EXPECT_GT(r.best_loss_curve[i].eval, r.best_loss_curve[i - 1].eval);
        }
        EXPECT_EQ(r.best_loss_curve.back().loss, r.best_loss);
    }
}

TEST(Optimizers, FullSuccessTracking) {
    // A toy objective: solved = number of coordinates above 0.5.
    BatchObjective f = [](std::span<const std::vector<double>> xs) {
        std::vector<Evaluation> out;
        for (const auto& x : xs) {
            int solved = 0;
            for (double v : x) solved += v > 0.5;
            out.push_back({sphere(x), solved});
        }
        return out;
    };
    for (auto m : kAllMethods) {
        const auto r = minimize(m, f, Bounds::box(2, -1, 1), 500, 5, {2, true});
        ASSERT_FALSE(r.censored()) << to_string(m);
        EXPECT_EQ(*r.evals_to_full_success, r.evals_used);
        EXPECT_EQ(r.max_solved, 2);
        EXPECT_EQ(r.success_count_curve.back().solved, 2);
        for (std::size_t i = 1; i < r.success_count_curve.size(); ++i) {
            EXPECT_GT(r.success_count_curve[i].solved, r.success_count_curve[i - 1].solved);
        }
        EXPECT_EQ(evals_or_penalty(r.evals_to_full_success, 500), *r.evals_to_full_success);
    }
    const auto never = minimize(Method::random, batched(sphere), Bounds::box(2, -1, 1), 50, 5, {2, true});
    EXPECT_TRUE(never.censored());
    EXPECT_EQ(never.evals_used, 50);
    EXPECT_EQ(evals_or_penalty(never.evals_to_full_success, 50), 51.0);
}

TEST(Optimizers, TrainSweepLayout) {
    const auto grid = DesignGrid::make(5);
    const std::vector<TrainTask> tasks = {{620, grid.design(620)}, {480, grid.design(480)}};
    TrainConfig cfg;
    cfg.methods = {Method::random, Method::de};
    cfg.seeds_per_design = 2;
    cfg.budget = 40;
    cfg.workers = 2;
    const auto r = train_sweep(tasks, cfg, EnvironmentSet::diagonal(), quick());
    ASSERT_EQ(r.rows.size(), 8u);
    ASSERT_EQ(r.summary.size(), 4u);
    EXPECT_EQ(r.rows[0].design_index, 620u);
    EXPECT_EQ(r.rows[2].method, Method::de);
    EXPECT_EQ(r.rows[3].repetition, 1);
    EXPECT_EQ(r.rows[3].seed, train_run_seed(1, 620, Method::de, 1));
    for (const auto& row : r.rows) {
        EXPECT_LE(row.evals_used, 40);
        if (row.evals_to_full_success) { EXPECT_EQ(row.envs_solved, 4); }
    }
    for (const auto& s : r.summary) {
        EXPECT_EQ(s.runs, 2);
        EXPECT_GE(s.mean_evals, 1.0);
        EXPECT_LE(s.mean_evals, 41.0);
    }
    cfg.workers = 1;
    const auto again = train_sweep(tasks, cfg, EnvironmentSet::diagonal(), quick());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        EXPECT_EQ(r.rows[i].final_loss, again.rows[i].final_loss);
        EXPECT_EQ(r.rows[i].evals_to_full_success, again.rows[i].evals_to_full_success);
    }
}

TEST(Optimizers, CoincidentDesignIsAlwaysCensored) {
    const std::vector<TrainTask> tasks = {{0, BodyDesign{{0.0, 0.0}, {0.0, 0.0}}}};
    TrainConfig cfg;
    cfg.seeds_per_design = 1;
    cfg.budget = 60;
    const auto r = train_sweep(tasks, cfg, EnvironmentSet::diagonal(), quick());
    for (const auto& row : r.rows) EXPECT_FALSE(row.evals_to_full_success.has_value());
    for (const auto& s : r.summary) EXPECT_EQ(s.censor_rate, 1.0);
}
