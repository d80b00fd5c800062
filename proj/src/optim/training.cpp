#include <stdexcept>

#include "morpho/optimizers.hpp"
#include "morpho/parallel.hpp"
#include "morpho/rng.hpp"

namespace morpho {

namespace {

std::vector<Evaluation> evaluate_policies(const BodyDesign& design, std::span<const std::vector<double>> xs,
                                          const EnvironmentSet& envset, const SimProfile& profile) {
    const std::size_t k = envset.size();
    std::vector<TrialSpec> specs;
    specs.reserve(xs.size() * k);
    for (const auto& x : xs) {
        if (x.size() != 2) throw std::invalid_argument("policy vectors have exactly two weights");
        const Policy policy{x[0], x[1]};
        for (const auto& env : envset.environments) specs.push_back({design, policy, env.start});
    }
    const auto trials = run_trials(specs, profile);

    std::vector<Evaluation> out(xs.size());
    for (std::size_t c = 0; c < xs.size(); ++c) {
        for (std::size_t e = 0; e < k; ++e) {
            const auto& t = trials[c * k + e];
            out[c].loss += t.min_distance;
            out[c].solved += t.success ? 1 : 0;
        }
    }
    return out;
}

}  // namespace

LossValue loss(const BodyDesign& design, const Policy& policy, const EnvironmentSet& envset,
               const SimProfile& profile) {
    const std::vector<double> x{policy.w1, policy.w2};
    const auto e = evaluate_policies(design, std::span(&x, 1), envset, profile);
    return {e[0].loss, e[0].solved};
}

BatchObjective policy_objective(const BodyDesign& design, const EnvironmentSet& envset,
                                const SimProfile& profile) {
    design.validate();
    profile.validate();
    if (envset.size() == 0) throw std::invalid_argument("environment set is empty");
    return [design, envset, profile](std::span<const std::vector<double>> xs) {
        return evaluate_policies(design, xs, envset, profile);
    };
}

std::uint64_t train_run_seed(std::uint64_t master_seed, std::size_t design_index, Method method, int repetition) {
    return mix_seed(master_seed, design_index, static_cast<std::uint64_t>(method),
                    static_cast<std::uint64_t>(repetition));
}

TrainResult train_sweep(std::span<const TrainTask> tasks, const TrainConfig& config, const EnvironmentSet& envset,
                        const SimProfile& profile) {
    if (config.methods.empty()) throw std::invalid_argument("no training methods selected");
    if (config.seeds_per_design < 1) throw std::invalid_argument("seeds_per_design must be at least 1");
    if (config.budget < 1) throw std::invalid_argument("budget must be at least 1");

    const std::size_t methods = config.methods.size();
    const std::size_t reps = static_cast<std::size_t>(config.seeds_per_design);
    const std::size_t total = tasks.size() * methods * reps;
    const Bounds bounds = Bounds::box(2, -1.0, 1.0);
    const MinimizeOptions options{static_cast<int>(envset.size()), config.stop_on_full_success};

    std::vector<BatchObjective> objectives;
    for (const auto& task : tasks) objectives.push_back(policy_objective(task.design, envset, profile));

    TrainResult result;
    result.rows = parallel_map(total, config.workers, [&](std::size_t r) {
        const std::size_t t = r / (methods * reps);
        const Method method = config.methods[(r / reps) % methods];
        const int rep = static_cast<int>(r % reps);
        const std::uint64_t seed = train_run_seed(config.master_seed, tasks[t].design_index, method, rep);
        const auto rec = minimize(method, objectives[t], bounds, config.budget, seed, options);
        return TrainRow{tasks[t].design_index, method,        rep,           seed, rec.evals_to_full_success,
                        rec.best_loss,         rec.max_solved, rec.evals_used};
    });

    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (std::size_t m = 0; m < methods; ++m) {
            TrainSummaryRow s{tasks[t].design_index, config.methods[m], static_cast<int>(reps), 0.0, 0.0};
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const auto& row = result.rows[(t * methods + m) * reps + rep];
                s.mean_evals += evals_or_penalty(row.evals_to_full_success, config.budget);
                s.censor_rate += row.evals_to_full_success ? 0.0 : 1.0;
            }
            s.mean_evals /= static_cast<double>(reps);
            s.censor_rate /= static_cast<double>(reps);
            result.summary.push_back(s);
        }
    }
    return result;
}

}  // namespace morpho
