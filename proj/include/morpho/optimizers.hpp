#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morpho/sim/vehicle.hpp"

namespace morpho {

enum class Method { random, gss, snes, de };

inline constexpr Method kAllMethods[] = {Method::random, Method::gss, Method::snes, Method::de};

std::string_view to_string(Method method);
/// Throws std::invalid_argument for an unknown name.
Method parse_method(std::string_view name);

/// Fixed hyperparameters of the derivative-free methods.
namespace hyper {
inline constexpr double kGssInitialStep = 0.10;   // fraction of each range
inline constexpr double kGssExpand = 2.0;
inline constexpr double kGssContract = 0.5;
inline constexpr double kGssMinStep = 1e-6;
inline constexpr double kSnesInitialSigma = 0.25;  // fraction of each range
inline constexpr double kSnesMeanRate = 1.0;
inline constexpr std::size_t kDePopulation = 20;
inline constexpr double kDeWeight = 0.7;
inline constexpr double kDeCrossover = 0.9;

/// 4 + floor(3 ln D)
std::size_t snes_population(std::size_t dims);
/// (3 + ln D) / (5 sqrt D)
double snes_sigma_rate(std::size_t dims);
}  // namespace hyper

struct Bounds {
    std::vector<double> low;
    std::vector<double> high;

    static Bounds box(std::size_t dims, double low, double high);
    std::size_t dims() const { return low.size(); }
    void validate() const;
    bool contains(std::span<const double> x) const;
    std::vector<double> clamp(std::vector<double> x) const;
};

struct Evaluation {
    double loss = 0.0;
    int solved = 0;  // environments solved; 0 for objectives without that notion
};

/// Evaluates a batch of candidates; result i belongs to candidate i. Must be
/// deterministic.
using BatchObjective = std::function<std::vector<Evaluation>(std::span<const std::vector<double>>)>;
using ScalarObjective = std::function<double(std::span<const double>)>;

BatchObjective batched(ScalarObjective objective);

struct LossPoint {
    int eval = 0;  // 1-based evaluation index
    double loss = 0.0;
    friend bool operator==(const LossPoint&, const LossPoint&) = default;
};

struct SolvedPoint {
    int eval = 0;
    int solved = 0;
    friend bool operator==(const SolvedPoint&, const SolvedPoint&) = default;
};

struct MinimizeOptions {
    /// Solved count that counts as full success (K); 0 disables tracking.
    int full_success = 0;
    /// End the run at the first evaluation reaching full success.
    bool stop_on_full_success = false;
};

struct OptRunRecord {
    Method method = Method::random;
    std::uint64_t seed = 0;
    int budget = 0;
    int evals_used = 0;
    /// Running minimum of the loss, one point per strict improvement.
    std::vector<LossPoint> best_loss_curve;
    /// Running maximum of the solved count, one point per increase.
    std::vector<SolvedPoint> success_count_curve;
    /// First evaluation reaching full success; empty means censored.
    std::optional<int> evals_to_full_success;
    std::vector<double> best_x;
    double best_loss = 0.0;
    int best_solved = 0;  // solved count of best_x
    int max_solved = 0;

    bool censored() const { return !evals_to_full_success.has_value(); }
    friend bool operator==(const OptRunRecord&, const OptRunRecord&) = default;
};

/// Runs one derivative-free minimisation. Uses at most `budget` evaluations;
/// the record is a pure function of the arguments.
OptRunRecord minimize(Method method, const BatchObjective& objective, const Bounds& bounds, int budget,
                      std::uint64_t seed, const MinimizeOptions& options = {});

struct LossValue {
    double loss = 0.0;  // sum over environments of the closest approach
    int envs_solved = 0;
};

LossValue loss(const BodyDesign& design, const Policy& policy, const EnvironmentSet& envset,
               const SimProfile& profile);

/// Objective over policy vectors (w1, w2) for a fixed design.
BatchObjective policy_objective(const BodyDesign& design, const EnvironmentSet& envset,
                                const SimProfile& profile);

struct TrainTask {
    std::size_t design_index = 0;
    BodyDesign design;
};

struct TrainConfig {
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    int seeds_per_design = 5;
    int budget = 3000;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
    bool stop_on_full_success = true;
};

struct TrainRow {
    std::size_t design_index = 0;
    Method method = Method::random;
    int repetition = 0;
    std::uint64_t seed = 0;
    std::optional<int> evals_to_full_success;
    double final_loss = 0.0;
    int envs_solved = 0;
    int evals_used = 0;
};

struct TrainSummaryRow {
    std::size_t design_index = 0;
    Method method = Method::random;
    int runs = 0;
    /// Censored runs count as budget + 1.
    double mean_evals = 0.0;
    double censor_rate = 0.0;
};

struct TrainResult {
    std::vector<TrainRow> rows;  // ordered by (task, method, repetition)
    std::vector<TrainSummaryRow> summary;  // ordered by (task, method)
};

/// Seed used for one training run.
std::uint64_t train_run_seed(std::uint64_t master_seed, std::size_t design_index, Method method, int repetition);

TrainResult train_sweep(std::span<const TrainTask> tasks, const TrainConfig& config,
                        const EnvironmentSet& envset, const SimProfile& profile);

/// Penalised evaluation count: the recorded value, or budget + 1 when censored.
double evals_or_penalty(std::optional<int> evals, int budget);

}  // namespace morpho
