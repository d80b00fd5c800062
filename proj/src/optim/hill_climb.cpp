#include "morpho/hill_climb.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "morpho/rng.hpp"

namespace morpho {

namespace {

std::vector<std::vector<double>> end_distances(const BodyDesign& design, std::span<const Policy> policies,
                                               const EnvironmentSet& envset, const SimProfile& profile) {
    const std::size_t k = envset.size();
    std::vector<TrialSpec> specs;
    specs.reserve(policies.size() * k);
    for (const auto& p : policies) {
        for (const auto& env : envset.environments) specs.push_back({design, p, env.start});
    }
    const auto trials = run_trials(specs, profile);
    std::vector<std::vector<double>> out(policies.size(), std::vector<double>(k));
    for (std::size_t c = 0; c < policies.size(); ++c) {
        for (std::size_t e = 0; e < k; ++e) out[c][e] = trials[c * k + e].end_distance;
    }
    return out;
}

double combined(FitnessCombinator kind, std::span<const double> distances, double radius) {
    std::vector<double> f(distances.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = environment_fitness(distances[i], radius);
    return combine_fitness(kind, f);
}

}  // namespace

std::string_view to_string(FitnessCombinator kind) {
    switch (kind) {
        case FitnessCombinator::sum: return "sum";
        case FitnessCombinator::product: return "product";
        case FitnessCombinator::min: return "min";
    }
    return "unknown";
}

FitnessCombinator parse_combinator(std::string_view name) {
    for (auto k : {FitnessCombinator::sum, FitnessCombinator::product, FitnessCombinator::min}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown fitness combinator '" + std::string(name) + "' (expected sum, product or min)");
}

double combine_fitness(FitnessCombinator kind, std::span<const double> f) {
    if (f.empty()) throw std::invalid_argument("no fitness values to combine");
    switch (kind) {
        case FitnessCombinator::sum: {
            double s = 0.0;
            for (double v : f) s += v;
            return s;
        }
        case FitnessCombinator::product: {
            double p = 1.0;
            for (double v : f) p *= v;
            return p;
        }
        case FitnessCombinator::min: return *std::min_element(f.begin(), f.end());
    }
    throw std::invalid_argument("bad fitness combinator");
}

double environment_fitness(double end_distance, double success_radius) {
    const double d = std::max(end_distance, success_radius);
    return 1.0 / (d * d);
}

std::vector<double> delta_distances(std::span<const double> parent, std::span<const double> child) {
    if (parent.size() != child.size()) throw std::invalid_argument("distance vectors differ in length");
    std::vector<double> d(parent.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -(child[i] - parent[i]);
    return d;
}

void HillClimbConfig::validate() const {
    if (pop < 1) throw std::invalid_argument("hill climber population must be at least 1");
    if (generations < 1) throw std::invalid_argument("hill climber needs at least one generation");
    if (!(m >= 0.0)) throw std::invalid_argument("mutation strength must be non-negative");
    design.validate();
}

LineageLog hill_climb(const EnvironmentSet& envset, const SimProfile& profile, const HillClimbConfig& config) {
    config.validate();
    profile.validate();
    if (envset.size() == 0) throw std::invalid_argument("environment set is empty");

    const auto pop = static_cast<std::size_t>(config.pop);
    const double radius = profile.success_radius;

    std::vector<Rng> streams;
    streams.reserve(pop);
    for (std::size_t c = 0; c < pop; ++c) streams.emplace_back(config.seed, c);

    LineageLog log;
    log.kind = config.kind;
    log.seed = config.seed;
    log.k = envset.size();
    log.generations = config.generations;
    log.events.resize(pop);
    log.fitness_trace.resize(pop);

    std::vector<Policy> parents(pop);
    for (std::size_t c = 0; c < pop; ++c) {
        parents[c].w1 = streams[c].uniform(-1.0, 1.0);
        parents[c].w2 = streams[c].uniform(-1.0, 1.0);
    }
    log.initial_policies = parents;

    auto distances = end_distances(config.design, parents, envset, profile);
    std::vector<double> fitness(pop);
    for (std::size_t c = 0; c < pop; ++c) {
        fitness[c] = combined(config.kind, distances[c], radius);
        log.fitness_trace[c].push_back(fitness[c]);
    }

    std::vector<Policy> children(pop);
    for (int g = 1; g <= config.generations; ++g) {
        for (std::size_t c = 0; c < pop; ++c) {
            children[c].w1 = std::clamp(parents[c].w1 + config.m * streams[c].normal(), -1.0, 1.0);
            children[c].w2 = std::clamp(parents[c].w2 + config.m * streams[c].normal(), -1.0, 1.0);
        }
        const auto child_distances = end_distances(config.design, children, envset, profile);
        for (std::size_t c = 0; c < pop; ++c) {
            const double f = combined(config.kind, child_distances[c], radius);
            if (f > fitness[c]) {
                log.events[c].push_back({g, c, distances[c], child_distances[c],
                                         delta_distances(distances[c], child_distances[c]), fitness[c], f});
                parents[c] = children[c];
                distances[c] = child_distances[c];
                fitness[c] = f;
            }
            log.fitness_trace[c].push_back(fitness[c]);
        }
    }

    log.final_policies = parents;
    log.final_fitness = fitness;
    log.final_distances = distances;
    return log;
}

}  // namespace morpho
