#include "morpho/coopt.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "morpho/analysis/dtw.hpp"
#include "morpho/optimizers.hpp"
#include "morpho/parallel.hpp"
#include "morpho/rng.hpp"

namespace morpho {

namespace {

using Genes = std::vector<double>;

struct Individual {
    Genes genes;
    std::vector<double> objectives;
};

// Gene layout and boxes for one mode.
struct Encoding {
    CooptMode mode;
    Bounds bounds;

    static Encoding make(CooptMode mode) {
        if (mode == CooptMode::baseline) return {mode, Bounds::box(2, -1.0, 1.0)};
        return {mode, {{-0.5, -0.5, -0.5, -0.5, -1.0, -1.0}, {0.5, 0.5, 0.5, 0.5, 1.0, 1.0}}};
    }

    Genome decode(const Genes& g) const {
        if (mode == CooptMode::baseline) return {BodyDesign::canonical(), {g[0], g[1]}};
        return {{{g[0], g[1]}, {g[2], g[3]}}, {g[4], g[5]}};
    }
};

struct Tournament {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;

    bool better(std::size_t a, std::size_t b) const {
        if (rank[a] != rank[b]) return rank[a] < rank[b];
        if (crowding[a] != crowding[b]) return crowding[a] > crowding[b];
        return a < b;
    }
};

Tournament rank_population(const std::vector<Individual>& pop) {
    std::vector<std::vector<double>> objs;
    for (const auto& ind : pop) objs.push_back(ind.objectives);
    Tournament t{std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size())};
    const auto fronts = non_dominated_sort(objs);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto cd = crowding_distance(objs, fronts[r]);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            t.rank[fronts[r][i]] = r;
            t.crowding[fronts[r][i]] = cd[i];
        }
    }
    return t;
}

// Keeps `size` members: whole fronts first, the splitting front by crowding.
std::vector<Individual> survive(std::vector<Individual> merged, std::size_t size) {
    std::vector<std::vector<double>> objs;
    for (const auto& ind : merged) objs.push_back(ind.objectives);
    std::vector<Individual> next;
    for (const auto& front : non_dominated_sort(objs)) {
        if (next.size() + front.size() <= size) {
            for (std::size_t i : front) next.push_back(std::move(merged[i]));
            if (next.size() == size) break;
            continue;
        }
        const auto cd = crowding_distance(objs, front);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        for (std::size_t i = 0; next.size() < size; ++i) next.push_back(std::move(merged[front[order[i]]]));
        break;
    }
    return next;
}

class Runner {
public:
    Runner(CooptMode mode, const EnvironmentSet& envset, const SimProfile& profile, const CooptConfig& config)
        : enc_(Encoding::make(mode)), envset_(envset), profile_(profile), config_(config), rng_(config.seed) {
        record_.mode = mode;
        record_.seed = config.seed;
        record_.budget = config.budget;
    }

    CooptRunRecord run() {
        const std::size_t n = coopt_hyper::kPopulation;
        std::vector<Genes> genes;
        for (std::size_t i = 0; i < n; ++i) {
            Genes g(enc_.bounds.dims());
            for (std::size_t j = 0; j < g.size(); ++j) g[j] = rng_.uniform(enc_.bounds.low[j], enc_.bounds.high[j]);
            genes.push_back(std::move(g));
        }
        auto pop = evaluate(genes, 0);

        int generation = 0;
        while (record_.evals_used < config_.budget) {
            ++generation;
            const auto ranking = rank_population(pop);
            std::vector<Genes> offspring;
            while (offspring.size() < n) {
                Genes a = pop[select(ranking)].genes;
                Genes b = pop[select(ranking)].genes;
                if (rng_.uniform() < coopt_hyper::kCrossoverRate) {
                    for (std::size_t j = 0; j < a.size(); ++j) {
                        if (rng_.uniform() < coopt_hyper::kGeneSwap) std::swap(a[j], b[j]);
                    }
                }
                mutate(a);
                mutate(b);
                offspring.push_back(std::move(a));
                if (offspring.size() < n) offspring.push_back(std::move(b));
            }
            const std::size_t room = static_cast<std::size_t>(config_.budget - record_.evals_used);
            if (offspring.size() > room) offspring.resize(room);
            auto children = evaluate(offspring, generation);
            std::vector<Individual> merged = std::move(pop);
            for (auto& c : children) merged.push_back(std::move(c));
            pop = survive(std::move(merged), n);
        }
        record_.generations = generation;
        record_.archive = archive_.entries();
        record_.best = record_.archive.front();
        double best_sum = std::numeric_limits<double>::infinity();
        for (const auto& e : record_.archive) {
            const double s = std::accumulate(e.objectives.begin(), e.objectives.end(), 0.0);
            if (s < best_sum) {
                best_sum = s;
                record_.best = e;
            }
        }
        return std::move(record_);
    }

private:
    std::size_t select(const Tournament& t) {
        const std::size_t a = rng_.below(t.rank.size());
        const std::size_t b = rng_.below(t.rank.size());
        return t.better(a, b) ? a : b;
    }

    void mutate(Genes& g) {
        const double p = 1.0 / static_cast<double>(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (rng_.uniform() < p) {
                const double range = enc_.bounds.high[j] - enc_.bounds.low[j];
                g[j] += coopt_hyper::kMutationSigma * range * rng_.normal();
            }
            g[j] = std::clamp(g[j], enc_.bounds.low[j], enc_.bounds.high[j]);
        }
    }

    std::vector<Individual> evaluate(const std::vector<Genes>& genes, int generation) {
        const std::size_t k = envset_.size();
        std::vector<TrialSpec> specs;
        specs.reserve(genes.size() * k);
        for (const auto& g : genes) {
            const Genome genome = enc_.decode(g);
            for (const auto& env : envset_.environments) specs.push_back({genome.design, genome.policy, env.start});
        }
        const auto trials = run_trials(specs, profile_, config_.workers);

        std::vector<Individual> out;
        std::vector<std::size_t> admitted;
        for (std::size_t i = 0; i < genes.size(); ++i) {
            Individual ind{genes[i], std::vector<double>(k)};
            int solved = 0;
            double sum = 0.0;
            for (std::size_t e = 0; e < k; ++e) {
                const auto& t = trials[i * k + e];
                ind.objectives[e] = t.min_distance;
                sum += t.min_distance;
                solved += t.success ? 1 : 0;
            }
            const int eval = ++record_.evals_used;
            if (eval == 1 || sum < best_loss_ || solved > max_solved_) {
                best_loss_ = eval == 1 ? sum : std::min(best_loss_, sum);
                max_solved_ = eval == 1 ? solved : std::max(max_solved_, solved);
                record_.curve.push_back({eval, best_loss_, max_solved_});
            }
            if (!record_.evals_to_full_success && solved == static_cast<int>(k)) record_.evals_to_full_success = eval;
            if (archive_.offer({eval, generation, enc_.decode(genes[i]), ind.objectives})) {
                admitted.push_back(record_.admissions.size());
                record_.admissions.push_back({archive_.entries().back(), 0.0});
            }
            out.push_back(std::move(ind));
        }

        const auto scores = parallel_map(admitted.size(), config_.workers, [&](std::size_t a) {
            const auto& g = record_.admissions[admitted[a]].entry.genome;
            return aggregate_dtw(g.design, g.policy, envset_, profile_, config_.dtw_max_points);
        });
        for (std::size_t a = 0; a < admitted.size(); ++a) record_.admissions[admitted[a]].dtw = scores[a];
        return out;
    }

    Encoding enc_;
    const EnvironmentSet& envset_;
    const SimProfile& profile_;
    const CooptConfig& config_;
    Rng rng_;
    ParetoArchive archive_;
    CooptRunRecord record_;
    double best_loss_ = 0.0;
    int max_solved_ = 0;
};

}  // namespace

std::string_view to_string(CooptMode mode) { return mode == CooptMode::coopt ? "coopt" : "baseline"; }

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

bool ParetoArchive::offer(ArchiveEntry entry) {
    for (const auto& e : entries_) {
        bool weakly = true;
        for (std::size_t i = 0; i < e.objectives.size() && weakly; ++i) weakly = e.objectives[i] <= entry.objectives[i];
        if (weakly) return false;
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(entry.objectives, e.objectives); });
    entries_.push_back(std::move(entry));
    return true;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const std::vector<double>> objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(objectives[i], objectives[j])) dominated[i].push_back(j);
            else if (dominates(objectives[j], objectives[i])) ++count[i];
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated[i]) {
                if (--count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<const std::vector<double>> objectives,
                                      std::span<const std::size_t> front) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    std::vector<double> cd(n, 0.0);
    if (n == 0) return cd;
    const std::size_t m = objectives[front[0]].size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[front[a]][obj] < objectives[front[b]][obj];
        });
        const double lo = objectives[front[order.front()]][obj];
        const double hi = objectives[front[order.back()]][obj];
        cd[order.front()] = kInf;
        cd[order.back()] = kInf;
        if (!(hi > lo)) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            const double gap = objectives[front[order[r + 1]]][obj] - objectives[front[order[r - 1]]][obj];
            cd[order[r]] += gap / (hi - lo);
        }
    }
    return cd;
}

CooptRunRecord run_coopt(CooptMode mode, const EnvironmentSet& envset, const SimProfile& profile,
                         const CooptConfig& config) {
    profile.validate();
    if (envset.size() == 0) throw std::invalid_argument("environment set is empty");
    if (config.budget < static_cast<int>(coopt_hyper::kPopulation)) {
        throw std::invalid_argument("co-optimization budget must be at least the population size (52)");
    }
    return Runner(mode, envset, profile, config).run();
}

CooptRunRecord co_optimize(const EnvironmentSet& envset, const SimProfile& profile, const CooptConfig& config) {
    return run_coopt(CooptMode::coopt, envset, profile, config);
}

CooptRunRecord baseline_optimize(const EnvironmentSet& envset, const SimProfile& profile,
                                 const CooptConfig& config) {
    return run_coopt(CooptMode::baseline, envset, profile, config);
}

StatResult compare_runs(std::span<const CooptRunRecord> a, std::span<const CooptRunRecord> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("compare_runs needs two non-empty groups");
    auto evals = [](std::span<const CooptRunRecord> runs) {
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(evals_or_penalty(r.evals_to_full_success, r.budget));
        return v;
    };
    const auto va = evals(a);
    const auto vb = evals(b);
    return mann_whitney(va, vb);
}

}  // namespace morpho
