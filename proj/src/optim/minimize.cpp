#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "morpho/optimizers.hpp"
#include "morpho/rng.hpp"

namespace morpho {

namespace {

// Budget and best-so-far bookkeeping shared by all methods. Candidates may be
// computed speculatively in batches; only consumed evaluations count.
class RunTracker {
public:
    RunTracker(OptRunRecord& record, const BatchObjective& objective, const MinimizeOptions& options)
        : record_(record), objective_(objective), options_(options) {}

    int remaining() const { return stopped_ ? 0 : record_.budget - record_.evals_used; }
    bool done() const { return remaining() <= 0; }

    std::vector<Evaluation> compute(std::span<const std::vector<double>> xs) const {
        const auto take = std::min<std::size_t>(xs.size(), static_cast<std::size_t>(std::max(remaining(), 0)));
        if (take == 0) return {};
        auto out = objective_(xs.first(take));
        if (out.size() != take) throw std::runtime_error("objective returned the wrong number of results");
        return out;
    }

    void consume(const std::vector<double>& x, const Evaluation& e) {
        const int index = ++record_.evals_used;
        if (index == 1 || e.loss < record_.best_loss) {
            record_.best_loss = e.loss;
            record_.best_x = x;
            record_.best_solved = e.solved;
            record_.best_loss_curve.push_back({index, e.loss});
        }
        if (index == 1 || e.solved > record_.max_solved) {
            record_.max_solved = e.solved;
            record_.success_count_curve.push_back({index, e.solved});
        }
        if (options_.full_success > 0 && !record_.evals_to_full_success && e.solved >= options_.full_success) {
            record_.evals_to_full_success = index;
            if (options_.stop_on_full_success) stopped_ = true;
        }
    }

    /// Computes and consumes the whole batch (or as much as the budget allows).
    std::vector<Evaluation> run(std::span<const std::vector<double>> xs) {
        auto evals = compute(xs);
        for (std::size_t i = 0; i < evals.size(); ++i) {
            if (done()) {
                evals.resize(i);
                break;
            }
            consume(xs[i], evals[i]);
        }
        return evals;
    }

private:
    OptRunRecord& record_;
    const BatchObjective& objective_;
    const MinimizeOptions& options_;
    bool stopped_ = false;
};

std::vector<double> uniform_point(const Bounds& b, Rng& rng) {
    std::vector<double> x(b.dims());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(b.low[i], b.high[i]);
    return x;
}

void random_search(RunTracker& t, const Bounds& bounds, Rng& rng) {
    constexpr std::size_t kChunk = 16;
    while (!t.done()) {
        const std::size_t n = std::min<std::size_t>(kChunk, static_cast<std::size_t>(t.remaining()));
        std::vector<std::vector<double>> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(uniform_point(bounds, rng));
        t.run(xs);
    }
}

// Compass search: poll +e_i, -e_i in order, move to the first improving poll.
void generating_set_search(RunTracker& t, const Bounds& bounds, Rng& rng) {
    const std::size_t dims = bounds.dims();
    std::vector<double> x = uniform_point(bounds, rng);
    const auto first = t.run(std::span(&x, 1));
    if (first.empty()) return;
    double fx = first.front().loss;

    std::vector<double> range(dims), step(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        range[i] = bounds.high[i] - bounds.low[i];
        step[i] = hyper::kGssInitialStep * range[i];
    }

    while (!t.done()) {
        if (*std::max_element(step.begin(), step.end()) < hyper::kGssMinStep) break;

        std::vector<std::vector<double>> polls;
        for (std::size_t i = 0; i < dims; ++i) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> c = x;
                c[i] = std::clamp(x[i] + sign * step[i], bounds.low[i], bounds.high[i]);
                if (c[i] != x[i]) polls.push_back(std::move(c));
            }
        }

        bool improved = false;
        const auto evals = t.compute(polls);
        for (std::size_t j = 0; j < evals.size() && !t.done(); ++j) {
            t.consume(polls[j], evals[j]);
            if (evals[j].loss < fx) {
                x = polls[j];
                fx = evals[j].loss;
                improved = true;
                break;
            }
        }
        for (std::size_t i = 0; i < dims; ++i) {
            step[i] = improved ? std::min(step[i] * hyper::kGssExpand, range[i]) : step[i] * hyper::kGssContract;
        }
    }
}

// Separable NES: per-dimension mean and step size, rank-based utilities.
void separable_nes(RunTracker& t, const Bounds& bounds, Rng& rng) {
    const std::size_t dims = bounds.dims();
    const std::size_t lambda = hyper::snes_population(dims);
    const double sigma_rate = hyper::snes_sigma_rate(dims);

    std::vector<double> mu = uniform_point(bounds, rng);
    std::vector<double> sigma(dims);
    for (std::size_t i = 0; i < dims; ++i) sigma[i] = hyper::kSnesInitialSigma * (bounds.high[i] - bounds.low[i]);
    if (t.run(std::span(&mu, 1)).empty()) return;

    std::vector<double> utility(lambda);
    for (std::size_t k = 0; k < lambda; ++k) {
        utility[k] = std::max(0.0, std::log(static_cast<double>(lambda) / 2.0 + 1.0) - std::log(static_cast<double>(k + 1)));
    }
    const double total = std::accumulate(utility.begin(), utility.end(), 0.0);
    for (auto& u : utility) u = u / total - 1.0 / static_cast<double>(lambda);

    while (!t.done()) {
        std::vector<std::vector<double>> noise(lambda, std::vector<double>(dims));
        std::vector<std::vector<double>> candidates(lambda, std::vector<double>(dims));
        for (std::size_t k = 0; k < lambda; ++k) {
            for (std::size_t i = 0; i < dims; ++i) {
                noise[k][i] = rng.normal();
                candidates[k][i] = std::clamp(mu[i] + sigma[i] * noise[k][i], bounds.low[i], bounds.high[i]);
            }
        }
        const auto evals = t.run(candidates);
        if (evals.size() < lambda) break;

        std::vector<std::size_t> order(lambda);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return evals[a].loss < evals[b].loss; });

        for (std::size_t i = 0; i < dims; ++i) {
            double grad_mu = 0.0;
            double grad_sigma = 0.0;
            for (std::size_t r = 0; r < lambda; ++r) {
                const double s = noise[order[r]][i];
                grad_mu += utility[r] * s;
                grad_sigma += utility[r] * (s * s - 1.0);
            }
            mu[i] = std::clamp(mu[i] + hyper::kSnesMeanRate * sigma[i] * grad_mu, bounds.low[i], bounds.high[i]);
            sigma[i] *= std::exp(0.5 * sigma_rate * grad_sigma);
        }
    }
}

// DE/rand/1/bin with synchronous generational replacement.
void differential_evolution(RunTracker& t, const Bounds& bounds, Rng& rng) {
    const std::size_t dims = bounds.dims();
    const std::size_t np = hyper::kDePopulation;

    std::vector<std::vector<double>> pop;
    for (std::size_t i = 0; i < np; ++i) pop.push_back(uniform_point(bounds, rng));
    const auto initial = t.run(pop);
    if (initial.size() < np) return;
    std::vector<double> fitness(np);
    for (std::size_t i = 0; i < np; ++i) fitness[i] = initial[i].loss;

    while (!t.done()) {
        std::vector<std::vector<double>> trials(np, std::vector<double>(dims));
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do r1 = rng.below(np); while (r1 == i);
            do r2 = rng.below(np); while (r2 == i || r2 == r1);
            do r3 = rng.below(np); while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t forced = rng.below(dims);
            for (std::size_t j = 0; j < dims; ++j) {
                const bool cross = rng.uniform() < hyper::kDeCrossover || j == forced;
                const double v = cross ? pop[r1][j] + hyper::kDeWeight * (pop[r2][j] - pop[r3][j]) : pop[i][j];
                trials[i][j] = std::clamp(v, bounds.low[j], bounds.high[j]);
            }
        }
        const auto evals = t.run(trials);
        for (std::size_t i = 0; i < evals.size(); ++i) {
            if (evals[i].loss <= fitness[i]) {
                pop[i] = trials[i];
                fitness[i] = evals[i].loss;
            }
        }
    }
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::random: return "random";
        case Method::gss: return "gss";
        case Method::snes: return "snes";
        case Method::de: return "de";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : kAllMethods) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected random, gss, snes or de)");
}

std::size_t hyper::snes_population(std::size_t dims) {
    return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(dims))));
}

double hyper::snes_sigma_rate(std::size_t dims) {
    const double d = static_cast<double>(dims);
    return (3.0 + std::log(d)) / (5.0 * std::sqrt(d));
}

Bounds Bounds::box(std::size_t dims, double low, double high) {
    return {std::vector<double>(dims, low), std::vector<double>(dims, high)};
}

void Bounds::validate() const {
    if (low.empty() || low.size() != high.size()) throw std::invalid_argument("bounds need matching, non-empty low/high");
    for (std::size_t i = 0; i < low.size(); ++i) {
        if (!(low[i] < high[i]) || !std::isfinite(low[i]) || !std::isfinite(high[i])) {
            throw std::invalid_argument("bounds need low < high in every dimension");
        }
    }
}

bool Bounds::contains(std::span<const double> x) const {
    if (x.size() != low.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= low[i] && x[i] <= high[i])) return false;
    }
    return true;
}

std::vector<double> Bounds::clamp(std::vector<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], low[i], high[i]);
    return x;
}

BatchObjective batched(ScalarObjective objective) {
    return [f = std::move(objective)](std::span<const std::vector<double>> xs) {
        std::vector<Evaluation> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back({f(x), 0});
        return out;
    };
}

OptRunRecord minimize(Method method, const BatchObjective& objective, const Bounds& bounds, int budget,
                      std::uint64_t seed, const MinimizeOptions& options) {
    if (budget < 1) throw std::invalid_argument("budget must be at least 1");
    bounds.validate();

    OptRunRecord record;
    record.method = method;
    record.seed = seed;
    record.budget = budget;
    RunTracker tracker(record, objective, options);
    Rng rng(seed);

    switch (method) {
        case Method::random: random_search(tracker, bounds, rng); break;
        case Method::gss: generating_set_search(tracker, bounds, rng); break;
        case Method::snes: separable_nes(tracker, bounds, rng); break;
        case Method::de: differential_evolution(tracker, bounds, rng); break;
    }
    return record;
}

double evals_or_penalty(std::optional<int> evals, int budget) {
    return evals ? static_cast<double>(*evals) : static_cast<double>(budget) + 1.0;
}

}  // namespace morpho
