// Acceptance suite: one PASS/FAIL line per criterion. Thresholds below are
// fixed; a failing criterion stays failing.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "morpho/analysis/dtw.hpp"
#include "morpho/analysis/interference.hpp"
#include "morpho/analysis/stats.hpp"
#include "morpho/hill_climb.hpp"
#include "morpho/io/config.hpp"
#include "morpho/io/experiments.hpp"
#include "morpho/io/formats.hpp"
#include "morpho/landscape.hpp"
#include "morpho/rng.hpp"

namespace fs = std::filesystem;
using namespace morpho;

namespace {

// Pinned thresholds.
constexpr int kOracleMatrices = 1000;
constexpr double kCrit1Seconds = 1.0;
constexpr int kMirrorDesigns = 50;
constexpr int kMirrorGridN = 11;
constexpr double kCrit2Minutes = 10.0;
constexpr double kSeparationFactor = 5.0;
constexpr double kCrit3Minutes = 15.0;
constexpr double kMetricCorrelationR = 0.5;
constexpr double kMetricCorrelationP = 0.001;
constexpr int kTrainSample = 200;
constexpr int kTrainSeeds = 3;
constexpr int kTrainBudget = 3000;
constexpr double kEfficiencyR = -0.3;
constexpr double kEfficiencyP = 0.01;
constexpr double kCrit5Minutes = 120.0;
constexpr int kCooptSeeds = 15;
constexpr int kCooptBudget = 5000;
constexpr double kCooptP = 0.05;
constexpr double kCrit6Minutes = 60.0;
constexpr double kTrendP = 0.05;
constexpr int kDtwPairs = 500;
constexpr double kCrit8Seconds = 5.0;
constexpr std::size_t kExactMaxN = 10;
constexpr double kPearsonTolerance = 1e-6;
constexpr int kHillSeeds = 10;
constexpr double kMinBeatsSumFraction = 0.6;
constexpr int kRobustnessTriples = 100;
constexpr double kMaxFlipFraction = 0.05;
// Runtime limits quoted for 8 workers scale by 8 / min(cores, 8).
constexpr double kReferenceWorkers = 8.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    fs::path out;
    std::size_t workers = 8;
    double runtime_scale = 1.0;
    std::optional<fs::path> sweep_dir;  // root holding sweep/ (criterion 3 run)
    std::optional<fs::path> coopt_dir;  // root holding coopt/ (criterion 6 run)
    double sweep_seconds = 0.0;
    double coopt_seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig desk_config(const fs::path& root, std::size_t workers) {
    ExperimentConfig c;
    apply_profile(c, "desk");
    c.landscape.bins = 5;
    c.landscape.grid_n = 41;
    c.seed = 1;
    c.workers = static_cast<int>(workers);
    c.out = root.string();
    c.train.seeds = kTrainSeeds;
    c.train.budget = kTrainBudget;
    c.train.sample = kTrainSample;
    c.coopt.seeds = kCooptSeeds;
    c.coopt.budget = kCooptBudget;
    c.validate();
    return c;
}

const fs::path& ensure_sweep(Context& ctx) {
    if (!ctx.sweep_dir) {
        const auto root = ctx.out / "run-w8";
        fs::remove_all(root / "sweep");
        const auto t0 = std::chrono::steady_clock::now();
        experiments::sweep(desk_config(root, ctx.workers));
        ctx.sweep_seconds = seconds_since(t0);
        ctx.sweep_dir = root;
    }
    return *ctx.sweep_dir;
}

const fs::path& ensure_coopt(Context& ctx) {
    if (!ctx.coopt_dir) {
        const auto root = ctx.out / "run-w8";
        fs::remove_all(root / "coopt");
        const auto t0 = std::chrono::steady_clock::now();
        experiments::coopt(desk_config(root, ctx.workers));
        ctx.coopt_seconds = seconds_since(t0);
        ctx.coopt_dir = root;
    }
    return *ctx.coopt_dir;
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    }
    return out;
}

nlohmann::json find_metric(const std::vector<nlohmann::json>& lines, const std::string& metric) {
    for (const auto& j : lines) {
        if (j.value("metric", "") == metric) return j;
    }
    throw std::runtime_error("no '" + metric + "' line in report");
}

BodyDesign random_design(Rng& rng) {
    return {{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}, {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}};
}

// ---- criterion 1 ----------------------------------------------------------

Outcome metric_oracle(Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    int mismatches = 0;
    for (int t = 0; t < kOracleMatrices; ++t) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const int k = 1 + static_cast<int>(rng.below(5));
        const double density = rng.uniform();
        std::vector<SuccessMatrix> ms;
        for (int e = 0; e < k; ++e) {
            SuccessMatrix s{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n)};
            for (auto& c : s.cells) c = rng.uniform() < density;
            ms.push_back(std::move(s));
        }
        long full = 0, any = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                int count = 0;
                for (const auto& s : ms) count += s.at(i, j);
                full += count == k;
                any += count >= 1;
            }
        }
        const double ml = static_cast<double>(full) / static_cast<double>(n * n);
        const double mci = any == 0 ? 0.0 : static_cast<double>(full) / static_cast<double>(any);
        const auto m = design_metrics(overlap(ms));
        if (m.m_l != ml || m.m_ci != mci) ++mismatches;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < kCrit1Seconds,
            fmt::format("{} mismatches over {} matrices, {:.3f} s (limit {} s)", mismatches, kOracleMatrices, secs,
                        kCrit1Seconds)};
}

// ---- criterion 2 ----------------------------------------------------------

Outcome mirror_invariance(Context& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(202);
    std::vector<BodyDesign> designs;
    for (int i = 0; i < kMirrorDesigns; ++i) {
        const auto d = random_design(rng);
        designs.push_back(d);
        designs.push_back(mirror_design(d));
    }
    const auto m = evaluate_designs(designs, WeightGrid::make(kMirrorGridN), EnvironmentSet::diagonal(),
                                    SimProfile::desk(), ctx.workers);
    int mismatches = 0;
    double ml_sum = 0.0;
    for (int i = 0; i < kMirrorDesigns; ++i) {
        const auto& a = m[2 * i];
        const auto& b = m[2 * i + 1];
        if (a.m_l != b.m_l || a.m_ci != b.m_ci) ++mismatches;
        ml_sum += a.m_l;
    }
    const double secs = seconds_since(t0);
    const double limit = kCrit2Minutes * 60.0 * ctx.runtime_scale;
    return {mismatches == 0 && secs < limit,
            fmt::format("{} of {} designs differ from their mirror (mean M_L {:.4f}), {:.0f} s (limit {:.0f} s)",
                        mismatches, kMirrorDesigns, ml_sum / kMirrorDesigns, secs, limit)};
}

// ---- criteria 3 and 4 -----------------------------------------------------

Outcome design_separation(Context& ctx) {
    const auto rows = read_metrics_csv(ensure_sweep(ctx) / "sweep" / "metrics.csv");
    const auto canonical = BodyDesign::canonical();
    double canon_ml = -1.0, best_ml = -1.0, coincident_max = 0.0;
    std::size_t best_index = 0, coincident = 0;
    for (const auto& r : rows) {
        if (r.design == canonical) canon_ml = r.m_l;
        if (r.m_l > best_ml) {
            best_ml = r.m_l;
            best_index = r.index;
        }
        if (r.design.l1 == r.design.l2) {
            ++coincident;
            coincident_max = std::max(coincident_max, r.m_l);
        }
    }
    if (canon_ml < 0) return {false, "canonical design missing from sweep"};
    const double limit = kCrit3Minutes * 60.0 * ctx.runtime_scale;
    const bool separated = best_ml >= kSeparationFactor * canon_ml;
    const bool pass = separated && coincident > 0 && coincident_max == 0.0 && ctx.sweep_seconds < limit;
    return {pass, fmt::format("canonical M_L {:.6f}, best M_L {:.6f} (design {}), ratio {:.2f} (need >= {}); "
                              "{} coincident designs, max M_L {}; sweep {:.0f} s (limit {:.0f} s)",
                              canon_ml, best_ml, best_index, canon_ml > 0 ? best_ml / canon_ml : INFINITY,
                              kSeparationFactor, coincident, coincident_max, ctx.sweep_seconds, limit)};
}

Outcome metric_correlation(Context& ctx) {
    const auto rows = read_metrics_csv(ensure_sweep(ctx) / "sweep" / "metrics.csv");
    std::vector<double> ml, mci;
    for (const auto& r : rows) {
        ml.push_back(r.m_l);
        mci.push_back(r.m_ci);
    }
    const auto s = pearson(ml, mci);
    return {s.statistic > kMetricCorrelationR && s.p_value < kMetricCorrelationP,
            fmt::format("Pearson r(M_L, M_CI) = {:.4f}, p = {:.3g}, n = {} (need r > {}, p < {})", s.statistic,
                        s.p_value, s.n, kMetricCorrelationR, kMetricCorrelationP)};
}

// ---- criterion 5 ----------------------------------------------------------

Outcome sample_efficiency(Context& ctx) {
    const auto root = ensure_sweep(ctx);
    fs::remove_all(root / "train");
    const auto t0 = std::chrono::steady_clock::now();
    experiments::train(desk_config(root, ctx.workers));
    const double secs = seconds_since(t0);
    const auto summary = read_training_summary_csv(root / "train" / "training_summary.csv");
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_method;
    std::set<std::size_t> designs;
    for (const auto& r : summary) {
        by_method[r.method].first.push_back(r.m_l);
        by_method[r.method].second.push_back(r.mean_evals);
        designs.insert(r.design_index);
    }
    bool pass = by_method.size() == 4 && designs.size() == static_cast<std::size_t>(kTrainSample);
    std::string detail = fmt::format("{} designs;", designs.size());
    for (const auto& [method, xy] : by_method) {
        const auto s = pearson(xy.first, xy.second);
        pass = pass && s.statistic < kEfficiencyR && s.p_value < kEfficiencyP;
        detail += fmt::format(" {} r = {:.4f} p = {:.3g};", method, s.statistic, s.p_value);
    }
    const double limit = kCrit5Minutes * 60.0 * ctx.runtime_scale;
    pass = pass && secs < limit;
    detail += fmt::format(" need r < {} and p < {}; {:.0f} s (limit {:.0f} s)", kEfficiencyR, kEfficiencyP, secs, limit);
    return {pass, detail};
}

// ---- criteria 6 and 7 -----------------------------------------------------

Outcome coopt_superiority(Context& ctx) {
    const auto report = read_jsonl(ensure_coopt(ctx) / "coopt" / "coopt_report.jsonl");
    const auto mw = find_metric(report, "evals_to_full_success_coopt_vs_baseline");
    const double u = mw.at("statistic").get<double>();
    const double p = mw.at("p").get<double>();
    const double n1 = mw.at("n1").get<double>(), n2 = mw.at("n2").get<double>();
    // Smaller evaluation counts are better: co-optimisation dominates when its U
    // (pairs where it needed more evaluations) is below n1 n2 / 2.
    const bool dominates = u < n1 * n2 / 2.0;
    const double limit = kCrit6Minutes * 60.0;
    return {dominates && p < kCooptP && ctx.coopt_seconds < limit,
            fmt::format("U = {} of {} pairs, p = {:.3g} (need U < {} and p < {}); medians coopt {} baseline {}; "
                        "censored coopt {} baseline {}; {:.0f} s (limit {:.0f} s)",
                        u, n1 * n2, p, n1 * n2 / 2.0, kCooptP, mw.at("median_coopt").dump(),
                        mw.at("median_baseline").dump(), mw.at("censored_coopt").dump(),
                        mw.at("censored_baseline").dump(), ctx.coopt_seconds, limit)};
}

Outcome homeostasis_trend(Context& ctx) {
    const auto report = read_jsonl(ensure_coopt(ctx) / "coopt" / "coopt_report.jsonl");
    const auto s = find_metric(report, "homeostasis_trend_coopt");
    if (s.contains("error")) return {false, "trend not computable: " + s.at("error").get<std::string>()};
    const double rho = s.at("statistic").get<double>();
    const double p = s.at("p").get<double>();
    return {rho < 0.0 && p < kTrendP,
            fmt::format("Spearman rho(admission order, DTW) = {:.4f}, p = {:.3g}, n = {} (need rho < 0, p < {})", rho,
                        p, s.at("n").get<std::size_t>(), kTrendP)};
}

// ---- criterion 8 ----------------------------------------------------------

double exhaustive_dtw(const std::vector<double>& a, const std::vector<double>& b) {
    double best = INFINITY;
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double cost) {
        cost += std::abs(a[i] - b[j]);
        if (i + 1 == a.size() && j + 1 == b.size()) {
            best = std::min(best, cost);
            return;
        }
        if (i + 1 < a.size()) walk(i + 1, j, cost);
        if (j + 1 < b.size()) walk(i, j + 1, cost);
        if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, cost);
    };
    walk(0, 0, 0.0);
    return best;
}

Outcome dtw_oracle(Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(808);
    auto signal = [&] {
        std::vector<double> s(1 + rng.below(7));
        for (auto& v : s) v = static_cast<double>(rng.below(3));
        return s;
    };
    int mismatches = 0;
    for (int t = 0; t < kDtwPairs; ++t) {
        const auto a = signal();
        const auto b = signal();
        if (dtw(a, b) != exhaustive_dtw(a, b)) ++mismatches;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < kCrit8Seconds,
            fmt::format("{} mismatches over {} pairs, {:.3f} s (limit {} s)", mismatches, kDtwPairs, secs,
                        kCrit8Seconds)};
}

// ---- criterion 9 ----------------------------------------------------------

double t_tail_by_integration(double t, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
    auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
    const int n = 400000;
    const double b = std::abs(t), h = b / n;
    double s = pdf(0.0) + pdf(b);
    for (int i = 1; i < n; ++i) s += pdf(i * h) * (i % 2 ? 4 : 2);
    return 1.0 - 2.0 * s * h / 3.0;
}

Outcome statistics_oracles(Context&) {
    // Mann-Whitney: every labeling of ranks 0..n-1 into samples of n1 and n2.
    std::size_t cases = 0, mw_mismatch = 0;
    for (std::size_t n = 2; n <= kExactMaxN; ++n) {
        for (std::size_t n1 = 1; n1 < n; ++n1) {
            std::vector<double> all_u;
            std::vector<std::uint32_t> masks;
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
                double u = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (!(mask >> i & 1)) continue;
                    for (std::size_t j = 0; j < n; ++j) u += (!(mask >> j & 1) && i > j) ? 1.0 : 0.0;
                }
                all_u.push_back(u);
                masks.push_back(mask);
            }
            for (std::size_t m = 0; m < masks.size(); ++m) {
                std::vector<double> a, b;
                for (std::size_t i = 0; i < n; ++i) ((masks[m] >> i & 1) ? a : b).push_back(static_cast<double>(i));
                const double u = all_u[m];
                const auto below = std::count_if(all_u.begin(), all_u.end(), [&](double v) { return v <= u; });
                const auto above = std::count_if(all_u.begin(), all_u.end(), [&](double v) { return v >= u; });
                const double p = std::min(1.0, 2.0 * static_cast<double>(std::min(below, above)) /
                                                   static_cast<double>(all_u.size()));
                const auto r = mann_whitney(a, b);
                if (r.statistic != u || r.p_value != p) ++mw_mismatch;
                ++cases;
            }
        }
    }
    // Pearson: random samples of several sizes against the integrated tail.
    Rng rng(909);
    double worst = 0.0;
    int pearson_cases = 0;
    for (std::size_t n : {3u, 4u, 5u, 8u, 12u, 20u, 40u}) {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> x(n), y(n);
            const double slope = rng.uniform(-1, 1);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = rng.normal();
                y[i] = slope * x[i] + rng.normal();
            }
            const auto r = pearson(x, y);
            const double df = static_cast<double>(n) - 2.0;
            const double t = r.statistic * std::sqrt(df / (1.0 - r.statistic * r.statistic));
            worst = std::max(worst, std::abs(r.p_value - t_tail_by_integration(t, df)));
            ++pearson_cases;
        }
    }
    return {mw_mismatch == 0 && worst <= kPearsonTolerance,
            fmt::format("Mann-Whitney: {} mismatches over {} labelings (n1 + n2 <= {}); Pearson: max |dp| = {:.2e} over "
                        "{} samples (tolerance {})",
                        mw_mismatch, cases, kExactMaxN, worst, pearson_cases, kPearsonTolerance)};
}

// ---- criterion 10 ---------------------------------------------------------

Outcome lineage_machinery(Context& ctx) {
    std::vector<std::string> problems;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    };

    const std::vector<double> f{0.5, 2.0};
    expect(combine_fitness(FitnessCombinator::sum, f) == 2.5, "sum");
    expect(combine_fitness(FitnessCombinator::product, f) == 1.0, "product");
    expect(combine_fitness(FitnessCombinator::min, f) == 0.5, "min");
    expect(delta_distances(std::vector<double>{5, 5}, std::vector<double>{3, 6}) == std::vector<double>{2, -1}, "delta");
    expect(angle_to_ones(std::vector<double>{1, 1, 1, 1}) == 0.0, "angle 0");
    expect(std::abs(angle_to_ones(std::vector<double>{1, 0, 0, 0}) - 60.0) <= 1e-12, "angle 60");

    LineageLog hand;
    hand.k = 2;
    hand.final_distances = {{1.0, 1.0}};
    hand.events.resize(1);
    for (const auto& d : std::vector<std::vector<double>>{{1, 1}, {1, -1}, {2, 3}}) {
        MutationEvent e;
        e.delta = d;
        hand.events[0].push_back(e);
    }
    const std::vector<LineageLog> hand_logs{hand};
    const auto hm = lineage_metrics(hand_logs, 2);
    expect(hm.m3 && std::abs(*hm.m3 - (2 * std::sqrt(2.0) + std::sqrt(13.0)) / 3.0) <= 1e-15, "M3");
    expect(hm.m4 && *hm.m4 == 2.0 / 3.0, "M4");

    // 20-run suite: 10 paired seeds for each of sum and min at full size.
    const auto envs = EnvironmentSet::diagonal();
    int wins = 0, non_monotone = 0;
    std::string per_seed;
    const auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < kHillSeeds; ++rep) {
        std::optional<double> m4[2];
        for (int side = 0; side < 2; ++side) {
            HillClimbConfig cfg;
            cfg.kind = side == 0 ? FitnessCombinator::sum : FitnessCombinator::min;
            cfg.seed = experiments::hillclimb_seed(1, rep);
            const auto log = hill_climb(envs, SimProfile::desk(), cfg);
            for (const auto& trace : log.fitness_trace) {
                for (std::size_t g = 1; g < trace.size(); ++g) non_monotone += trace[g] < trace[g - 1];
            }
            const std::vector<LineageLog> one{log};
            m4[side] = lineage_metrics(one, envs.size()).m4;
        }
        const double s = m4[0].value_or(0.0), m = m4[1].value_or(0.0);
        wins += m >= s;
        per_seed += fmt::format(" {:.2f}/{:.2f}", m, s);
    }
    (void)ctx;
    expect(non_monotone == 0, fmt::format("{} fitness decreases", non_monotone));
    const double fraction = static_cast<double>(wins) / kHillSeeds;
    expect(fraction >= kMinBeatsSumFraction, "min M4 >= sum M4 too rarely");
    std::string problem_text;
    for (const auto& p : problems) problem_text += " " + p + ";";
    return {problems.empty(),
            fmt::format("hand values and traces {}; min M4 >= sum M4 in {}/{} seeds (need >= {:.0f}%; min/sum:{}); "
                        "{:.0f} s{}",
                        problems.empty() ? "ok" : "checked", wins, kHillSeeds, 100 * kMinBeatsSumFraction, per_seed,
                        seconds_since(t0), problems.empty() ? "" : "; failed:" + problem_text)};
}

// ---- criterion 11 ---------------------------------------------------------

std::vector<std::string> differing_files(const fs::path& a, const fs::path& b) {
    std::set<std::string> names;
    for (const auto* root : {&a, &b}) {
        for (const auto& e : fs::recursive_directory_iterator(*root)) {
            if (e.is_regular_file()) names.insert(fs::relative(e.path(), *root).generic_string());
        }
    }
    std::vector<std::string> diff;
    for (const auto& n : names) {
        if (!fs::exists(a / n) || !fs::exists(b / n) || read_file_bytes(a / n) != read_file_bytes(b / n)) {
            diff.push_back(n);
        }
    }
    return diff;
}

Outcome determinism(Context& ctx) {
    const auto multi = ensure_sweep(ctx);
    ensure_coopt(ctx);
    const auto single = ctx.out / "run-w1";
    fs::remove_all(single);
    const auto cfg = desk_config(single, 1);
    experiments::sweep(cfg);
    experiments::coopt(cfg);
    std::size_t files = 0;
    std::vector<std::string> diff;
    for (const char* sub : {"sweep", "coopt"}) {
        for (const auto& e : fs::recursive_directory_iterator(single / sub)) files += e.is_regular_file();
        for (auto& d : differing_files(multi / sub, single / sub)) diff.push_back(std::string(sub) + "/" + d);
    }
    std::string listed;
    for (std::size_t i = 0; i < std::min<std::size_t>(diff.size(), 5); ++i) listed += " " + diff[i];
    return {diff.empty() && files > 0,
            fmt::format("{} files compared between {} and 1 workers, {} differ{}", files, ctx.workers, diff.size(),
                        listed)};
}

// ---- criterion 12 ---------------------------------------------------------

Outcome integration_robustness(Context& ctx) {
    Rng rng(1212);
    const auto envs = EnvironmentSet::diagonal();
    const auto coarse = SimProfile::desk();
    SimProfile fine = coarse;
    fine.dt = coarse.dt / 2.0;
    fine.steps = coarse.steps * 2;
    std::vector<TrialSpec> specs;
    for (int t = 0; t < kRobustnessTriples; ++t) {
        const auto d = random_design(rng);
        const Policy p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        specs.push_back({d, p, envs[rng.below(envs.size())].start});
    }
    const auto a = run_trials(specs, coarse, ctx.workers);
    const auto b = run_trials(specs, fine, ctx.workers);
    int flips = 0, successes = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        flips += a[i].success != b[i].success;
        successes += a[i].success;
    }
    const double fraction = static_cast<double>(flips) / kRobustnessTriples;
    return {fraction <= kMaxFlipFraction,
            fmt::format("{} of {} classifications change when dt is halved ({} successes at dt {}); limit {:.0f}%",
                        flips, kRobustnessTriples, successes, coarse.dt, 100 * kMaxFlipFraction)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morpho acceptance suite"};
    std::string out = "acceptance-out";
    std::size_t workers = 8;
    std::vector<int> only;
    app.add_option("--out", out, "scratch directory for experiment outputs");
    app.add_option("--workers", workers, "worker threads for the multi-worker runs")->check(CLI::PositiveNumber);
    app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 12));
    CLI11_PARSE(app, argc, argv);

    Context ctx;
    ctx.out = out;
    ctx.workers = workers;
    const double cores = std::max(1u, std::thread::hardware_concurrency());
    ctx.runtime_scale = kReferenceWorkers / std::min(cores, kReferenceWorkers);
    fs::create_directories(ctx.out);

    const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
        {"metric oracle equivalence", metric_oracle},
        {"mirror-symmetry invariance", mirror_invariance},
        {"design separation", design_separation},
        {"metric-metric correlation", metric_correlation},
        {"sample-efficiency prediction", sample_efficiency},
        {"co-optimisation superiority", coopt_superiority},
        {"homeostasis trend", homeostasis_trend},
        {"dtw oracle", dtw_oracle},
        {"statistics oracles", statistics_oracles},
        {"hill-climber machinery", lineage_machinery},
        {"determinism across worker counts", determinism},
        {"integration robustness", integration_robustness},
    };

    std::fprintf(stdout, "acceptance: %zu workers, %.0f cores, runtime limits x%.0f\n", workers, cores,
                 ctx.runtime_scale);
    std::fflush(stdout);
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome o;
        try {
            o = criteria[i].second(ctx);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::fprintf(stdout, "CRITERION %2d %-34s %s  %s\n", id, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                     o.detail.c_str());
        std::fflush(stdout);
    }
    std::fprintf(stdout, "acceptance: %d failed\n", failed);
    return failed == 0 ? 0 : 1;
}
