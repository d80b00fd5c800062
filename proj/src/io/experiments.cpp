#include "morpho/io/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "morpho/analysis/dtw.hpp"
#include "morpho/analysis/interference.hpp"
#include "morpho/analysis/stats.hpp"
#include "morpho/coopt.hpp"
#include "morpho/hill_climb.hpp"
#include "morpho/io/manifest.hpp"
#include "morpho/landscape.hpp"
#include "morpho/optimizers.hpp"
#include "morpho/parallel.hpp"
#include "morpho/rng.hpp"

#ifndef MORPHO_VERSION
#define MORPHO_VERSION "0.0.0"
#endif

namespace morpho::experiments {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t workers_of(const ExperimentConfig& c) { return resolve_workers(static_cast<std::size_t>(c.workers)); }

fs::path command_dir(const ExperimentConfig& c, std::string_view command) { return fs::path(c.out) / command; }

json header(const ExperimentConfig& c, std::string_view command, json parameters) {
    const json snapshot = config_snapshot(c);
    return {{"tool", "morpho"},
            {"version", tool_version()},
            {"command", command},
            {"rng", Rng::kName},
            {"config", snapshot},
            {"config_sha256", sha256_hex(snapshot.dump())},
            {"parameters", std::move(parameters)}};
}

json profile_json(const SimProfile& p) {
    return {{"dt", p.dt}, {"steps", p.steps}, {"success_radius", p.success_radius}, {"sensor_floor", p.sensor_floor}};
}

json design_json(const BodyDesign& d) { return {{"l1", {d.l1.x, d.l1.y}}, {"l2", {d.l2.x, d.l2.y}}}; }

json genome_json(const Genome& g) {
    return {{"l1", {g.design.l1.x, g.design.l1.y}}, {"l2", {g.design.l2.x, g.design.l2.y}}, {"w", {g.policy.w1, g.policy.w2}}};
}

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json stat_json(std::string_view metric, std::string_view test, const StatResult& r) {
    json j = {{"metric", metric}, {"test", test}, {"statistic", r.statistic}, {"p", r.p_value}, {"n", r.n}};
    if (r.n1 + r.n2 > 0) {
        j["n1"] = r.n1;
        j["n2"] = r.n2;
    }
    return j;
}

// Correlation record that carries the failure reason instead of aborting the
// whole report when a series is degenerate.
json correlation_json(std::string_view metric, std::string_view test, std::span<const double> x,
                      std::span<const double> y) {
    try {
        const auto r = test == "pearson" ? pearson(x, y) : spearman(x, y);
        return stat_json(metric, test, r);
    } catch (const std::invalid_argument& e) {
        return {{"metric", metric}, {"test", test}, {"n", x.size()}, {"error", e.what()}};
    }
}

std::string jsonl(std::span<const json> records) {
    std::string s;
    for (const auto& r : records) s += r.dump() + "\n";
    return s;
}

std::vector<json> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " (run the producing command first)");
    std::vector<json> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw std::runtime_error(fmt::format("{}:{}: {}", path.string(), number, e.what()));
        }
    }
    return out;
}

fs::path metrics_path(const ExperimentConfig& c) {
    return c.train.metrics.empty() ? command_dir(c, "sweep") / "metrics.csv" : fs::path(c.train.metrics);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view tool_version() { return MORPHO_VERSION; }

json config_snapshot(const ExperimentConfig& c) {
    json genomes = json::array();
    for (const auto& g : c.dtw_genomes) genomes.push_back(genome_json(g));
    return {{"profile",
             {{"name", c.profile.name},
              {"dt", c.profile.dt},
              {"steps", c.profile.steps},
              {"success_radius", c.profile.success_radius},
              {"sensor_floor", c.profile.sensor_floor}}},
            {"landscape",
             {{"bins", c.landscape.bins},
              {"grid_n", c.landscape.grid_n},
              {"store_success_matrices", c.landscape.store_success_matrices}}},
            {"environments", {{"d", c.environments.d}, {"count", c.environments.count}, {"headings", c.environments.headings}}},
            {"train",
             {{"methods", c.train.methods},
              {"seeds", c.train.seeds},
              {"budget", c.train.budget},
              {"designs", c.train.designs},
              {"sample", c.train.sample},
              {"metrics", c.train.metrics}}},
            {"coopt", {{"seeds", c.coopt.seeds}, {"budget", c.coopt.budget}, {"dtw_max_points", c.coopt.dtw_max_points}}},
            {"hillclimb",
             {{"combinators", c.hillclimb.combinators},
              {"seeds", c.hillclimb.seeds},
              {"pop", c.hillclimb.pop},
              {"generations", c.hillclimb.generations},
              {"m", c.hillclimb.m}}},
            {"dtw", {{"genomes", genomes}}},
            {"seed", c.seed}};
}

std::uint64_t hillclimb_seed(std::uint64_t master, int repetition) {
    return mix_seed(master, 0x68696c6c, static_cast<std::uint64_t>(repetition));
}

std::uint64_t coopt_seed(std::uint64_t master, CooptMode mode, int repetition) {
    return mix_seed(master, 0x636f6f70, static_cast<std::uint64_t>(mode), static_cast<std::uint64_t>(repetition));
}

std::vector<std::size_t> stratified_sample(std::span<const MetricsTableRow> rows, std::size_t count) {
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].m_l != rows[b].m_l) return rows[a].m_l < rows[b].m_l;
        return rows[a].index < rows[b].index;
    });
    std::vector<std::size_t> picked;
    if (count >= rows.size()) {
        for (const auto& r : rows) picked.push_back(r.index);
    } else if (count == 1) {
        picked.push_back(rows[order[(rows.size() - 1) / 2]].index);
    } else {
        const double span = static_cast<double>(rows.size() - 1);
        for (std::size_t i = 0; i < count; ++i) {
            const auto pos = static_cast<std::size_t>(std::llround(static_cast<double>(i) * span / static_cast<double>(count - 1)));
            picked.push_back(rows[order[pos]].index);
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

void sweep(const ExperimentConfig& c) {
    const auto dgrid = DesignGrid::make(c.landscape.bins);
    const auto wgrid = WeightGrid::make(c.landscape.grid_n);
    const auto envset = c.envset();
    const auto profile = c.sim_profile();

    OutputDir out(command_dir(c, "sweep"),
                  header(c, "sweep",
                         {{"designs", dgrid.size()},
                          {"environments", envset.size()},
                          {"design_positions", dgrid.positions},
                          {"weight_values", wgrid.values},
                          {"profile", profile_json(profile)},
                          {"overlap_format", "OVLP v1"}}));

    std::string csv = metrics_csv_header(envset.size());
    const std::size_t total = dgrid.size();
    std::size_t done = 0;
    SweepOptions options;
    options.workers = workers_of(c);
    options.keep_success = c.landscape.store_success_matrices;
    sweep_designs(dgrid, wgrid, envset, profile, options, [&](DesignOutcome&& o) {
        const auto stem = design_file_stem(o.row.index);
        csv += metrics_csv_row(o.row);
        out.write("overlap/" + stem + ".ovlp", encode_overlap(o.overlap));
        if (options.keep_success) out.write("success/" + stem + ".smat", encode_success(o.success));
        if (++done % std::max<std::size_t>(1, total / 20) == 0 || done == total) {
            fmt::print(stderr, "sweep: {}/{} designs\n", done, total);
        }
    });
    out.write("metrics.csv", csv);
    out.finish();
}

void train(const ExperimentConfig& c) {
    const auto envset = c.envset();
    const auto profile = c.sim_profile();
    const auto dgrid = DesignGrid::make(c.landscape.bins);

    std::map<std::size_t, MetricsTableRow> known;
    const auto table_path = metrics_path(c);
    const bool have_table = fs::exists(table_path);
    if (have_table) {
        for (auto& r : read_metrics_csv(table_path)) known.emplace(r.index, std::move(r));
    }

    std::vector<std::size_t> indices = c.train.designs;
    if (indices.empty()) {
        if (!have_table) {
            throw std::runtime_error("train: no designs listed and no metrics table at " + table_path.string() +
                                     " (run sweep first or set train.designs)");
        }
        std::vector<MetricsTableRow> rows;
        for (const auto& [i, r] : known) rows.push_back(r);
        indices = stratified_sample(rows, static_cast<std::size_t>(c.train.sample));
    }

    std::vector<TrainTask> tasks;
    std::vector<BodyDesign> missing;
    for (auto i : indices) {
        if (i >= dgrid.size()) throw std::runtime_error(fmt::format("train: design {} is not on the grid", i));
        tasks.push_back({i, dgrid.design(i)});
        if (!known.contains(i)) missing.push_back(dgrid.design(i));
    }
    if (!missing.empty()) {
        const auto metrics = evaluate_designs(missing, WeightGrid::make(c.landscape.grid_n), envset, profile, workers_of(c));
        std::size_t m = 0;
        for (auto i : indices) {
            if (known.contains(i)) continue;
            known[i] = {i, dgrid.design(i), metrics[m].counts, metrics[m].m_l, metrics[m].m_ci};
            ++m;
        }
    }

    TrainConfig tc;
    tc.methods.clear();
    for (const auto& m : c.train.methods) tc.methods.push_back(parse_method(m));
    tc.seeds_per_design = c.train.seeds;
    tc.budget = c.train.budget;
    tc.master_seed = c.seed;
    tc.workers = workers_of(c);

    json params = {{"designs", indices},
                   {"profile", profile_json(profile)},
                   {"censored_value", "budget + 1"},
                   {"stop_on_full_success", tc.stop_on_full_success},
                   {"gss", {{"initial_step", hyper::kGssInitialStep}, {"expand", hyper::kGssExpand}, {"contract", hyper::kGssContract}, {"min_step", hyper::kGssMinStep}}},
                   {"snes", {{"population", hyper::snes_population(2)}, {"initial_sigma", hyper::kSnesInitialSigma}, {"mean_rate", hyper::kSnesMeanRate}, {"sigma_rate", hyper::snes_sigma_rate(2)}}},
                   {"de", {{"population", hyper::kDePopulation}, {"F", hyper::kDeWeight}, {"CR", hyper::kDeCrossover}}}};
    OutputDir out(command_dir(c, "train"), header(c, "train", std::move(params)));

    fmt::print(stderr, "train: {} designs x {} methods x {} seeds\n", tasks.size(), tc.methods.size(), tc.seeds_per_design);
    const auto result = train_sweep(tasks, tc, envset, profile);

    std::vector<TrainingSummaryRecord> summary;
    for (const auto& s : result.summary) {
        const auto& m = known.at(s.design_index);
        summary.push_back({s.design_index, std::string(to_string(s.method)), s.runs, s.mean_evals, s.censor_rate, m.m_l, m.m_ci});
    }
    out.write("training.csv", training_csv(result.rows));
    out.write("training_summary.csv", training_summary_csv(summary));
    out.finish();
}

void coopt(const ExperimentConfig& c) {
    const auto envset = c.envset();
    const auto profile = c.sim_profile();
    const int seeds = c.coopt.seeds;

    OutputDir out(command_dir(c, "coopt"),
                  header(c, "coopt",
                         {{"population", coopt_hyper::kPopulation},
                          {"crossover_rate", coopt_hyper::kCrossoverRate},
                          {"gene_swap", coopt_hyper::kGeneSwap},
                          {"mutation_sigma", coopt_hyper::kMutationSigma},
                          {"mutation_rate", "1 / genes"},
                          {"dtw_max_points", c.coopt.dtw_max_points},
                          {"profile", profile_json(profile)}}));

    const CooptMode modes[] = {CooptMode::coopt, CooptMode::baseline};
    fmt::print(stderr, "coopt: {} runs per mode, budget {}\n", seeds, c.coopt.budget);
    const auto records = parallel_map(2 * static_cast<std::size_t>(seeds), workers_of(c), [&](std::size_t r) {
        const CooptMode mode = modes[r / static_cast<std::size_t>(seeds)];
        const int rep = static_cast<int>(r % static_cast<std::size_t>(seeds));
        CooptConfig cc;
        cc.budget = c.coopt.budget;
        cc.seed = coopt_seed(c.seed, mode, rep);
        cc.dtw_max_points = static_cast<std::size_t>(c.coopt.dtw_max_points);
        return run_coopt(mode, envset, profile, cc);
    });

    std::vector<json> lines;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string mode(to_string(rec.mode));
        const int rep = static_cast<int>(r % static_cast<std::size_t>(seeds));
        lines.push_back({{"type", "run"},
                         {"mode", mode},
                         {"rep", rep},
                         {"seed", rec.seed},
                         {"budget", rec.budget},
                         {"evals_used", rec.evals_used},
                         {"generations", rec.generations},
                         {"evals_to_full_success", optional_int(rec.evals_to_full_success)},
                         {"archive_size", rec.archive.size()},
                         {"best", {{"eval", rec.best.eval}, {"genome", genome_json(rec.best.genome)}, {"objectives", rec.best.objectives}}}});
        for (const auto& cp : rec.curve) {
            lines.push_back({{"type", "checkpoint"}, {"mode", mode}, {"rep", rep}, {"eval", cp.eval}, {"best_loss", cp.best_loss}, {"envs_solved", cp.envs_solved}});
        }
        for (const auto& a : rec.admissions) {
            lines.push_back({{"type", "admission"},
                             {"mode", mode},
                             {"rep", rep},
                             {"eval", a.entry.eval},
                             {"generation", a.entry.generation},
                             {"genome", genome_json(a.entry.genome)},
                             {"objectives", a.entry.objectives},
                             {"dtw", a.dtw}});
        }
    }
    out.write("coopt_runs.jsonl", jsonl(lines));

    std::span<const CooptRunRecord> co(records.data(), static_cast<std::size_t>(seeds));
    std::span<const CooptRunRecord> base(records.data() + seeds, static_cast<std::size_t>(seeds));
    std::vector<json> report;
    auto evals = [](std::span<const CooptRunRecord> runs) {
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(evals_or_penalty(r.evals_to_full_success, r.budget));
        return v;
    };
    auto censored = [](std::span<const CooptRunRecord> runs) {
        return std::count_if(runs.begin(), runs.end(), [](const CooptRunRecord& r) { return r.censored(); });
    };
    json mw = stat_json("evals_to_full_success_coopt_vs_baseline", "mann_whitney", compare_runs(co, base));
    mw["median_coopt"] = median(evals(co));
    mw["median_baseline"] = median(evals(base));
    mw["censored_coopt"] = censored(co);
    mw["censored_baseline"] = censored(base);
    report.push_back(mw);

    for (auto group : {co, base}) {
        std::vector<double> order, scores;
        for (const auto& r : group) {
            for (const auto& a : r.admissions) {
                order.push_back(a.entry.eval);
                scores.push_back(a.dtw);
            }
        }
        const std::string mode(to_string(group.front().mode));
        report.push_back(correlation_json("homeostasis_trend_" + mode, "spearman", order, scores));
    }
    out.write("coopt_report.jsonl", jsonl(report));
    out.finish();
}

void dtw(const ExperimentConfig& c) {
    if (c.dtw_genomes.empty()) throw std::runtime_error("dtw: no genomes listed under dtw.genomes");
    const auto envset = c.envset();
    const auto profile = c.sim_profile();
    OutputDir out(command_dir(c, "dtw"),
                  header(c, "dtw", {{"max_points", c.coopt.dtw_max_points}, {"profile", profile_json(profile)}}));

    const auto rows = parallel_map(c.dtw_genomes.size(), workers_of(c), [&](std::size_t i) {
        const auto& g = c.dtw_genomes[i];
        const auto trials = evaluate_all(g.design, g.policy, envset, profile);
        const double score = aggregate_dtw(trials, static_cast<std::size_t>(c.coopt.dtw_max_points));
        double total = 0.0;
        int solved = 0;
        for (const auto& t : trials) {
            total += t.min_distance;
            solved += t.success ? 1 : 0;
        }
        return fmt::format("{},{},{},{},{},{},{},{},{}\n", format_real(g.design.l1.x), format_real(g.design.l1.y),
                           format_real(g.design.l2.x), format_real(g.design.l2.y), format_real(g.policy.w1),
                           format_real(g.policy.w2), format_real(score), format_real(total), solved);
    });
    std::string csv = "l1x,l1y,l2x,l2y,w1,w2,dtw,loss,envs_solved\n";
    for (const auto& r : rows) csv += r;
    out.write("dtw.csv", csv);
    out.finish();
}

void stats(const ExperimentConfig& c) {
    const auto table_path = metrics_path(c);
    const auto rows = read_metrics_csv(table_path);
    OutputDir out(command_dir(c, "stats"), header(c, "stats", {{"metrics", table_path.string()}}));

    std::vector<double> ml, mci;
    for (const auto& r : rows) {
        ml.push_back(r.m_l);
        mci.push_back(r.m_ci);
    }
    std::vector<json> report;
    report.push_back(correlation_json("m_l_vs_m_ci", "pearson", ml, mci));
    report.push_back(correlation_json("m_l_vs_m_ci", "spearman", ml, mci));

    const auto summary_path = command_dir(c, "train") / "training_summary.csv";
    if (fs::exists(summary_path)) {
        const auto summary = read_training_summary_csv(summary_path);
        std::vector<std::string> methods;
        for (const auto& s : summary) {
            if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) methods.push_back(s.method);
        }
        for (const auto& m : methods) {
            std::vector<double> x, y, z;
            for (const auto& s : summary) {
                if (s.method != m) continue;
                x.push_back(s.m_l);
                z.push_back(s.m_ci);
                y.push_back(s.mean_evals);
            }
            for (auto test : {"pearson", "spearman"}) {
                auto a = correlation_json("m_l_vs_mean_evals", test, x, y);
                a["method"] = m;
                report.push_back(a);
                auto b = correlation_json("m_ci_vs_mean_evals", test, z, y);
                b["method"] = m;
                report.push_back(b);
            }
        }
    }
    out.write("stats_report.jsonl", jsonl(report));
    out.finish();
}

void hillclimb(const ExperimentConfig& c) {
    const auto envset = c.envset();
    const auto profile = c.sim_profile();
    const auto& h = c.hillclimb;
    OutputDir out(command_dir(c, "hillclimb"),
                  header(c, "hillclimb",
                         {{"design", design_json(BodyDesign::canonical())},
                          {"fitness", "1 / max(end_distance, success_radius)^2"},
                          {"profile", profile_json(profile)}}));

    std::vector<FitnessCombinator> kinds;
    for (const auto& k : h.combinators) kinds.push_back(parse_combinator(k));
    const std::size_t seeds = static_cast<std::size_t>(h.seeds);
    fmt::print(stderr, "hillclimb: {} combinators x {} seeds, pop {} for {} generations\n", kinds.size(), seeds, h.pop, h.generations);
    const auto logs = parallel_map(kinds.size() * seeds, workers_of(c), [&](std::size_t r) {
        HillClimbConfig hc;
        hc.kind = kinds[r / seeds];
        hc.pop = h.pop;
        hc.generations = h.generations;
        hc.m = h.m;
        hc.seed = hillclimb_seed(c.seed, static_cast<int>(r % seeds));
        return hill_climb(envset, profile, hc);
    });

    std::vector<json> lines;
    for (std::size_t r = 0; r < logs.size(); ++r) {
        const auto& log = logs[r];
        const std::string kind(to_string(log.kind));
        const int rep = static_cast<int>(r % seeds);
        json finals = json::array();
        for (std::size_t i = 0; i < log.final_policies.size(); ++i) {
            finals.push_back({{"w", {log.final_policies[i].w1, log.final_policies[i].w2}},
                              {"fitness", log.final_fitness[i]},
                              {"distances", log.final_distances[i]}});
        }
        lines.push_back({{"type", "run"}, {"combinator", kind}, {"rep", rep}, {"seed", log.seed}, {"k", log.k},
                         {"generations", log.generations}, {"champion", champion_index(log)}, {"final", finals}});
        for (const auto& climber : log.events) {
            for (const auto& e : climber) {
                lines.push_back({{"type", "mutation"}, {"combinator", kind}, {"rep", rep}, {"climber", e.climber},
                                 {"generation", e.generation}, {"parent", e.parent_distances}, {"child", e.child_distances},
                                 {"delta", e.delta}, {"fitness_before", e.fitness_before}, {"fitness_after", e.fitness_after}});
            }
        }
    }
    out.write("lineage.jsonl", jsonl(lines));

    std::vector<json> report;
    std::map<FitnessCombinator, std::vector<double>> m4_by_kind;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        std::span<const LineageLog> group(logs.data() + k * seeds, seeds);
        const auto m = lineage_metrics(group, envset.size());
        bool monotone = true;
        for (const auto& log : group) {
            for (const auto& trace : log.fitness_trace) monotone = monotone && std::is_sorted(trace.begin(), trace.end());
            m4_by_kind[kinds[k]].push_back(lineage_stats(log).all_positive_fraction);
        }
        auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        report.push_back({{"metric", "lineage_metrics"}, {"combinator", to_string(kinds[k])}, {"m1", m.m1}, {"m2", opt(m.m2)},
                          {"m3", opt(m.m3)}, {"m4", opt(m.m4)}, {"runs", m.runs}, {"lineage_runs", m.lineage_runs},
                          {"fitness_nondecreasing", monotone}});
    }
    if (m4_by_kind.contains(FitnessCombinator::min) && m4_by_kind.contains(FitnessCombinator::sum)) {
        const auto& a = m4_by_kind[FitnessCombinator::min];
        const auto& b = m4_by_kind[FitnessCombinator::sum];
        std::size_t wins = 0;
        for (std::size_t i = 0; i < seeds; ++i) wins += a[i] >= b[i] ? 1 : 0;
        report.push_back({{"metric", "m4_min_at_least_sum"}, {"paired_seeds", seeds}, {"count", wins},
                          {"fraction", static_cast<double>(wins) / static_cast<double>(seeds)}});
    }
    out.write("hillclimb_report.jsonl", jsonl(report));
    out.finish();
}

void report(const ExperimentConfig& c) {
    OutputDir out(command_dir(c, "report"), header(c, "report", json::object()));
    json summary = json::object();
    bool anything = false;

    const auto table_path = metrics_path(c);
    if (fs::exists(table_path)) {
        anything = true;
        const auto rows = read_metrics_csv(table_path);
        const auto canonical = BodyDesign::canonical();
        json landscape = {{"designs", rows.size()}};
        const MetricsTableRow* best = nullptr;
        double coincident_max = -1.0;
        std::string hist = "m_l_bin_low,m_l_bin_high,designs\n";
        std::vector<int> bins(20, 0);
        for (const auto& r : rows) {
            if (!best || r.m_l > best->m_l) best = &r;
            if (r.design == canonical) landscape["canonical"] = {{"index", r.index}, {"m_l", r.m_l}, {"m_ci", r.m_ci}};
            if (r.design.l1 == r.design.l2) coincident_max = std::max(coincident_max, r.m_l);
            bins[std::min<std::size_t>(19, static_cast<std::size_t>(r.m_l * 20.0))]++;
        }
        if (best) {
            landscape["best"] = {{"index", best->index},
                                 {"l1", {best->design.l1.x, best->design.l1.y}},
                                 {"l2", {best->design.l2.x, best->design.l2.y}},
                                 {"m_l", best->m_l},
                                 {"m_ci", best->m_ci}};
        }
        if (coincident_max >= 0.0) landscape["coincident_max_m_l"] = coincident_max;
        summary["landscape"] = landscape;
        for (int b = 0; b < 20; ++b) hist += fmt::format("{},{},{}\n", format_real(b / 20.0), format_real((b + 1) / 20.0), bins[b]);
        out.write("m_l_histogram.csv", hist);
    }

    for (auto [name, file] : {std::pair{"stats", "stats_report.jsonl"}, std::pair{"coopt", "coopt_report.jsonl"},
                              std::pair{"hillclimb", "hillclimb_report.jsonl"}}) {
        const auto p = command_dir(c, name) / file;
        if (!fs::exists(p)) continue;
        anything = true;
        summary[name] = read_jsonl(p);
    }

    const auto runs_path = command_dir(c, "coopt") / "coopt_runs.jsonl";
    if (fs::exists(runs_path)) {
        // Mean over runs of the running maximum of environments solved.
        std::map<std::string, std::vector<std::vector<std::pair<int, int>>>> curves;
        int horizon = 0;
        for (const auto& rec : read_jsonl(runs_path)) {
            const auto type = rec.at("type").get<std::string>();
            const auto mode = rec.at("mode").get<std::string>();
            if (type == "run") {
                curves[mode].emplace_back();
                horizon = std::max(horizon, rec.at("budget").get<int>());
            } else if (type == "checkpoint") {
                curves[mode].back().emplace_back(rec.at("eval").get<int>(), rec.at("envs_solved").get<int>());
            }
        }
        std::string csv = "eval";
        for (const auto& [mode, runs] : curves) csv += ",mean_envs_solved_" + mode;
        csv += "\n";
        std::map<std::string, std::vector<std::size_t>> cursor;
        std::map<std::string, std::vector<int>> level;
        for (const auto& [mode, runs] : curves) {
            cursor[mode].assign(runs.size(), 0);
            level[mode].assign(runs.size(), 0);
        }
        for (int e = 1; e <= horizon; ++e) {
            csv += std::to_string(e);
            for (const auto& [mode, runs] : curves) {
                double total = 0.0;
                for (std::size_t r = 0; r < runs.size(); ++r) {
                    auto& i = cursor[mode][r];
                    while (i < runs[r].size() && runs[r][i].first <= e) level[mode][r] = runs[r][i++].second;
                    total += level[mode][r];
                }
                csv += "," + format_real(runs.empty() ? 0.0 : total / static_cast<double>(runs.size()));
            }
            csv += "\n";
        }
        out.write("coopt_success_curve.csv", csv);
    }

    if (!anything) throw std::runtime_error("report: no results found under " + c.out);
    out.write("summary.json", summary.dump(2) + "\n");
    out.finish();
}

}  // namespace morpho::experiments
