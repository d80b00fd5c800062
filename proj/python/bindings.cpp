#include <map>
#include <optional>
#include <string>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "morpho/analysis/dtw.hpp"
#include "morpho/analysis/interference.hpp"
#include "morpho/analysis/stats.hpp"
#include "morpho/coopt.hpp"
#include "morpho/hill_climb.hpp"
#include "morpho/io/config.hpp"
#include "morpho/io/experiments.hpp"
#include "morpho/landscape.hpp"
#include "morpho/optimizers.hpp"
#include "morpho/parallel.hpp"

namespace py = pybind11;
using namespace morpho;

namespace {

EnvironmentSet to_envset(const std::vector<Pose>& starts) {
    EnvironmentSet set;
    for (const auto& p : starts) set.environments.push_back({p});
    return set;
}

std::vector<Pose> from_envset(const EnvironmentSet& set) {
    std::vector<Pose> out;
    for (const auto& e : set.environments) out.push_back(e.start);
    return out;
}

std::vector<Pose> default_envs(const std::optional<std::vector<Pose>>& envs) {
    return envs ? *envs : from_envset(EnvironmentSet::diagonal());
}

SimProfile default_profile(const std::optional<SimProfile>& p) { return p ? *p : SimProfile::desk(); }

py::dict record_dict(const CooptRunRecord& r) {
    py::dict d;
    d["mode"] = std::string(to_string(r.mode));
    d["seed"] = r.seed;
    d["budget"] = r.budget;
    d["evals_used"] = r.evals_used;
    d["generations"] = r.generations;
    d["evals_to_full_success"] = r.evals_to_full_success;
    d["archive_size"] = r.archive.size();
    py::list dtws;
    for (const auto& a : r.admissions) dtws.append(py::make_tuple(a.entry.eval, a.dtw));
    d["admissions"] = dtws;
    d["best_design"] = r.best.genome.design;
    d["best_policy"] = r.best.genome.policy;
    d["best_objectives"] = r.best.objectives;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "morpho simulation, landscape, optimisation and analysis core";
    m.attr("__version__") = std::string(experiments::tool_version());

    py::class_<BodyDesign>(m, "BodyDesign")
        .def(py::init([](std::pair<double, double> l1, std::pair<double, double> l2) {
                 return BodyDesign{{l1.first, l1.second}, {l2.first, l2.second}};
             }),
             py::arg("l1"), py::arg("l2"))
        .def_static("canonical", &BodyDesign::canonical)
        .def_property_readonly("l1", [](const BodyDesign& d) { return std::make_pair(d.l1.x, d.l1.y); })
        .def_property_readonly("l2", [](const BodyDesign& d) { return std::make_pair(d.l2.x, d.l2.y); })
        .def("valid", &BodyDesign::valid)
        .def(py::self == py::self)
        .def("__repr__", [](const BodyDesign& d) {
            return "BodyDesign(l1=(" + std::to_string(d.l1.x) + ", " + std::to_string(d.l1.y) + "), l2=(" +
                   std::to_string(d.l2.x) + ", " + std::to_string(d.l2.y) + "))";
        });

    py::class_<Policy>(m, "Policy")
        .def(py::init<double, double>(), py::arg("w1"), py::arg("w2"))
        .def_readwrite("w1", &Policy::w1)
        .def_readwrite("w2", &Policy::w2)
        .def(py::self == py::self);

    py::class_<Pose>(m, "Pose")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("alpha") = 0.0)
        .def_readwrite("x", &Pose::x)
        .def_readwrite("y", &Pose::y)
        .def_readwrite("alpha", &Pose::alpha);

    py::class_<SimProfile>(m, "SimProfile")
        .def(py::init<double, int, double, double>(), py::arg("dt") = 0.1, py::arg("steps") = 20000,
             py::arg("success_radius") = 0.075, py::arg("sensor_floor") = 1e-3)
        .def_static("desk", &SimProfile::desk)
        .def_static("full", &SimProfile::full)
        .def_readwrite("dt", &SimProfile::dt)
        .def_readwrite("steps", &SimProfile::steps)
        .def_readwrite("success_radius", &SimProfile::success_radius)
        .def_readwrite("sensor_floor", &SimProfile::sensor_floor);

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("success", &TrialResult::success)
        .def_readonly("min_distance", &TrialResult::min_distance)
        .def_readonly("steps_used", &TrialResult::steps_used)
        .def_readonly("end_distance", &TrialResult::end_distance)
        .def_readonly("sensor_trace_1", &TrialResult::sensor_trace_1)
        .def_readonly("sensor_trace_2", &TrialResult::sensor_trace_2);

    py::class_<DesignMetrics>(m, "DesignMetrics")
        .def_readonly("m_l", &DesignMetrics::m_l)
        .def_readonly("m_ci", &DesignMetrics::m_ci)
        .def_readonly("counts", &DesignMetrics::counts);

    py::class_<LossValue>(m, "LossValue")
        .def_readonly("loss", &LossValue::loss)
        .def_readonly("envs_solved", &LossValue::envs_solved);

    py::class_<OptRunRecord>(m, "OptRunRecord")
        .def_property_readonly("method", [](const OptRunRecord& r) { return std::string(to_string(r.method)); })
        .def_readonly("seed", &OptRunRecord::seed)
        .def_readonly("budget", &OptRunRecord::budget)
        .def_readonly("evals_used", &OptRunRecord::evals_used)
        .def_readonly("evals_to_full_success", &OptRunRecord::evals_to_full_success)
        .def_readonly("best_x", &OptRunRecord::best_x)
        .def_readonly("best_loss", &OptRunRecord::best_loss)
        .def_readonly("max_solved", &OptRunRecord::max_solved)
        .def_property_readonly("best_loss_curve", [](const OptRunRecord& r) {
            std::vector<std::pair<int, double>> out;
            for (const auto& p : r.best_loss_curve) out.emplace_back(p.eval, p.loss);
            return out;
        });

    py::class_<StatResult>(m, "StatResult")
        .def_readonly("statistic", &StatResult::statistic)
        .def_readonly("p_value", &StatResult::p_value)
        .def_readonly("n", &StatResult::n);

    m.def("diagonal_environments",
          [](double d, double heading, std::size_t count) {
              return from_envset(EnvironmentSet::diagonal(d, heading, count));
          },
          py::arg("d") = EnvironmentSet::kDiagonalOffset, py::arg("heading") = 0.0, py::arg("count") = 4);

    m.def("simulate",
          [](const BodyDesign& d, const Policy& p, const Pose& start, std::optional<SimProfile> profile, bool traces) {
              return simulate(d, p, {start}, default_profile(profile), traces ? Traces::record : Traces::skip);
          },
          py::arg("design"), py::arg("policy"), py::arg("start"), py::arg("profile") = std::nullopt,
          py::arg("traces") = true, py::call_guard<py::gil_scoped_release>());

    m.def("loss",
          [](const BodyDesign& d, const Policy& p, std::optional<std::vector<Pose>> envs,
             std::optional<SimProfile> profile) {
              return loss(d, p, to_envset(default_envs(envs)), default_profile(profile));
          },
          py::arg("design"), py::arg("policy"), py::arg("envs") = std::nullopt, py::arg("profile") = std::nullopt,
          py::call_guard<py::gil_scoped_release>());

    m.def("mirror_design", &mirror_design);

    m.def("design_grid",
          [](int bins) {
              const auto g = DesignGrid::make(bins);
              std::vector<BodyDesign> out;
              for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g.design(i));
              return out;
          },
          py::arg("bins"));

    m.def("success_matrices",
          [](const BodyDesign& d, int grid_n, std::optional<std::vector<Pose>> envs, std::optional<SimProfile> profile) {
              const auto ms = success_matrices(d, to_envset(default_envs(envs)), WeightGrid::make(grid_n),
                                               default_profile(profile));
              std::vector<std::vector<std::vector<int>>> out;
              for (const auto& s : ms) {
                  std::vector<std::vector<int>> rows(s.n, std::vector<int>(s.n));
                  for (int i = 0; i < s.n; ++i)
                      for (int j = 0; j < s.n; ++j) rows[i][j] = s.at(i, j);
                  out.push_back(std::move(rows));
              }
              return out;
          },
          py::arg("design"), py::arg("grid_n") = 41, py::arg("envs") = std::nullopt, py::arg("profile") = std::nullopt,
          py::call_guard<py::gil_scoped_release>());

    m.def("design_metrics",
          [](const std::vector<std::vector<std::vector<int>>>& matrices) {
              std::vector<SuccessMatrix> ms;
              for (const auto& rows : matrices) {
                  SuccessMatrix s{static_cast<int>(rows.size()), {}};
                  for (const auto& row : rows) {
                      if (row.size() != rows.size()) throw std::invalid_argument("success matrices must be square");
                      for (int v : row) {
                          if (v != 0 && v != 1) throw std::invalid_argument("success matrix cells must be 0 or 1");
                          s.cells.push_back(static_cast<std::uint8_t>(v));
                      }
                  }
                  ms.push_back(std::move(s));
              }
              return design_metrics(overlap(ms));
          },
          py::arg("success_matrices"));

    m.def("evaluate_designs",
          [](const std::vector<BodyDesign>& designs, int grid_n, std::optional<std::vector<Pose>> envs,
             std::optional<SimProfile> profile, std::size_t workers) {
              return evaluate_designs(designs, WeightGrid::make(grid_n), to_envset(default_envs(envs)),
                                      default_profile(profile), resolve_workers(workers));
          },
          py::arg("designs"), py::arg("grid_n") = 41, py::arg("envs") = std::nullopt,
          py::arg("profile") = std::nullopt, py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());

    m.def("train_policy",
          [](const BodyDesign& d, const std::string& method, int budget, std::uint64_t seed,
             std::optional<std::vector<Pose>> envs, std::optional<SimProfile> profile, bool stop_on_full_success) {
              const auto set = to_envset(default_envs(envs));
              return minimize(parse_method(method), policy_objective(d, set, default_profile(profile)),
                              Bounds::box(2, -1.0, 1.0), budget, seed,
                              {static_cast<int>(set.size()), stop_on_full_success});
          },
          py::arg("design"), py::arg("method"), py::arg("budget") = 3000, py::arg("seed") = 1,
          py::arg("envs") = std::nullopt, py::arg("profile") = std::nullopt, py::arg("stop_on_full_success") = true,
          py::call_guard<py::gil_scoped_release>());

    m.def("run_coopt",
          [](const std::string& mode, int budget, std::uint64_t seed, std::optional<std::vector<Pose>> envs,
             std::optional<SimProfile> profile, std::size_t workers) {
              if (mode != "coopt" && mode != "baseline") throw std::invalid_argument("mode must be coopt or baseline");
              const CooptMode cm = mode == "coopt" ? CooptMode::coopt : CooptMode::baseline;
              CooptConfig cfg;
              cfg.budget = budget;
              cfg.seed = seed;
              cfg.workers = resolve_workers(workers);
              CooptRunRecord r;
              {
                  py::gil_scoped_release release;
                  r = run_coopt(cm, to_envset(default_envs(envs)), default_profile(profile), cfg);
              }
              return record_dict(r);
          },
          py::arg("mode"), py::arg("budget") = 5000, py::arg("seed") = 1, py::arg("envs") = std::nullopt,
          py::arg("profile") = std::nullopt, py::arg("workers") = 0);

    m.def("hill_climb_metrics",
          [](const std::string& combinator, int pop, int generations, double mutation, std::uint64_t seed,
             std::optional<SimProfile> profile) {
              HillClimbConfig cfg;
              cfg.kind = parse_combinator(combinator);
              cfg.pop = pop;
              cfg.generations = generations;
              cfg.m = mutation;
              cfg.seed = seed;
              LineageMetrics metrics;
              {
                  py::gil_scoped_release release;
                  const auto envs = EnvironmentSet::diagonal();
                  const std::vector<LineageLog> logs{hill_climb(envs, default_profile(profile), cfg)};
                  metrics = lineage_metrics(logs, envs.size());
              }
              py::dict d;
              d["m1"] = metrics.m1;
              d["m2"] = metrics.m2;
              d["m3"] = metrics.m3;
              d["m4"] = metrics.m4;
              return d;
          },
          py::arg("combinator"), py::arg("pop") = 50, py::arg("generations") = 300, py::arg("m") = 0.05,
          py::arg("seed") = 1, py::arg("profile") = std::nullopt);

    m.def("dtw", [](const std::vector<double>& a, const std::vector<double>& b) { return dtw(a, b); });
    m.def("aggregate_dtw",
          [](const BodyDesign& d, const Policy& p, std::optional<std::vector<Pose>> envs,
             std::optional<SimProfile> profile, std::size_t max_points) {
              return aggregate_dtw(d, p, to_envset(default_envs(envs)), default_profile(profile), max_points);
          },
          py::arg("design"), py::arg("policy"), py::arg("envs") = std::nullopt, py::arg("profile") = std::nullopt,
          py::arg("max_points") = kDtwMaxPoints, py::call_guard<py::gil_scoped_release>());

    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });
    m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); });
    m.def("mann_whitney", [](const std::vector<double>& a, const std::vector<double>& b) { return mann_whitney(a, b); });

    m.def("run_command",
          [](const std::string& command, std::optional<std::string> config, std::optional<std::string> out,
             std::optional<int> workers) {
              static const std::map<std::string, void (*)(const ExperimentConfig&)> commands = {
                  {"sweep", experiments::sweep},   {"train", experiments::train},
                  {"coopt", experiments::coopt},   {"dtw", experiments::dtw},
                  {"stats", experiments::stats},   {"hillclimb", experiments::hillclimb},
                  {"report", experiments::report},
              };
              const auto it = commands.find(command);
              if (it == commands.end()) throw std::invalid_argument("unknown command '" + command + "'");
              ExperimentConfig c = config ? load_config(*config) : ExperimentConfig{};
              if (out) c.out = *out;
              if (workers) c.workers = *workers;
              c.validate();
              py::gil_scoped_release release;
              it->second(c);
          },
          py::arg("command"), py::arg("config") = std::nullopt, py::arg("out") = std::nullopt,
          py::arg("workers") = std::nullopt);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
