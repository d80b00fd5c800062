#include "morpho/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "morpho/hill_climb.hpp"
#include "morpho/optimizers.hpp"

namespace morpho {

namespace {

std::string position_prefix(const std::string& source, int line, int column) {
    if (line <= 0) return source + ": ";
    return fmt::format("{}:{}:{}: ", source, line, column);
}

struct FieldError {
    std::string field;
    std::string message;
};

std::optional<FieldError> check(const ExperimentConfig& c) {
    auto err = [](std::string field, std::string message) { return std::optional<FieldError>({field, message}); };
    const auto& p = c.profile;
    if (p.name != "desk" && p.name != "full" && p.name != "custom") {
        return err("profile.name", "expected desk, full or custom, got '" + p.name + "'");
    }
    try {
        c.sim_profile().validate();
    } catch (const std::exception& e) {
        return err("profile", e.what());
    }

    const auto& l = c.landscape;
    if (l.bins < 1 || l.bins > 31) return err("landscape.bins", "must be in [1, 31]");
    if (l.grid_n < 1 || l.grid_n > 1001 || l.grid_n % 2 == 0) {
        return err("landscape.grid_n", "must be odd and in [1, 1001]");
    }

    const auto& e = c.environments;
    if (e.count < 1 || e.count > 4) return err("environments.count", "must be in [1, 4]");
    if (!std::isfinite(e.d) || !(e.d > 0.0) || std::sqrt(2.0) * e.d <= p.success_radius) {
        return err("environments.d", "start positions must lie outside the success radius");
    }
    if (e.headings.size() != 1 && e.headings.size() != static_cast<std::size_t>(e.count)) {
        return err("environments.headings", "give one heading or one per environment");
    }
    for (double h : e.headings) {
        if (!std::isfinite(h)) return err("environments.headings", "headings must be finite");
    }

    const auto& t = c.train;
    if (t.methods.empty()) return err("train.methods", "at least one method is required");
    std::set<std::string> seen;
    for (const auto& m : t.methods) {
        try {
            parse_method(m);
        } catch (const std::exception& ex) {
            return err("train.methods", ex.what());
        }
        if (!seen.insert(m).second) return err("train.methods", "duplicate method '" + m + "'");
    }
    if (t.seeds < 1) return err("train.seeds", "must be at least 1");
    if (t.budget < 1) return err("train.budget", "must be at least 1");
    if (t.sample < 1) return err("train.sample", "must be at least 1");
    const auto designs = static_cast<std::size_t>(l.bins) * l.bins * l.bins * l.bins;
    for (auto d : t.designs) {
        if (d >= designs) return err("train.designs", fmt::format("design index {} is outside the {}-design grid", d, designs));
    }

    const auto& co = c.coopt;
    if (co.seeds < 1) return err("coopt.seeds", "must be at least 1");
    if (co.budget < static_cast<int>(coopt_hyper::kPopulation)) {
        return err("coopt.budget", fmt::format("must be at least the population size ({})", coopt_hyper::kPopulation));
    }
    if (co.dtw_max_points < 1) return err("coopt.dtw_max_points", "must be at least 1");

    const auto& h = c.hillclimb;
    if (h.combinators.empty()) return err("hillclimb.combinators", "at least one combinator is required");
    for (const auto& k : h.combinators) {
        try {
            parse_combinator(k);
        } catch (const std::exception& ex) {
            return err("hillclimb.combinators", ex.what());
        }
    }
    if (h.seeds < 1) return err("hillclimb.seeds", "must be at least 1");
    if (h.pop < 1) return err("hillclimb.pop", "must be at least 1");
    if (h.generations < 1) return err("hillclimb.generations", "must be at least 1");
    if (!(h.m >= 0.0) || !std::isfinite(h.m)) return err("hillclimb.m", "must be finite and non-negative");

    for (std::size_t i = 0; i < c.dtw_genomes.size(); ++i) {
        const auto& g = c.dtw_genomes[i];
        if (!g.design.valid()) return err(fmt::format("dtw.genomes[{}]", i), "sensor coordinates must lie in [-0.5, 0.5]");
        if (!g.policy.valid()) return err(fmt::format("dtw.genomes[{}]", i), "weights must lie in [-1, 1]");
    }
    if (c.dtw_genomes.size() > 0 && e.count < 2) return err("dtw.genomes", "dtw needs at least two environments");

    if (c.workers < 0) return err("workers", "must be non-negative");
    if (c.out.empty()) return err("out", "must not be empty");
    return std::nullopt;
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
        const auto m = node.Mark();
        throw ConfigError(source_, m.line + 1, m.column + 1, message);
    }

    void require_map(const YAML::Node& node, const std::string& what) const {
        if (!node.IsMap()) fail(node, what + " must be a mapping");
    }

    void allow_keys(const YAML::Node& map, std::initializer_list<std::string_view> keys, const std::string& where) const {
        for (auto it = map.begin(); it != map.end(); ++it) {
            const auto key = it->first.as<std::string>();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(it->first, fmt::format("unknown key '{}' in {}", key, where));
            }
        }
    }

    template <class T>
    void read(const YAML::Node& map, const char* key, const std::string& field, T& out) {
        const auto node = map[key];
        if (!node) return;
        marks_[field] = node.Mark();
        out = convert<T>(node, field);
    }

    template <class T>
    void read_list(const YAML::Node& map, const char* key, const std::string& field, std::vector<T>& out) {
        const auto node = map[key];
        if (!node) return;
        marks_[field] = node.Mark();
        if (!node.IsSequence()) fail(node, field + " must be a list");
        out.clear();
        for (const auto& item : node) out.push_back(convert<T>(item, field));
    }

    template <class T>
    T convert(const YAML::Node& node, const std::string& field) const {
        if (!node.IsScalar()) fail(node, field + " must be a scalar");
        try {
            return node.as<T>();
        } catch (const YAML::BadConversion&) {
            fail(node, fmt::format("{}: cannot read '{}' as {}", field, node.Scalar(), type_name<T>()));
        }
    }

    void mark(const std::string& field, const YAML::Node& node) { marks_[field] = node.Mark(); }

    /// Position of `field`, falling back to its enclosing sections.
    std::optional<YAML::Mark> find_mark(std::string field) const {
        while (true) {
            if (auto it = marks_.find(field); it != marks_.end()) return it->second;
            const auto dot = field.find_last_of(".[");
            if (dot == std::string::npos) return std::nullopt;
            field.resize(dot);
        }
    }

    const std::string& source() const { return source_; }

private:
    template <class T>
    static const char* type_name() {
        if constexpr (std::is_same_v<T, bool>) return "a boolean";
        else if constexpr (std::is_integral_v<T>) return "an integer";
        else if constexpr (std::is_floating_point_v<T>) return "a number";
        else return "a string";
    }

    std::string source_;
    std::map<std::string, YAML::Mark> marks_;
};

Vec2 read_pair(Reader& r, const YAML::Node& node, const std::string& field) {
    if (!node.IsSequence() || node.size() != 2) r.fail(node, field + " must be a list of two numbers");
    return {r.convert<double>(node[0], field), r.convert<double>(node[1], field)};
}

std::string num(double x) { return fmt::format("{}", x); }

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(position_prefix(source, line, column) + message), line_(line), column_(column) {}

SimProfile ExperimentConfig::sim_profile() const {
    return {profile.dt, profile.steps, profile.success_radius, profile.sensor_floor};
}

EnvironmentSet ExperimentConfig::envset() const {
    EnvironmentSet set = EnvironmentSet::diagonal(environments.d, 0.0, static_cast<std::size_t>(environments.count));
    for (std::size_t k = 0; k < set.environments.size(); ++k) {
        set.environments[k].start.alpha = environments.headings.size() == 1 ? environments.headings[0] : environments.headings[k];
    }
    return set;
}

void ExperimentConfig::validate() const {
    if (auto e = check(*this)) throw ConfigError("config", 0, 0, e->field + ": " + e->message);
}

void apply_profile(ExperimentConfig& config, const std::string& name) {
    SimProfile p;
    if (name == "desk") p = SimProfile::desk();
    else if (name == "full") p = SimProfile::full();
    else throw ConfigError("--profile", 0, 0, "expected desk or full, got '" + name + "'");
    config.profile = {name, p.dt, p.steps, p.success_radius, p.sensor_floor};
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    ExperimentConfig c;
    if (!root || root.IsNull()) return c;
    Reader r(source);
    r.require_map(root, "the configuration");
    r.allow_keys(root, {"profile", "landscape", "environments", "train", "coopt", "hillclimb", "dtw", "seed", "workers", "out"},
                 "the top level");

    if (const auto node = root["profile"]) {
        r.mark("profile", node);
        if (node.IsScalar()) {
            const auto name = r.convert<std::string>(node, "profile");
            if (name != "desk" && name != "full") r.fail(node, "profile must be desk, full or a custom mapping");
            apply_profile(c, name);
        } else {
            r.require_map(node, "profile");
            r.allow_keys(node, {"name", "dt", "steps", "success_radius", "sensor_floor"}, "profile");
            std::string name = "custom";
            r.read(node, "name", "profile.name", name);
            if (name == "desk" || name == "full") {
                apply_profile(c, name);
                if (node["dt"] || node["steps"]) {
                    r.fail(node, "dt and steps can only be set for the custom profile");
                }
            }
            c.profile.name = name;
            r.read(node, "dt", "profile.dt", c.profile.dt);
            r.read(node, "steps", "profile.steps", c.profile.steps);
            r.read(node, "success_radius", "profile.success_radius", c.profile.success_radius);
            r.read(node, "sensor_floor", "profile.sensor_floor", c.profile.sensor_floor);
        }
    }

    if (const auto node = root["landscape"]) {
        r.mark("landscape", node);
        r.require_map(node, "landscape");
        r.allow_keys(node, {"bins", "grid_n", "store_success_matrices"}, "landscape");
        r.read(node, "bins", "landscape.bins", c.landscape.bins);
        r.read(node, "grid_n", "landscape.grid_n", c.landscape.grid_n);
        r.read(node, "store_success_matrices", "landscape.store_success_matrices", c.landscape.store_success_matrices);
    }

    if (const auto node = root["environments"]) {
        r.mark("environments", node);
        r.require_map(node, "environments");
        r.allow_keys(node, {"d", "count", "headings"}, "environments");
        r.read(node, "d", "environments.d", c.environments.d);
        r.read(node, "count", "environments.count", c.environments.count);
        r.read_list(node, "headings", "environments.headings", c.environments.headings);
    }

    if (const auto node = root["train"]) {
        r.mark("train", node);
        r.require_map(node, "train");
        r.allow_keys(node, {"methods", "seeds", "budget", "designs", "sample", "metrics"}, "train");
        r.read_list(node, "methods", "train.methods", c.train.methods);
        r.read(node, "seeds", "train.seeds", c.train.seeds);
        r.read(node, "budget", "train.budget", c.train.budget);
        r.read_list(node, "designs", "train.designs", c.train.designs);
        r.read(node, "sample", "train.sample", c.train.sample);
        r.read(node, "metrics", "train.metrics", c.train.metrics);
    }

    if (const auto node = root["coopt"]) {
        r.mark("coopt", node);
        r.require_map(node, "coopt");
        r.allow_keys(node, {"seeds", "budget", "dtw_max_points"}, "coopt");
        r.read(node, "seeds", "coopt.seeds", c.coopt.seeds);
        r.read(node, "budget", "coopt.budget", c.coopt.budget);
        r.read(node, "dtw_max_points", "coopt.dtw_max_points", c.coopt.dtw_max_points);
    }

    if (const auto node = root["hillclimb"]) {
        r.mark("hillclimb", node);
        r.require_map(node, "hillclimb");
        r.allow_keys(node, {"combinators", "seeds", "pop", "generations", "m"}, "hillclimb");
        r.read_list(node, "combinators", "hillclimb.combinators", c.hillclimb.combinators);
        r.read(node, "seeds", "hillclimb.seeds", c.hillclimb.seeds);
        r.read(node, "pop", "hillclimb.pop", c.hillclimb.pop);
        r.read(node, "generations", "hillclimb.generations", c.hillclimb.generations);
        r.read(node, "m", "hillclimb.m", c.hillclimb.m);
    }

    if (const auto node = root["dtw"]) {
        r.mark("dtw", node);
        r.require_map(node, "dtw");
        r.allow_keys(node, {"genomes"}, "dtw");
        if (const auto list = node["genomes"]) {
            r.mark("dtw.genomes", list);
            if (!list.IsSequence()) r.fail(list, "dtw.genomes must be a list");
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto g = list[i];
                const auto field = fmt::format("dtw.genomes[{}]", i);
                r.mark(field, g);
                r.require_map(g, field);
                r.allow_keys(g, {"l1", "l2", "w"}, field);
                if (!g["l1"] || !g["l2"] || !g["w"]) r.fail(g, field + " needs l1, l2 and w");
                const Vec2 w = read_pair(r, g["w"], field + ".w");
                c.dtw_genomes.push_back({{read_pair(r, g["l1"], field + ".l1"), read_pair(r, g["l2"], field + ".l2")}, {w.x, w.y}});
            }
        }
    }

    r.read(root, "seed", "seed", c.seed);
    r.read(root, "workers", "workers", c.workers);
    r.read(root, "out", "out", c.out);

    if (auto e = check(c)) {
        if (auto m = r.find_mark(e->field)) throw ConfigError(source, m->line + 1, m->column + 1, e->field + ": " + e->message);
        throw ConfigError(source, 0, 0, e->field + ": " + e->message);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, 0, "cannot open configuration file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

std::string to_yaml(const ExperimentConfig& c) {
    YAML::Emitter out;
    auto pair = [&](double a, double b) {
        out << YAML::Flow << YAML::BeginSeq << num(a) << num(b) << YAML::EndSeq;
    };
    out << YAML::BeginMap;

    out << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c.profile.name;
    if (c.profile.name == "custom") {
        out << YAML::Key << "dt" << YAML::Value << num(c.profile.dt);
        out << YAML::Key << "steps" << YAML::Value << c.profile.steps;
    }
    out << YAML::Key << "success_radius" << YAML::Value << num(c.profile.success_radius);
    out << YAML::Key << "sensor_floor" << YAML::Value << num(c.profile.sensor_floor);
    out << YAML::EndMap;

    out << YAML::Key << "landscape" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "bins" << YAML::Value << c.landscape.bins;
    out << YAML::Key << "grid_n" << YAML::Value << c.landscape.grid_n;
    out << YAML::Key << "store_success_matrices" << YAML::Value << c.landscape.store_success_matrices;
    out << YAML::EndMap;

    out << YAML::Key << "environments" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "d" << YAML::Value << num(c.environments.d);
    out << YAML::Key << "count" << YAML::Value << c.environments.count;
    out << YAML::Key << "headings" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double h : c.environments.headings) out << num(h);
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "train" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "methods" << YAML::Value << YAML::Flow << c.train.methods;
    out << YAML::Key << "seeds" << YAML::Value << c.train.seeds;
    out << YAML::Key << "budget" << YAML::Value << c.train.budget;
    out << YAML::Key << "designs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto d : c.train.designs) out << d;
    out << YAML::EndSeq;
    out << YAML::Key << "sample" << YAML::Value << c.train.sample;
    out << YAML::Key << "metrics" << YAML::Value << YAML::DoubleQuoted << c.train.metrics;
    out << YAML::EndMap;

    out << YAML::Key << "coopt" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "seeds" << YAML::Value << c.coopt.seeds;
    out << YAML::Key << "budget" << YAML::Value << c.coopt.budget;
    out << YAML::Key << "dtw_max_points" << YAML::Value << c.coopt.dtw_max_points;
    out << YAML::EndMap;

    out << YAML::Key << "hillclimb" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "combinators" << YAML::Value << YAML::Flow << c.hillclimb.combinators;
    out << YAML::Key << "seeds" << YAML::Value << c.hillclimb.seeds;
    out << YAML::Key << "pop" << YAML::Value << c.hillclimb.pop;
    out << YAML::Key << "generations" << YAML::Value << c.hillclimb.generations;
    out << YAML::Key << "m" << YAML::Value << num(c.hillclimb.m);
    out << YAML::EndMap;

    out << YAML::Key << "dtw" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "genomes" << YAML::Value << YAML::BeginSeq;
    for (const auto& g : c.dtw_genomes) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "l1" << YAML::Value;
        pair(g.design.l1.x, g.design.l1.y);
        out << YAML::Key << "l2" << YAML::Value;
        pair(g.design.l2.x, g.design.l2.y);
        out << YAML::Key << "w" << YAML::Value;
        pair(g.policy.w1, g.policy.w2);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "workers" << YAML::Value << c.workers;
    out << YAML::Key << "out" << YAML::Value << YAML::DoubleQuoted << c.out;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace morpho
