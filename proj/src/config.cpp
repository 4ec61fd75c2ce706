#include "cashcast/config.hpp"

#include "cashcast/error.hpp"
#include "cashcast/stats.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cashcast {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(join(path, key), "unknown key '" + key + "'");
    }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& path, const char* expected) {
    if (!node.IsScalar()) throw ConfigError(path, std::string("expected ") + expected);
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(path, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
    }
}

double number(const YAML::Node& n, const std::string& path) {
    const double v = scalar<double>(n, path, "a number");
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

std::size_t count(const YAML::Node& n, const std::string& path) {
    const auto text = n.IsScalar() ? n.Scalar() : std::string();
    if (!text.empty() && text.front() == '-') throw ConfigError(path, "expected a nonnegative integer");
    return scalar<std::size_t>(n, path, "a nonnegative integer");
}

bool boolean(const YAML::Node& n, const std::string& path) { return scalar<bool>(n, path, "true or false"); }

std::string text(const YAML::Node& n, const std::string& path) { return scalar<std::string>(n, path, "a string"); }

std::vector<double> number_list(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) throw ConfigError(path, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(number(n[i], index_path(path, i)));
    return out;
}

void read_features(const YAML::Node& node, const std::string& path, FeatureSpec& f) {
    check_keys(node, path, {"day_of_month", "day_of_week", "month", "week", "lags", "weekday_reference"});
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto p = join(path, key);
        if (key == "day_of_month") f.use_day_of_month = boolean(kv.second, p);
        if (key == "day_of_week") f.use_day_of_week = boolean(kv.second, p);
        if (key == "month") f.use_month = boolean(kv.second, p);
        if (key == "week") f.use_week = boolean(kv.second, p);
        if (key == "lags") f.lag_count = count(kv.second, p);
        if (key == "weekday_reference") {
            const auto r = count(kv.second, p);
            if (r < 1 || r > 5) throw ConfigError(p, "must be a weekday number 1..5");
            f.weekday_reference = static_cast<unsigned>(r);
        }
    }
}

void read_model(const YAML::Node& node, const std::string& path, ModelSpec& m) {
    check_keys(node, path,
               {"family", "max_p", "K", "alpha", "trees", "mtry", "node_size", "lambda", "rank_policy"});
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto p = join(path, key);
        if (key == "family") {
            try {
                m.family = parse_family(text(kv.second, p));
            } catch (const ValidationError& e) {
                throw ConfigError(p, e.what());
            }
        }
        if (key == "max_p") m.ar_max_p = count(kv.second, p);
        if (key == "K") m.rbf_clusters = count(kv.second, p);
        if (key == "alpha") {
            const auto a = count(kv.second, p);
            if (a < 1 || a > 100) throw ConfigError(p, "must lie in 1..100");
            m.rbf_alpha = static_cast<unsigned>(a);
        }
        if (key == "trees") m.forest_trees = count(kv.second, p);
        if (key == "mtry") m.forest_mtry = count(kv.second, p);
        if (key == "node_size") m.forest_node_size = count(kv.second, p);
        if (key == "lambda") {
            const double l = number(kv.second, p);
            if (l < -2.0 || l > 2.0) throw ConfigError(p, "must lie in [-2, 2]");
            m.lambda_grid = {l};
        }
        if (key == "rank_policy") {
            const auto r = text(kv.second, p);
            if (r == "throw") {
                m.rank_policy = RankPolicy::Throw;
            } else if (r == "minimum_norm") {
                m.rank_policy = RankPolicy::MinimumNorm;
            } else {
                throw ConfigError(p, "expected 'throw' or 'minimum_norm'");
            }
        }
    }
    if (m.rbf_clusters == 0) throw ConfigError(join(path, "K"), "must be positive");
    if (m.forest_trees == 0) throw ConfigError(join(path, "trees"), "must be positive");
    if (m.forest_mtry == 0) throw ConfigError(join(path, "mtry"), "must be positive");
    if (m.forest_node_size == 0) throw ConfigError(join(path, "node_size"), "must be positive");
}

CostStructure read_cost(const YAML::Node& node, const std::string& path) {
    check_keys(node, path,
               {"name", "holding_q", "shortage_u", "fixed_in", "fixed_out", "variable_in", "variable_out"});
    if (!node["name"]) throw ConfigError(join(path, "name"), "is required");
    CostStructure c;
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto p = join(path, key);
        if (key == "name") {
            c.name = text(kv.second, p);
            continue;
        }
        const double v = number(kv.second, p);
        if (v < 0.0) throw ConfigError(p, "must be nonnegative");
        if (key == "holding_q") c.holding_q = v;
        if (key == "shortage_u") c.shortage_u = v;
        if (key == "fixed_in") c.fixed_in = v;
        if (key == "fixed_out") c.fixed_out = v;
        if (key == "variable_in") c.variable_in = v;
        if (key == "variable_out") c.variable_out = v;
    }
    if (c.name.empty() || c.name.find_first_of(",\n\"") != std::string::npos) {
        throw ConfigError(join(path, "name"), "must be nonempty and free of commas, quotes and newlines");
    }
    return c;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

std::size_t PipelineConfig::g_for(std::size_t T) const {
    return static_cast<std::size_t>(std::floor(g_fraction * static_cast<double>(T)));
}

PipelineConfig validate_config(std::string_view raw, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(raw));
    } catch (const YAML::Exception& e) {
        throw ConfigError("", std::string("malformed configuration: ") + e.what());
    }
    PipelineConfig cfg;
    if (root.IsNull()) return cfg;
    check_keys(root, "",
               {"input", "dataset_name", "variant", "features", "model", "grid", "g_fraction", "horizon",
                "fold_stride", "fixed_origin", "risk_levels", "cost_scenarios", "workdays_per_year",
                "shortage_rate_mode", "sigma_grid", "reference_epsilon", "improvement", "save_model", "seed",
                "output_dir"});

    if (root["features"]) read_features(root["features"], "features", cfg.model.features);
    if (root["model"]) read_model(root["model"], "model", cfg.model);

    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        const auto& n = kv.second;
        if (key == "input") cfg.input = resolve(base_dir, text(n, key));
        if (key == "dataset_name") cfg.dataset_name = text(n, key);
        if (key == "variant") {
            try {
                cfg.variant = parse_variant(text(n, key));
            } catch (const ValidationError& e) {
                throw ConfigError(key, e.what());
            }
        }
        if (key == "grid") {
            if (!n.IsSequence() || n.size() == 0) throw ConfigError(key, "expected a nonempty list of model settings");
            for (std::size_t i = 0; i < n.size(); ++i) {
                ModelSpec candidate = cfg.model;
                read_model(n[i], index_path(key, i), candidate);
                cfg.grid.push_back(std::move(candidate));
            }
        }
        if (key == "g_fraction") {
            cfg.g_fraction = number(n, key);
            if (!(cfg.g_fraction > 0.0 && cfg.g_fraction < 1.0)) throw ConfigError(key, "must lie in (0, 1)");
        }
        if (key == "horizon") {
            cfg.horizon = count(n, key);
            if (cfg.horizon < 1) throw ConfigError(key, "must be at least 1");
        }
        if (key == "fold_stride") {
            cfg.fold_stride = count(n, key);
            if (cfg.fold_stride < 1) throw ConfigError(key, "must be at least 1");
        }
        if (key == "fixed_origin") cfg.fixed_origin = boolean(n, key);
        if (key == "risk_levels") {
            cfg.risk_levels = number_list(n, key);
            if (cfg.risk_levels.empty()) throw ConfigError(key, "needs at least one level");
            for (std::size_t i = 0; i < cfg.risk_levels.size(); ++i) {
                if (!(cfg.risk_levels[i] > 0.0 && cfg.risk_levels[i] < 1.0)) {
                    throw ConfigError(index_path(key, i), "must lie in (0, 1)");
                }
            }
        }
        if (key == "cost_scenarios") {
            if (!n.IsSequence() || n.size() == 0) throw ConfigError(key, "expected a nonempty list");
            cfg.cost_structures.clear();
            for (std::size_t i = 0; i < n.size(); ++i) {
                const auto p = index_path(key, i);
                if (n[i].IsScalar()) {
                    try {
                        auto group = cost_scenarios(parse_scenario_group(n[i].Scalar()));
                        cfg.cost_structures.insert(cfg.cost_structures.end(), group.begin(), group.end());
                    } catch (const ValidationError& e) {
                        throw ConfigError(p, e.what());
                    }
                } else {
                    cfg.cost_structures.push_back(read_cost(n[i], p));
                }
            }
        }
        if (key == "workdays_per_year") {
            cfg.simulation.workdays_per_year = number(n, key);
            if (!(cfg.simulation.workdays_per_year > 0.0)) throw ConfigError(key, "must be positive");
        }
        if (key == "shortage_rate_mode") {
            const auto mode = text(n, key);
            if (mode == "annual") {
                cfg.simulation.shortage_mode = ShortageRateMode::Annual;
            } else if (mode == "daily") {
                cfg.simulation.shortage_mode = ShortageRateMode::Daily;
            } else {
                throw ConfigError(key, "expected 'annual' or 'daily'");
            }
        }
        if (key == "sigma_grid") {
            cfg.sigma_grid = number_list(n, key);
            if (cfg.sigma_grid.empty()) throw ConfigError(key, "needs at least one value");
            for (std::size_t i = 0; i < cfg.sigma_grid.size(); ++i) {
                if (cfg.sigma_grid[i] < 0.0) throw ConfigError(index_path(key, i), "must be nonnegative");
                if (i > 0 && cfg.sigma_grid[i] < cfg.sigma_grid[i - 1]) {
                    throw ConfigError(index_path(key, i), "sigma grid must be sorted ascending");
                }
            }
        }
        if (key == "reference_epsilon") {
            if (!n.IsSequence()) throw ConfigError(key, "expected a list");
            for (std::size_t i = 0; i < n.size(); ++i) {
                const auto p = index_path(key, i);
                check_keys(n[i], p, {"label", "epsilon_bar"});
                if (!n[i]["epsilon_bar"]) throw ConfigError(join(p, "epsilon_bar"), "is required");
                ReferenceLine line;
                line.label = n[i]["label"] ? text(n[i]["label"], join(p, "label")) : std::string();
                line.epsilon_bar = number(n[i]["epsilon_bar"], join(p, "epsilon_bar"));
                if (line.epsilon_bar < 0.0) throw ConfigError(join(p, "epsilon_bar"), "must be nonnegative");
                cfg.reference_epsilon.push_back(std::move(line));
            }
        }
        if (key == "improvement") {
            check_keys(n, key, {"from_epsilon", "to_epsilon", "cost_per_day"});
            ImprovementSpec imp;
            for (const char* field : {"from_epsilon", "to_epsilon", "cost_per_day"}) {
                if (!n[field]) throw ConfigError(join(key, field), "is required");
            }
            imp.from_epsilon = number(n["from_epsilon"], join(key, "from_epsilon"));
            imp.to_epsilon = number(n["to_epsilon"], join(key, "to_epsilon"));
            imp.cost_per_day = number(n["cost_per_day"], join(key, "cost_per_day"));
            cfg.improvement = imp;
        }
        if (key == "save_model") cfg.save_model = boolean(n, key);
        if (key == "seed") cfg.seed = scalar<std::uint64_t>(n, key, "a nonnegative integer");
        if (key == "output_dir") cfg.output_dir = resolve(base_dir, text(n, key));
    }
    if (cfg.dataset_name.empty()) {
        cfg.dataset_name = cfg.input.empty() ? "series" : cfg.input.stem().string();
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open configuration file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return validate_config(buffer.str(), path.parent_path());
}

namespace {

nlohmann::json spec_json(const ModelSpec& m) {
    const auto& f = m.features;
    return {{"family", std::string(to_string(m.family))},
            {"features",
             {{"day_of_month", f.use_day_of_month},
              {"day_of_week", f.use_day_of_week},
              {"month", f.use_month},
              {"week", f.use_week},
              {"lags", f.lag_count},
              {"weekday_reference", f.weekday_reference}}},
            {"max_p", m.ar_max_p ? nlohmann::json(*m.ar_max_p) : nlohmann::json(nullptr)},
            {"K", m.rbf_clusters},
            {"alpha", m.rbf_alpha},
            {"trees", m.forest_trees},
            {"mtry", m.forest_mtry},
            {"node_size", m.forest_node_size},
            {"rank_policy", m.rank_policy == RankPolicy::Throw ? "throw" : "minimum_norm"},
            {"lambda_grid", m.lambda_grid}};
}

}  // namespace

std::string canonical_config(const PipelineConfig& c) {
    nlohmann::json j;
    j["input"] = c.input.generic_string();
    j["dataset_name"] = c.dataset_name;
    j["variant"] = std::string(to_string(c.variant));
    j["model"] = spec_json(c.model);
    j["grid"] = nlohmann::json::array();
    for (const auto& g : c.grid) j["grid"].push_back(spec_json(g));
    j["g_fraction"] = c.g_fraction;
    j["horizon"] = c.horizon;
    j["fold_stride"] = c.fold_stride;
    j["fixed_origin"] = c.fixed_origin;
    j["risk_levels"] = c.risk_levels;
    j["cost_scenarios"] = nlohmann::json::array();
    for (const auto& s : c.cost_structures) {
        j["cost_scenarios"].push_back({{"name", s.name},
                                       {"holding_q", s.holding_q},
                                       {"shortage_u", s.shortage_u},
                                       {"fixed_in", s.fixed_in},
                                       {"fixed_out", s.fixed_out},
                                       {"variable_in", s.variable_in},
                                       {"variable_out", s.variable_out}});
    }
    j["workdays_per_year"] = c.simulation.workdays_per_year;
    j["shortage_rate_mode"] = c.simulation.shortage_mode == ShortageRateMode::Annual ? "annual" : "daily";
    j["sigma_grid"] = c.sigma_grid;
    j["reference_epsilon"] = nlohmann::json::array();
    for (const auto& r : c.reference_epsilon) {
        j["reference_epsilon"].push_back({{"label", r.label}, {"epsilon_bar", r.epsilon_bar}});
    }
    if (c.improvement) {
        j["improvement"] = {{"from_epsilon", c.improvement->from_epsilon},
                            {"to_epsilon", c.improvement->to_epsilon},
                            {"cost_per_day", c.improvement->cost_per_day}};
    } else {
        j["improvement"] = nullptr;
    }
    j["save_model"] = c.save_model;
    j["seed"] = c.seed;
    return j.dump();
}

std::string config_hash(const PipelineConfig& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canonical_config(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string header_line(const PipelineConfig& config) {
    return "cashcast seed=" + std::to_string(config.seed) + " config_hash=" + config_hash(config);
}

std::optional<HeaderInfo> parse_header_line(std::string_view line) {
    for (std::string_view prefix : {"# ", "<!-- "}) {
        if (line.substr(0, prefix.size()) == prefix) line.remove_prefix(prefix.size());
    }
    std::istringstream is{std::string(line)};
    std::string tag, seed_kv, hash_kv;
    if (!(is >> tag >> seed_kv >> hash_kv) || tag != "cashcast") return std::nullopt;
    if (seed_kv.rfind("seed=", 0) != 0 || hash_kv.rfind("config_hash=", 0) != 0) return std::nullopt;
    HeaderInfo info;
    try {
        info.seed = std::stoull(seed_kv.substr(5));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    info.config_hash = hash_kv.substr(12);
    if (info.config_hash.size() != 16) return std::nullopt;
    return info;
}

std::uint64_t sub_seed(std::uint64_t master, SeedStream stream) {
    return stats::derive_seed(master, static_cast<std::uint64_t>(stream));
}

}  // namespace cashcast
