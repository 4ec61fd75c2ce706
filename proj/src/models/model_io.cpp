#include "cashcast/models/model_io.hpp"

#include "cashcast/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cashcast {

using nlohmann::json;

namespace {

json columns_to_json(const std::vector<FeatureColumn>& columns) {
    json out = json::array();
    for (const auto& c : columns) out.push_back(c.name());
    return out;
}

std::vector<FeatureColumn> columns_from_json(const json& j) {
    std::vector<FeatureColumn> out;
    for (const auto& name : j) out.push_back(parse_feature_column(name.get<std::string>()));
    return out;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows.push_back(vector_to_json(m.row(i).transpose()));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto row = vector_from_json(j[i]);
        if (row.size() != cols) throw ValidationError("model file: ragged matrix");
        m.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return m;
}

// Infinite clamp bounds are written as null.
json bound_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double bound_from_json(const json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

json tree_to_json(const RegressionTree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.samples});
    }
    return nodes;
}

RegressionTree tree_from_json(const json& j) {
    RegressionTree tree;
    for (const auto& n : j) {
        tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<std::int32_t>(),
                              n.at(3).get<std::int32_t>(), n.at(4).get<double>(), n.at(5).get<std::size_t>()});
    }
    return tree;
}

}  // namespace

std::string serialize_model(const ForecastModel& model) {
    json doc;
    doc["format"] = "cashcast-model";
    doc["version"] = kModelFormatVersion;
    doc["family"] = std::string(to_string(model.family));
    const auto& s = model.training_summary;
    doc["training_summary"] = {{"n_train", s.n_train},
                               {"train_mean", s.train_mean},
                               {"residual_variance", s.residual_variance},
                               {"rank_deficient", s.rank_deficient}};
    json p;
    std::visit(
        [&](const auto& params) {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, MeanParams>) {
                p["value"] = params.value;
            } else if constexpr (std::is_same_v<T, ARParams>) {
                p["order_p"] = params.order_p;
                p["coefficients"] = params.coefficients;
                p["lambda"] = params.lambda_transform.lambda;
                p["lambda_fitted_on"] = params.lambda_transform.fitted_on_length;
                p["transformed_mean"] = params.transformed_mean;
                p["aic"] = params.aic;
                p["z_min"] = bound_to_json(params.z_min);
                p["z_max"] = bound_to_json(params.z_max);
            } else if constexpr (std::is_same_v<T, RegressionParams>) {
                p["columns"] = columns_to_json(params.columns);
                p["coefficients"] = vector_to_json(params.coefficients);
            } else if constexpr (std::is_same_v<T, RBFParams>) {
                p["K"] = params.cluster_count;
                p["alpha"] = params.alpha;
                p["columns"] = columns_to_json(params.columns);
                p["medoids"] = matrix_to_json(params.medoids);
                p["rho"] = params.rho;
                p["weights"] = vector_to_json(params.weights);
                p["standardizer"] = {{"mean", params.standardizer.mean}, {"std_dev", params.standardizer.std_dev}};
                p["lambda"] = params.lambda_transform.lambda;
                p["lambda_fitted_on"] = params.lambda_transform.fitted_on_length;
                p["z_min"] = bound_to_json(params.z_min);
                p["z_max"] = bound_to_json(params.z_max);
            } else if constexpr (std::is_same_v<T, ForestParams>) {
                p["a"] = params.tree_count;
                p["b"] = params.mtry;
                p["c"] = params.node_size;
                p["seed"] = params.seed;
                p["columns"] = columns_to_json(params.columns);
                p["node_layout"] = {"feature", "threshold", "left", "right", "value", "samples"};
                json trees = json::array();
                for (const auto& t : params.trees) trees.push_back(tree_to_json(t));
                p["trees"] = std::move(trees);
            }
        },
        model.params);
    doc["params"] = std::move(p);
    return doc.dump(1);
}

ForecastModel deserialize_model(std::string_view text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != "cashcast-model") {
            throw ValidationError("not a cashcast model document");
        }
        if (doc.at("version").get<int>() != kModelFormatVersion) {
            throw ValidationError("unsupported model format version " + doc.at("version").dump());
        }
        ForecastModel model;
        model.family = parse_family(doc.at("family").get<std::string>());
        const auto& s = doc.at("training_summary");
        model.training_summary = {s.at("n_train").get<std::size_t>(), s.at("train_mean").get<double>(),
                                  s.at("residual_variance").get<double>(), s.at("rank_deficient").get<bool>()};
        const auto& p = doc.at("params");
        constexpr double inf = std::numeric_limits<double>::infinity();
        switch (model.family) {
            case Family::Mean:
                model.params = MeanParams{p.at("value").get<double>()};
                break;
            case Family::AR: {
                ARParams ar;
                ar.order_p = p.at("order_p").get<std::size_t>();
                ar.coefficients = p.at("coefficients").get<std::vector<double>>();
                ar.lambda_transform = {p.at("lambda").get<double>(), p.at("lambda_fitted_on").get<std::size_t>()};
                ar.transformed_mean = p.at("transformed_mean").get<double>();
                ar.aic = p.at("aic").get<double>();
                ar.z_min = bound_from_json(p.at("z_min"), -inf);
                ar.z_max = bound_from_json(p.at("z_max"), inf);
                model.params = std::move(ar);
                break;
            }
            case Family::Regression:
                model.params = RegressionParams{columns_from_json(p.at("columns")),
                                                vector_from_json(p.at("coefficients"))};
                break;
            case Family::RBF: {
                RBFParams rbf;
                rbf.cluster_count = p.at("K").get<std::size_t>();
                rbf.alpha = p.at("alpha").get<unsigned>();
                rbf.columns = columns_from_json(p.at("columns"));
                rbf.medoids = matrix_from_json(p.at("medoids"), static_cast<Eigen::Index>(rbf.columns.size()));
                rbf.rho = p.at("rho").get<std::vector<double>>();
                rbf.weights = vector_from_json(p.at("weights"));
                rbf.standardizer = {p.at("standardizer").at("mean").get<double>(),
                                    p.at("standardizer").at("std_dev").get<double>()};
                rbf.lambda_transform = {p.at("lambda").get<double>(), p.at("lambda_fitted_on").get<std::size_t>()};
                rbf.z_min = bound_from_json(p.at("z_min"), -inf);
                rbf.z_max = bound_from_json(p.at("z_max"), inf);
                model.params = std::move(rbf);
                break;
            }
            case Family::RandomForest: {
                ForestParams f;
                f.tree_count = p.at("a").get<std::size_t>();
                f.mtry = p.at("b").get<std::size_t>();
                f.node_size = p.at("c").get<std::size_t>();
                f.seed = p.at("seed").get<std::uint64_t>();
                f.columns = columns_from_json(p.at("columns"));
                for (const auto& t : p.at("trees")) f.trees.push_back(tree_from_json(t));
                model.params = std::move(f);
                break;
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const ForecastModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file " + path.string());
    out << serialize_model(model) << '\n';
}

ForecastModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

}  // namespace cashcast
