#include "cashcast/models/forecast_model.hpp"

#include "cashcast/error.hpp"

#include <string>

namespace cashcast {

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Mean: return "mean";
        case Family::AR: return "ar";
        case Family::Regression: return "regression";
        case Family::RBF: return "rbf";
        case Family::RandomForest: return "random_forest";
    }
    return "unknown";
}

Family parse_family(std::string_view text) {
    if (text == "mean") return Family::Mean;
    if (text == "ar") return Family::AR;
    if (text == "regression") return Family::Regression;
    if (text == "rbf") return Family::RBF;
    if (text == "random_forest") return Family::RandomForest;
    throw ValidationError("unknown model family '" + std::string(text) + "'");
}

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(row(n.feature) <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

}  // namespace cashcast
