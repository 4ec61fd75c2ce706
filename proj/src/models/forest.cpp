#include "cashcast/models/forest.hpp"

#include "cashcast/error.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>
#include <thread>

namespace cashcast {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double sse = 0.0;
};

class TreeGrower {
public:
    TreeGrower(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t mtry,
               std::size_t node_size, std::uint64_t seed)
        : X_(X), y_(y), mtry_(mtry), node_size_(node_size), rng_(seed) {}

    RegressionTree grow() {
        const auto n = static_cast<std::size_t>(X_.rows());
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> sample(n);
        for (auto& s : sample) s = pick(rng_);

        RegressionTree tree;
        tree.nodes.emplace_back();
        struct Pending {
            std::size_t node;
            std::vector<std::size_t> rows;
        };
        std::vector<Pending> stack;
        stack.push_back({0, std::move(sample)});
        while (!stack.empty()) {
            Pending job = std::move(stack.back());
            stack.pop_back();
            auto& node = tree.nodes[job.node];
            node.samples = job.rows.size();
            double sum = 0.0;
            for (auto r : job.rows) sum += y_(static_cast<Eigen::Index>(r));
            node.value = sum / static_cast<double>(job.rows.size());
            if (job.rows.size() <= node_size_) {
                continue;
            }
            double sse = 0.0;
            for (auto r : job.rows) {
                const double d = y_(static_cast<Eigen::Index>(r)) - node.value;
                sse += d * d;
            }
            if (!(sse > 0.0)) {
                continue;
            }
            const Split split = best_split(job.rows, node.value);
            if (split.feature < 0 || !(split.sse < sse * (1.0 - 1e-12))) {
                continue;
            }
            std::vector<std::size_t> left;
            std::vector<std::size_t> right;
            for (auto r : job.rows) {
                (X_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right).push_back(r);
            }
            node.feature = split.feature;
            node.threshold = split.threshold;
            const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes[job.node].left = left_id;
            tree.nodes[job.node].right = left_id + 1;
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            stack.push_back({static_cast<std::size_t>(left_id + 1), std::move(right)});
            stack.push_back({static_cast<std::size_t>(left_id), std::move(left)});
        }
        return tree;
    }

private:
    Split best_split(const std::vector<std::size_t>& rows, double center) {
        // Columns are drawn in random order; columns constant within the node do not count
        // toward mtry, so a node only stops early when every column is constant.
        const auto p = static_cast<std::size_t>(X_.cols());
        std::vector<std::size_t> order(p);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < p && cols.size() < mtry_; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, p - 1);
            std::swap(order[i], order[pick(rng_)]);
            if (varies(rows, order[i])) cols.push_back(order[i]);
        }
        std::sort(cols.begin(), cols.end());

        Split best;
        std::vector<std::pair<double, double>> xy(rows.size());
        for (auto j : cols) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto r = static_cast<Eigen::Index>(rows[i]);
                xy[i] = {X_(r, static_cast<Eigen::Index>(j)), y_(r) - center};
            }
            std::sort(xy.begin(), xy.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (xy.front().first == xy.back().first) {
                continue;
            }
            double total_sum = 0.0;
            double total_sq = 0.0;
            for (const auto& [x, v] : xy) {
                total_sum += v;
                total_sq += v * v;
            }
            double left_sum = 0.0;
            double left_sq = 0.0;
            const auto n = static_cast<double>(xy.size());
            for (std::size_t i = 0; i + 1 < xy.size(); ++i) {
                left_sum += xy[i].second;
                left_sq += xy[i].second * xy[i].second;
                if (xy[i].first == xy[i + 1].first) {
                    continue;
                }
                const auto nl = static_cast<double>(i + 1);
                const double right_sum = total_sum - left_sum;
                const double sse = (left_sq - left_sum * left_sum / nl) +
                                   (total_sq - left_sq - right_sum * right_sum / (n - nl));
                if (best.feature < 0 || sse < best.sse) {
                    best.feature = static_cast<int>(j);
                    best.threshold = 0.5 * (xy[i].first + xy[i + 1].first);
                    best.sse = sse;
                }
            }
        }
        return best;
    }

    bool varies(const std::vector<std::size_t>& rows, std::size_t col) const {
        const auto j = static_cast<Eigen::Index>(col);
        const double first = X_(static_cast<Eigen::Index>(rows.front()), j);
        for (auto r : rows) {
            if (X_(static_cast<Eigen::Index>(r), j) != first) return true;
        }
        return false;
    }

    const Eigen::MatrixXd& X_;
    const Eigen::VectorXd& y_;
    std::size_t mtry_;
    std::size_t node_size_;
    std::mt19937_64 rng_;
};

}  // namespace

ForecastModel fit_random_forest(const DesignMatrix& X, std::size_t a, std::size_t b, std::size_t c,
                                std::uint64_t seed) {
    ForestParams params;
    params.tree_count = a;
    params.mtry = b;
    params.node_size = c;
    params.seed = seed;
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < X.columns.size(); ++j) {
        if (X.columns[j].kind != FeatureColumn::Kind::Intercept) {
            keep.push_back(static_cast<Eigen::Index>(j));
            params.columns.push_back(X.columns[j]);
        }
    }
    if (a == 0 || b == 0 || c == 0) {
        throw ValidationError("random forest needs a, b, c >= 1");
    }
    if (b > params.columns.size()) {
        throw ValidationError("mtry b = " + std::to_string(b) + " exceeds the " +
                              std::to_string(params.columns.size()) + " feature columns");
    }
    if (X.rows() == 0) {
        throw ValidationError("random forest needs at least one row");
    }
    const Eigen::MatrixXd inputs = X.values(Eigen::all, keep);
    const Eigen::VectorXd& target = X.target;

    params.trees.resize(a);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(a, std::thread::hardware_concurrency()));
    auto grow_range = [&](std::size_t first) {
        for (std::size_t k = first; k < a; k += workers) {
            params.trees[k] = TreeGrower(inputs, target, b, c, seed + k).grow();
        }
    };
    if (workers == 1) {
        grow_range(0);
    } else {
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, grow_range, w));
        for (auto& j : jobs) j.get();
    }

    TrainingSummary summary;
    summary.n_train = X.rows();
    summary.train_mean = target.mean();
    ForecastModel model{Family::RandomForest, std::move(params), summary};
    const auto fitted = predict_forest(model, inputs);
    double rss = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const double d = fitted[i] - target(static_cast<Eigen::Index>(i));
        rss += d * d;
    }
    model.training_summary.residual_variance = rss / static_cast<double>(fitted.size());
    return model;
}

std::vector<double> predict_forest(const ForecastModel& model, const Eigen::MatrixXd& rows) {
    const auto& params = std::get<ForestParams>(model.params);
    if (static_cast<std::size_t>(rows.cols()) != params.columns.size()) {
        throw ValidationError("random forest expects " + std::to_string(params.columns.size()) +
                              " feature columns, got " + std::to_string(rows.cols()));
    }
    std::vector<double> out(static_cast<std::size_t>(rows.rows()), 0.0);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        double sum = 0.0;
        for (const auto& tree : params.trees) sum += tree.predict(rows.row(i));
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(params.trees.size());
    }
    return out;
}

}  // namespace cashcast
