#include "cashcast/linalg.hpp"

#include "cashcast/error.hpp"

namespace cashcast {

namespace {

Eigen::Index prefix_rank(const Eigen::MatrixXd& X, Eigen::Index cols, double threshold) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X.leftCols(cols));
    qr.setThreshold(threshold);
    return qr.rank();
}

double rank_threshold(const Eigen::MatrixXd& X) {
    return 1e-10 * static_cast<double>(std::max(X.rows(), X.cols()));
}

}  // namespace

Eigen::Index first_dependent_column(const Eigen::MatrixXd& X) {
    const double threshold = rank_threshold(X);
    if (prefix_rank(X, X.cols(), threshold) == X.cols()) {
        return -1;
    }
    // rank(prefix) == prefix length is monotone in the prefix length
    Eigen::Index lo = 1;
    Eigen::Index hi = X.cols();
    while (lo < hi) {
        const Eigen::Index mid = (lo + hi) / 2;
        if (prefix_rank(X, mid, threshold) == mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo - 1;
}

LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         RankPolicy policy,
                                         std::span<const std::string> column_names) {
    if (X.rows() != y.size()) {
        throw ValidationError("least squares: row count differs from target length");
    }
    if (X.cols() == 0) {
        throw ValidationError("least squares: no columns");
    }
    LeastSquaresSolution out;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(rank_threshold(X));
    out.rank = qr.rank();
    if (out.rank == X.cols() && X.rows() >= X.cols()) {
        out.coefficients = qr.solve(y);
    } else {
        if (policy == RankPolicy::Throw) {
            const Eigen::Index j = X.rows() < X.cols() ? X.rows() : first_dependent_column(X);
            const auto name = (j >= 0 && static_cast<std::size_t>(j) < column_names.size())
                                  ? column_names[static_cast<std::size_t>(j)]
                                  : "#" + std::to_string(j);
            throw CollinearityError(name);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
        cod.setThreshold(rank_threshold(X));
        out.coefficients = cod.solve(y);
        out.rank_deficient = true;
    }
    out.rss = (X * out.coefficients - y).squaredNorm();
    return out;
}

}  // namespace cashcast
