#include "cashcast/models/kmedoids.hpp"

#include "cashcast/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace cashcast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Assignment {
    std::vector<std::size_t> slot;  // nearest medoid slot per point
    std::vector<double> nearest;
    std::vector<double> second;
    double cost = 0.0;
};

Assignment assign(const Eigen::MatrixXd& dist, const std::vector<double>& weight,
                  const std::vector<std::size_t>& medoids) {
    const auto u = static_cast<std::size_t>(dist.rows());
    Assignment a;
    a.slot.resize(u);
    a.nearest.resize(u);
    a.second.resize(u);
    for (std::size_t i = 0; i < u; ++i) {
        double d1 = kInf;
        double d2 = kInf;
        std::size_t best = 0;
        for (std::size_t k = 0; k < medoids.size(); ++k) {
            const double d = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(medoids[k]));
            if (d < d1) {
                d2 = d1;
                d1 = d;
                best = k;
            } else if (d < d2) {
                d2 = d;
            }
        }
        a.slot[i] = best;
        a.nearest[i] = d1;
        a.second[i] = d2;
        a.cost += weight[i] * d1;
    }
    return a;
}

bool lexicographic_less(const Eigen::MatrixXd& p, std::size_t a, std::size_t b) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        const double x = p(static_cast<Eigen::Index>(a), j);
        const double y = p(static_cast<Eigen::Index>(b), j);
        if (x != y) return x < y;
    }
    return false;
}

}  // namespace

Clustering fit_kmedoids(const Eigen::MatrixXd& points, std::size_t K, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (K == 0) {
        throw ValidationError("k-medoids needs K >= 1");
    }
    if (n == 0) {
        throw ValidationError("k-medoids needs at least one point");
    }

    // Merge identical rows; unique points are ordered by first occurrence.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lexicographic_less(points, a, b); });
    std::vector<std::size_t> group_of(n);
    std::vector<std::size_t> representative;
    std::vector<double> weight;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || lexicographic_less(points, order[i - 1], order[i])) {
            representative.push_back(order[i]);
            weight.push_back(0.0);
        }
        group_of[order[i]] = representative.size() - 1;
        weight.back() += 1.0;
    }
    const std::size_t u = representative.size();
    if (K > u) {
        throw ValidationError("K = " + std::to_string(K) + " exceeds the " + std::to_string(u) +
                              " distinct points");
    }
    std::vector<std::size_t> by_occurrence(u);
    std::iota(by_occurrence.begin(), by_occurrence.end(), std::size_t{0});
    std::sort(by_occurrence.begin(), by_occurrence.end(),
              [&](std::size_t a, std::size_t b) { return representative[a] < representative[b]; });
    std::vector<std::size_t> rank_of(u);
    for (std::size_t r = 0; r < u; ++r) rank_of[by_occurrence[r]] = r;
    {
        std::vector<std::size_t> rep2(u);
        std::vector<double> w2(u);
        for (std::size_t g = 0; g < u; ++g) {
            rep2[rank_of[g]] = representative[g];
            w2[rank_of[g]] = weight[g];
        }
        representative = std::move(rep2);
        weight = std::move(w2);
        for (auto& g : group_of) g = rank_of[g];
    }

    Eigen::MatrixXd unique_pts(static_cast<Eigen::Index>(u), points.cols());
    for (std::size_t g = 0; g < u; ++g) {
        unique_pts.row(static_cast<Eigen::Index>(g)) = points.row(static_cast<Eigen::Index>(representative[g]));
    }
    Eigen::MatrixXd dist(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
        dist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < dist.cols(); ++j) {
            const double d = (unique_pts.row(i) - unique_pts.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }

    // Initial medoids: smallest weighted total distance, random order among ties.
    std::vector<double> score(u, 0.0);
    for (std::size_t j = 0; j < u; ++j) {
        for (std::size_t i = 0; i < u; ++i) {
            score[j] += weight[i] * dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    std::vector<std::size_t> candidates(u);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    std::vector<std::size_t> medoids(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(K));

    Clustering result;
    Assignment a = assign(dist, weight, medoids);
    result.cost_history.push_back(a.cost);

    // Alternating phase.
    for (;;) {
        std::vector<std::size_t> updated = medoids;
        for (std::size_t k = 0; k < K; ++k) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < u; ++i) {
                if (a.slot[i] == k) members.push_back(i);
            }
            auto within = [&](std::size_t c) {
                double s = 0.0;
                for (std::size_t i : members) {
                    s += weight[i] * dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
                }
                return s;
            };
            double best = within(medoids[k]);
            for (std::size_t c : members) {
                const double s = within(c);
                if (s < best) {
                    best = s;
                    updated[k] = c;
                }
            }
        }
        Assignment next = assign(dist, weight, updated);
        if (!(next.cost < a.cost)) {
            break;
        }
        medoids = std::move(updated);
        a = std::move(next);
        result.cost_history.push_back(a.cost);
    }

    // Swap phase: best single medoid/non-medoid exchange per pass.
    std::vector<char> is_medoid(u, 0);
    for (auto m : medoids) is_medoid[m] = 1;
    for (;;) {
        const double tolerance = 1e-12 * std::max(1.0, a.cost);
        double best_delta = -tolerance;
        std::size_t best_slot = K;
        std::size_t best_point = 0;
        std::vector<double> delta(K);
        for (std::size_t o = 0; o < u; ++o) {
            if (is_medoid[o]) continue;
            std::fill(delta.begin(), delta.end(), 0.0);
            double shared = 0.0;
            for (std::size_t i = 0; i < u; ++i) {
                const double dio = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(o));
                const double keep = std::min(dio - a.nearest[i], 0.0);
                shared += weight[i] * keep;
                delta[a.slot[i]] += weight[i] * (std::min(dio, a.second[i]) - a.nearest[i] - keep);
            }
            for (std::size_t k = 0; k < K; ++k) {
                if (delta[k] + shared < best_delta) {
                    best_delta = delta[k] + shared;
                    best_slot = k;
                    best_point = o;
                }
            }
        }
        if (best_slot == K) {
            break;
        }
        is_medoid[medoids[best_slot]] = 0;
        is_medoid[best_point] = 1;
        medoids[best_slot] = best_point;
        a = assign(dist, weight, medoids);
        result.cost_history.push_back(a.cost);
    }

    result.cost = a.cost;
    result.medoids.reserve(K);
    for (auto m : medoids) result.medoids.push_back(representative[m]);
    result.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.assignment[i] = a.slot[group_of[i]];
    return result;
}

}  // namespace cashcast
