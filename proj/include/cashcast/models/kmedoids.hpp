#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace cashcast {

struct Clustering {
    std::vector<std::size_t> medoids;     // row indices into the input points
    std::vector<std::size_t> assignment;  // cluster index per input point
    double cost = 0.0;                    // total member-to-medoid Euclidean distance
    std::vector<double> cost_history;     // cost after each assignment step
};

/// k-medoids on the rows of `points` with Euclidean distance.
///
/// Identical rows are merged with multiplicity weights first, so duplicating a data set
/// leaves the medoid values unchanged. Initial medoids are the K distinct points with the
/// smallest total distance to all points (seeded random tie-breaks). The alternating phase
/// assigns points to the nearest medoid and moves each medoid to the member minimizing the
/// within-cluster distance; it stops when the cost no longer decreases. A swap phase then
/// exchanges medoids with non-medoids while that lowers the cost.
///
/// Throws ValidationError when K is zero or exceeds the number of distinct points.
Clustering fit_kmedoids(const Eigen::MatrixXd& points, std::size_t K, std::uint64_t seed);

}  // namespace cashcast
