#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "viewmetric/parallel.hpp"

namespace viewmetric {

using Index = Eigen::Index;

enum class MetricKind { Euclidean, View };
enum class NormKind { TwoNorm, VNorm };

inline const char* to_string(MetricKind m) {
    return m == MetricKind::Euclidean ? "euclidean" : "view";
}

inline std::optional<MetricKind> parse_metric(std::string_view s) {
    if (s == "euclidean") return MetricKind::Euclidean;
    if (s == "view") return MetricKind::View;
    return std::nullopt;
}

namespace detail {

template <typename Derived>
void require_vector(const Eigen::MatrixBase<Derived>& x, const char* what) {
    if (x.rows() != 1 && x.cols() != 1)
        throw std::invalid_argument(std::string(what) + ": expected a vector");
}

template <typename DA, typename DB>
void require_same_dim(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
}

}  // namespace detail

/// Straight-line distance sqrt(sum_i (x_i - y_i)^2). Any dimension >= 1.
template <typename DA, typename DB>
typename DA::Scalar euclidean_distance(const Eigen::MatrixBase<DA>& x,
                                       const Eigen::MatrixBase<DB>& y) {
    detail::require_vector(x, "euclidean_distance");
    detail::require_vector(y, "euclidean_distance");
    detail::require_same_dim(x, y);
    if (x.size() < 1) throw std::invalid_argument("euclidean_distance: empty vector");
    using Scalar = typename DA::Scalar;
    Scalar acc = 0;
    for (Index i = 0; i < x.size(); ++i) {
        const Scalar d = x(i) - y(i);
        acc += d * d;
    }
    return std::sqrt(acc);
}

/// Sum over all coordinate pairs (i, j), i < j, of the planar distance
/// between the two points projected onto the (i, j) coordinate plane:
///
///     d(x, y) = sum_{i<j} sqrt((x_i - y_i)^2 + (x_j - y_j)^2)
///
/// Coincides with the Euclidean distance at m = 2 and dominates it for
/// m > 2. Requires dimension >= 2. O(m^2) per evaluation.
template <typename DA, typename DB>
typename DA::Scalar view_distance(const Eigen::MatrixBase<DA>& x,
                                  const Eigen::MatrixBase<DB>& y) {
    detail::require_vector(x, "view_distance");
    detail::require_vector(y, "view_distance");
    detail::require_same_dim(x, y);
    const Index m = x.size();
    if (m < 2) throw std::invalid_argument("view_distance: dimension must be >= 2, got " +
                                           std::to_string(m));
    using Scalar = typename DA::Scalar;
    Scalar acc = 0;
    for (Index i = 0; i < m; ++i) {
        const Scalar di = x(i) - y(i);
        const Scalar di2 = di * di;
        for (Index j = i + 1; j < m; ++j) {
            const Scalar dj = x(j) - y(j);
            acc += std::sqrt(di2 + dj * dj);
        }
    }
    return acc;
}

template <typename DA, typename DB>
typename DA::Scalar distance(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y,
                             MetricKind metric) {
    return metric == MetricKind::View ? view_distance(x, y) : euclidean_distance(x, y);
}

/// v-norm: sum_{i<j} sqrt(x_i^2 + x_j^2); equals the view distance to the
/// origin. Requires dimension >= 2.
template <typename Derived>
typename Derived::Scalar v_norm(const Eigen::MatrixBase<Derived>& x) {
    detail::require_vector(x, "v_norm");
    const Index m = x.size();
    if (m < 2) throw std::invalid_argument("v_norm: dimension must be >= 2, got " +
                                           std::to_string(m));
    using Scalar = typename Derived::Scalar;
    Scalar acc = 0;
    for (Index i = 0; i < m; ++i) {
        const Scalar xi2 = x(i) * x(i);
        for (Index j = i + 1; j < m; ++j) acc += std::sqrt(xi2 + x(j) * x(j));
    }
    return acc;
}

template <typename Derived>
typename Derived::Scalar norm_of(const Eigen::MatrixBase<Derived>& x, NormKind norm) {
    return norm == NormKind::VNorm ? v_norm(x) : static_cast<typename Derived::Scalar>(x.norm());
}

/// Relative norm growth when one coordinate is appended:
/// ||(x_1..x_m, appended)|| / ||x|| - 1 under the chosen norm.
/// Positive gains mean the extra coordinate stretches the point away from
/// the origin; the v-norm gain dominates the 2-norm gain.
template <typename Derived>
typename Derived::Scalar dim_similarity_gain(const Eigen::MatrixBase<Derived>& x,
                                             typename Derived::Scalar appended, NormKind norm) {
    detail::require_vector(x, "dim_similarity_gain");
    const Index m = x.size();
    if (m < 2) throw std::invalid_argument("dim_similarity_gain: dimension must be >= 2, got " +
                                           std::to_string(m));
    using Scalar = typename Derived::Scalar;
    const Scalar base = norm_of(x, norm);
    if (base == Scalar(0))
        throw std::invalid_argument("dim_similarity_gain: norm of x is zero, gain undefined");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> extended(m + 1);
    for (Index i = 0; i < m; ++i) extended(i) = x(i);
    extended(m) = appended;
    return norm_of(extended, norm) / base - Scalar(1);
}

/// Relative norm growth when the trailing zero coordinate of x is replaced
/// by `last`. x must end in an exact zero (the gain is defined against that
/// baseline); the baseline norm must be positive.
template <typename Derived>
typename Derived::Scalar certain_dim_similarity_gain(const Eigen::MatrixBase<Derived>& x,
                                                     typename Derived::Scalar last,
                                                     NormKind norm) {
    detail::require_vector(x, "certain_dim_similarity_gain");
    const Index m = x.size();
    if (m < 2)
        throw std::invalid_argument("certain_dim_similarity_gain: dimension must be >= 2, got " +
                                    std::to_string(m));
    using Scalar = typename Derived::Scalar;
    if (x(m - 1) != Scalar(0))
        throw std::invalid_argument(
            "certain_dim_similarity_gain: last coordinate of x must be zero");
    const Scalar base = norm_of(x, norm);
    if (base == Scalar(0))
        throw std::invalid_argument(
            "certain_dim_similarity_gain: baseline norm is zero, gain undefined");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> replaced(m);
    for (Index i = 0; i < m; ++i) replaced(i) = x(i);
    replaced(m - 1) = last;
    return norm_of(replaced, norm) / base - Scalar(1);
}

/// Square symmetric nonnegative matrix of pairwise distances, tagged with
/// the metric that produced it.
template <typename ScalarT>
struct DistanceMatrixT {
    using Scalar = ScalarT;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> entries;
    MetricKind metric = MetricKind::Euclidean;

    Index n() const { return entries.rows(); }
};

using DistanceMatrix = DistanceMatrixT<double>;

/// Pairwise distances between the rows of `points` (n x m, one point per
/// row). Entries are independent pure computations, so the matrix is
/// identical for any evaluation order; rows are filled in parallel.
template <typename Derived>
DistanceMatrixT<typename Derived::Scalar> pairwise_distances(
    const Eigen::MatrixBase<Derived>& points, MetricKind metric) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows();
    const Index m = points.cols();
    if (n < 1) throw std::invalid_argument("pairwise_distances: need at least one point");
    if (metric == MetricKind::View && m < 2)
        throw std::invalid_argument("pairwise_distances: view metric requires dimension >= 2, got " +
                                    std::to_string(m));
    if (m < 1) throw std::invalid_argument("pairwise_distances: empty points");

    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pts = points;
    DistanceMatrixT<Scalar> result;
    result.metric = metric;
    result.entries.setZero(n, n);
    auto& D = result.entries;
    parallel_for(n, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        for (Index i = begin; i < end; ++i)
            for (Index j = 0; j < n; ++j) {
                if (i == j) continue;
                D(i, j) = distance(pts.row(i), pts.row(j), metric);
            }
    });
    return result;
}

/// One sampled slice of a distance-to-origin field: the two free axes are
/// swept over [lo, hi] inclusive (steps samples each, cell corners), all
/// remaining coordinates are pinned. values(i, j) is the distance at
/// axis_x = xs(i), axis_y = ys(j).
struct ContourGrid {
    int axis_x = 0;
    int axis_y = 1;
    Eigen::VectorXd xs;
    Eigen::VectorXd ys;
    Eigen::MatrixXd values;
    MetricKind metric = MetricKind::Euclidean;
};

inline ContourGrid contour_grid(int dim, const std::map<int, double>& fixed,
                                std::pair<int, int> axes, std::pair<double, double> range,
                                int steps, MetricKind metric) {
    if (dim < 2) throw std::invalid_argument("contour_grid: dim must be >= 2, got " +
                                             std::to_string(dim));
    if (steps < 2) throw std::invalid_argument("contour_grid: steps must be >= 2, got " +
                                               std::to_string(steps));
    const auto [ax, ay] = axes;
    if (ax == ay) throw std::invalid_argument("contour_grid: axis indices must be distinct");
    for (int a : {ax, ay}) {
        if (a < 0 || a >= dim)
            throw std::invalid_argument("contour_grid: axis index " + std::to_string(a) +
                                        " out of range for dim " + std::to_string(dim));
        if (fixed.count(a))
            throw std::invalid_argument("contour_grid: axis index " + std::to_string(a) +
                                        " also appears in fixed coordinates");
    }
    for (int i = 0; i < dim; ++i) {
        if (i == ax || i == ay) continue;
        if (!fixed.count(i))
            throw std::invalid_argument("contour_grid: coordinate " + std::to_string(i) +
                                        " is neither an axis nor fixed");
    }
    if (static_cast<int>(fixed.size()) != dim - 2)
        throw std::invalid_argument("contour_grid: expected " + std::to_string(dim - 2) +
                                    " fixed coordinates, got " + std::to_string(fixed.size()));

    ContourGrid grid;
    grid.axis_x = ax;
    grid.axis_y = ay;
    grid.metric = metric;
    grid.xs = Eigen::VectorXd::LinSpaced(steps, range.first, range.second);
    grid.ys = grid.xs;
    grid.values.resize(steps, steps);

    Eigen::VectorXd point = Eigen::VectorXd::Zero(dim);
    for (const auto& [idx, value] : fixed) point(idx) = value;
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < steps; ++i) {
        point(ax) = grid.xs(i);
        for (int j = 0; j < steps; ++j) {
            point(ay) = grid.ys(j);
            grid.values(i, j) = distance(point, origin, metric);
        }
    }
    return grid;
}

}  // namespace viewmetric
