#pragma once

#include "viewmetric/metric.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace viewmetric {

enum class KMeansInit { KMeansPP, RandomPoints, Provided };

struct KMeansConfig {
    int k = 1;
    MetricKind metric = MetricKind::Euclidean;
    KMeansInit init = KMeansInit::KMeansPP;
    /// Initial centroids (k × m), used only when init == Provided; a
    /// Provided fit is deterministic, so restarts collapse to one run.
    Eigen::MatrixXd provided_centroids;
    std::uint64_t seed = 0;
    int max_iter = 300;
    /// Centroid-shift stop threshold, measured in the chosen metric.
    double tol = 1e-6;
    int restarts = 10;
};

struct KMeansModel {
    Eigen::MatrixXd centroids;  // k × m
    std::vector<int> labels;    // per-point cluster index in [0, k)
    /// Sum over points of squared chosen-metric distance to the assigned
    /// centroid; restart winner has the lowest inertia.
    double inertia = 0.0;
    int iterations = 0;
    bool converged = false;
    KMeansConfig config;
};

/// Per-iteration diagnostic passed to the optional kmeans_fit observer.
/// Under the Euclidean metric inertia is non-increasing across iterations;
/// under the view metric that is watched, not guaranteed (the update step
/// stays the arithmetic mean).
struct KMeansIteration {
    int restart = 0;
    int iteration = 0;
    double shift = 0.0;
    double inertia = 0.0;
};
using KMeansObserver = std::function<void(const KMeansIteration&)>;

/// K-Means++ seeding: the first centroid is uniform over the points; each
/// subsequent one is drawn with probability proportional to the squared
/// chosen-metric distance to the nearest centroid picked so far.
/// Deterministic given the seed.
Eigen::MatrixXd kmeanspp_init(const Eigen::Ref<const Eigen::MatrixXd>& points, int k,
                              MetricKind metric, std::uint64_t seed);

/// Lloyd iterations under config.metric: assign to the nearest centroid
/// (ties to the lowest index), repair empty clusters by seizing the point
/// farthest from its current centroid, recompute centroids as arithmetic
/// means, stop when every centroid moves less than tol or at max_iter.
/// Runs config.restarts times with seeds seed, seed+1, … and returns the
/// lowest-inertia model.
KMeansModel kmeans_fit(const Eigen::Ref<const Eigen::MatrixXd>& points,
                       const KMeansConfig& config, const KMeansObserver& observer = {});

/// Nearest-centroid assignment under the model's metric, ties to the
/// lowest centroid index.
std::vector<int> kmeans_predict(const KMeansModel& model,
                                const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace viewmetric
