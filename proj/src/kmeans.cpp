#include "viewmetric/kmeans.hpp"

#include "viewmetric/parallel.hpp"
#include "viewmetric/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace viewmetric {

namespace {

void check_inputs(const Eigen::Ref<const Eigen::MatrixXd>& points, const KMeansConfig& config) {
    if (config.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (config.max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
    if (config.tol < 0.0) throw std::invalid_argument("kmeans: tol must be >= 0");
    if (config.restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
    if (points.rows() < config.k)
        throw std::invalid_argument("kmeans: k=" + std::to_string(config.k) + " exceeds n=" +
                                    std::to_string(points.rows()));
    if (config.metric == MetricKind::View && points.cols() < 2)
        throw std::invalid_argument("kmeans: view metric needs dimension >= 2, got " +
                                    std::to_string(points.cols()));
    if (config.init == KMeansInit::Provided) {
        if (config.provided_centroids.rows() != config.k ||
            config.provided_centroids.cols() != points.cols())
            throw std::invalid_argument(
                "kmeans: provided centroids must be k x m = " + std::to_string(config.k) + " x " +
                std::to_string(points.cols()) + ", got " +
                std::to_string(config.provided_centroids.rows()) + " x " +
                std::to_string(config.provided_centroids.cols()));
    }
}

Eigen::MatrixXd random_points_init(const Eigen::Ref<const Eigen::MatrixXd>& points, int k,
                                   std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    // Partial Fisher–Yates: the first k slots end up a uniform sample
    // without replacement.
    for (int i = 0; i < k; ++i) {
        const auto offset = rng.next_index(static_cast<std::size_t>(n - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i) + offset]);
    }
    Eigen::MatrixXd centroids(k, points.cols());
    for (int i = 0; i < k; ++i) centroids.row(i) = points.row(idx[static_cast<std::size_t>(i)]);
    return centroids;
}

/// Fills labels[i] with the nearest-centroid index (ties to the lowest
/// index) and dist(i, j) with the distance from point i to centroid j.
void assign_points(const Eigen::Ref<const Eigen::MatrixXd>& points,
                   const Eigen::MatrixXd& centroids, MetricKind metric, std::vector<int>& labels,
                   Eigen::MatrixXd& dist) {
    const Eigen::Index n = points.rows();
    const Eigen::Index k = centroids.rows();
    labels.resize(static_cast<std::size_t>(n));
    dist.resize(n, k);
    parallel_for(n, [&](Eigen::Index begin, Eigen::Index end) {
        for (Eigen::Index i = begin; i < end; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < k; ++j) {
                const double d = distance(points.row(i), centroids.row(j), metric);
                dist(i, j) = d;
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(j);
                }
            }
            labels[static_cast<std::size_t>(i)] = best;
        }
    });
}

double inertia_of(const std::vector<int>& labels, const Eigen::MatrixXd& dist) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
        const double d = dist(i, labels[static_cast<std::size_t>(i)]);
        total += d * d;
    }
    return total;
}

KMeansModel fit_once(const Eigen::Ref<const Eigen::MatrixXd>& points, const KMeansConfig& config,
                     std::uint64_t seed, int restart, const KMeansObserver& observer) {
    const Eigen::Index n = points.rows();
    const Eigen::Index m = points.cols();
    const int k = config.k;

    Eigen::MatrixXd centroids;
    switch (config.init) {
        case KMeansInit::KMeansPP:
            centroids = kmeanspp_init(points, k, config.metric, seed);
            break;
        case KMeansInit::RandomPoints:
            centroids = random_points_init(points, k, seed);
            break;
        case KMeansInit::Provided:
            centroids = config.provided_centroids;
            break;
    }

    std::vector<int> labels;
    Eigen::MatrixXd dist;
    assign_points(points, centroids, config.metric, labels, dist);

    KMeansModel model;
    model.converged = false;
    int iterations = 0;
    double inertia = inertia_of(labels, dist);

    std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k));
    Eigen::MatrixXd sums(k, m);
    for (int it = 0; it < config.max_iter; ++it) {
        std::fill(sizes.begin(), sizes.end(), 0);
        for (int l : labels) ++sizes[static_cast<std::size_t>(l)];

        // Empty-cluster repair: seize the point farthest from its current
        // centroid (lowest index on ties), skipping points that are the
        // last member of their cluster.
        for (int j = 0; j < k; ++j) {
            if (sizes[static_cast<std::size_t>(j)] > 0) continue;
            Eigen::Index victim = -1;
            double worst = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int owner = labels[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(owner)] < 2) continue;
                const double d = dist(i, owner);
                if (d > worst) {
                    worst = d;
                    victim = i;
                }
            }
            if (victim < 0)
                throw std::runtime_error("kmeans: cannot repair empty cluster " +
                                         std::to_string(j));
            centroids.row(j) = points.row(victim);
            --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(victim)])];
            labels[static_cast<std::size_t>(victim)] = j;
            ++sizes[static_cast<std::size_t>(j)];
        }

        // Arithmetic-mean update, accumulated in point order so the result
        // is independent of thread count.
        sums.setZero();
        for (Eigen::Index i = 0; i < n; ++i) sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
        double shift = 0.0;
        for (int j = 0; j < k; ++j) {
            const Eigen::RowVectorXd updated =
                sums.row(j) / static_cast<double>(sizes[static_cast<std::size_t>(j)]);
            shift = std::max(shift, distance(updated, centroids.row(j), config.metric));
            centroids.row(j) = updated;
        }

        assign_points(points, centroids, config.metric, labels, dist);
        inertia = inertia_of(labels, dist);
        iterations = it + 1;
        if (observer) observer({restart, it, shift, inertia});
        if (shift < config.tol) {
            model.converged = true;
            break;
        }
    }

    model.centroids = std::move(centroids);
    model.labels = std::move(labels);
    model.inertia = inertia;
    model.iterations = iterations;
    model.config = config;
    return model;
}

}  // namespace

Eigen::MatrixXd kmeanspp_init(const Eigen::Ref<const Eigen::MatrixXd>& points, int k,
                              MetricKind metric, std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    if (k < 1) throw std::invalid_argument("kmeanspp_init: k must be >= 1");
    if (n < k)
        throw std::invalid_argument("kmeanspp_init: k=" + std::to_string(k) + " exceeds n=" +
                                    std::to_string(n));
    if (metric == MetricKind::View && points.cols() < 2)
        throw std::invalid_argument("kmeanspp_init: view metric needs dimension >= 2");

    SplitMix64 rng(seed);
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) =
        points.row(static_cast<Eigen::Index>(rng.next_index(static_cast<std::size_t>(n))));

    Eigen::VectorXd weight(n);  // squared distance to the nearest chosen centroid
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = distance(points.row(i), centroids.row(0), metric);
        weight(i) = d * d;
    }
    for (int c = 1; c < k; ++c) {
        const double total = weight.sum();
        Eigen::Index chosen;
        if (total <= 0.0) {
            // all remaining mass sits on already-chosen points
            chosen = static_cast<Eigen::Index>(rng.next_index(static_cast<std::size_t>(n)));
        } else {
            const double target = rng.next_double() * total;
            double cumulative = 0.0;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                cumulative += weight(i);
                if (cumulative > target) {
                    chosen = i;
                    break;
                }
            }
        }
        centroids.row(c) = points.row(chosen);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = distance(points.row(i), centroids.row(c), metric);
            weight(i) = std::min(weight(i), d * d);
        }
    }
    return centroids;
}

KMeansModel kmeans_fit(const Eigen::Ref<const Eigen::MatrixXd>& points, const KMeansConfig& config,
                       const KMeansObserver& observer) {
    check_inputs(points, config);
    const int restarts = config.init == KMeansInit::Provided ? 1 : config.restarts;

    KMeansModel best;
    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        KMeansModel model =
            fit_once(points, config, config.seed + static_cast<std::uint64_t>(r), r, observer);
        if (!have_best || model.inertia < best.inertia) {
            best = std::move(model);
            have_best = true;
        }
    }
    return best;
}

std::vector<int> kmeans_predict(const KMeansModel& model,
                                const Eigen::Ref<const Eigen::MatrixXd>& points) {
    if (points.rows() == 0) return {};
    if (points.cols() != model.centroids.cols())
        throw std::invalid_argument("kmeans_predict: dimension mismatch: model has " +
                                    std::to_string(model.centroids.cols()) + ", points have " +
                                    std::to_string(points.cols()));
    std::vector<int> labels;
    Eigen::MatrixXd dist;
    assign_points(points, model.centroids, model.config.metric, labels, dist);
    return labels;
}

}  // namespace viewmetric
