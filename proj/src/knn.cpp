#include "viewmetric/knn.hpp"

#include "viewmetric/parallel.hpp"
#include "viewmetric/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace viewmetric {

namespace {

/// Majority vote over (distance, train index, label) candidates already
/// restricted to the k nearest: highest count wins, ties to lowest label.
int vote(const std::vector<int>& labels) {
    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    int best_label = labels.front();
    int best_count = 0;
    for (const auto& [label, count] : counts) {  // ascending labels
        if (count > best_count) {
            best_count = count;
            best_label = label;
        }
    }
    return best_label;
}

/// Indices of the k nearest candidates by (distance, index), optionally
/// excluding one index (the query itself in leave-one-out).
std::vector<Eigen::Index> nearest(const Eigen::VectorXd& dist, int k, Eigen::Index exclude) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dist.size()));
    std::iota(order.begin(), order.end(), 0);
    if (exclude >= 0) order.erase(order.begin() + exclude);
    const auto kth = order.begin() + std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(order.size()));
    std::partial_sort(order.begin(), kth, order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (dist(a) != dist(b)) return dist(a) < dist(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(kth - order.begin()));
    return order;
}

void check_common(Eigen::Index n_train, Eigen::Index dim, const KnnConfig& config) {
    if (config.k < 1) throw std::invalid_argument("knn: k must be >= 1");
    if (n_train < 1) throw std::invalid_argument("knn: empty training set");
    if (config.k > n_train)
        throw std::invalid_argument("knn: k=" + std::to_string(config.k) + " exceeds n_train=" +
                                    std::to_string(n_train));
    if (config.metric == MetricKind::View && dim < 2)
        throw std::invalid_argument("knn: view metric needs dimension >= 2, got " +
                                    std::to_string(dim));
}

int classify_from_dist(const Eigen::VectorXd& dist, const std::vector<int>& train_labels, int k,
                       Eigen::Index exclude) {
    const std::vector<Eigen::Index> near = nearest(dist, k, exclude);
    std::vector<int> votes;
    votes.reserve(near.size());
    for (Eigen::Index j : near) votes.push_back(train_labels[static_cast<std::size_t>(j)]);
    return vote(votes);
}

KnnEvaluation evaluate_split(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                             const KnnConfig& config,
                             const std::vector<std::vector<Eigen::Index>>& test_folds) {
    const Eigen::Index n = points.rows();
    KnnEvaluation result;
    std::vector<char> in_test(static_cast<std::size_t>(n), 0);

    for (std::size_t f = 0; f < test_folds.size(); ++f) {
        const auto& test = test_folds[f];
        std::fill(in_test.begin(), in_test.end(), 0);
        for (Eigen::Index i : test) in_test[static_cast<std::size_t>(i)] = 1;

        std::vector<Eigen::Index> train;
        train.reserve(static_cast<std::size_t>(n) - test.size());
        for (Eigen::Index i = 0; i < n; ++i)
            if (!in_test[static_cast<std::size_t>(i)]) train.push_back(i);
        if (static_cast<Eigen::Index>(train.size()) < config.k)
            throw std::invalid_argument("knn_evaluate: fold " + std::to_string(f) + " leaves " +
                                        std::to_string(train.size()) +
                                        " training points, fewer than k=" +
                                        std::to_string(config.k));

        Eigen::MatrixXd train_points(static_cast<Eigen::Index>(train.size()), points.cols());
        std::vector<int> train_labels(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            train_points.row(static_cast<Eigen::Index>(i)) = points.row(train[i]);
            train_labels[i] = labels[static_cast<std::size_t>(train[i])];
        }

        std::vector<int> predicted(test.size());
        parallel_for(static_cast<Eigen::Index>(test.size()), [&](Eigen::Index begin, Eigen::Index end) {
            for (Eigen::Index q = begin; q < end; ++q) {
                const Eigen::Index point = test[static_cast<std::size_t>(q)];
                Eigen::VectorXd dist(train_points.rows());
                for (Eigen::Index j = 0; j < train_points.rows(); ++j)
                    dist(j) = distance(points.row(point), train_points.row(j), config.metric);
                predicted[static_cast<std::size_t>(q)] =
                    classify_from_dist(dist, train_labels, config.k, -1);
            }
        });

        KnnFoldResult fold;
        fold.fold = static_cast<int>(f);
        fold.test_size = static_cast<Eigen::Index>(test.size());
        for (std::size_t q = 0; q < test.size(); ++q)
            fold.correct += predicted[q] == labels[static_cast<std::size_t>(test[q])];
        fold.accuracy = static_cast<double>(fold.correct) / static_cast<double>(fold.test_size);
        result.correct += fold.correct;
        result.total += fold.test_size;
        result.folds.push_back(fold);
    }
    result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.total);
    return result;
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        const auto offset = rng.next_index(static_cast<std::size_t>(n - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i) + offset]);
    }
    return idx;
}

}  // namespace

int knn_classify(const Eigen::Ref<const Eigen::MatrixXd>& train_points,
                 const std::vector<int>& train_labels,
                 const Eigen::Ref<const Eigen::RowVectorXd>& query, const KnnConfig& config) {
    check_common(train_points.rows(), train_points.cols(), config);
    if (static_cast<Eigen::Index>(train_labels.size()) != train_points.rows())
        throw std::invalid_argument("knn_classify: labels length " +
                                    std::to_string(train_labels.size()) + " != n_train " +
                                    std::to_string(train_points.rows()));
    if (query.size() != train_points.cols())
        throw std::invalid_argument("knn_classify: dimension mismatch: train has " +
                                    std::to_string(train_points.cols()) + ", query has " +
                                    std::to_string(query.size()));

    Eigen::VectorXd dist(train_points.rows());
    for (Eigen::Index j = 0; j < train_points.rows(); ++j)
        dist(j) = distance(query, train_points.row(j), config.metric);
    return classify_from_dist(dist, train_labels, config.k, -1);
}

KnnEvaluation knn_evaluate(const Dataset& dataset, const KnnConfig& config) {
    if (!dataset.labels) throw std::invalid_argument("knn_evaluate: dataset has no labels");
    const Eigen::Index n = dataset.n();
    const std::vector<int>& labels = *dataset.labels;

    switch (config.protocol.kind) {
        case KnnProtocolKind::LeaveOneOut: {
            check_common(n - 1, dataset.dim(), config);
            const DistanceMatrix dm = pairwise_distances(dataset.points, config.metric);

            std::vector<int> predicted(static_cast<std::size_t>(n));
            parallel_for(n, [&](Eigen::Index begin, Eigen::Index end) {
                for (Eigen::Index i = begin; i < end; ++i)
                    predicted[static_cast<std::size_t>(i)] =
                        classify_from_dist(dm.entries.col(i), labels, config.k, i);
            });

            KnnEvaluation result;
            KnnFoldResult fold;
            fold.fold = 0;
            fold.test_size = n;
            for (Eigen::Index i = 0; i < n; ++i)
                fold.correct += predicted[static_cast<std::size_t>(i)] ==
                                labels[static_cast<std::size_t>(i)];
            fold.accuracy = static_cast<double>(fold.correct) / static_cast<double>(n);
            result.correct = fold.correct;
            result.total = n;
            result.accuracy = fold.accuracy;
            result.folds.push_back(fold);
            return result;
        }
        case KnnProtocolKind::KFold: {
            const int folds = config.protocol.folds;
            if (folds < 2) throw std::invalid_argument("knn_evaluate: need at least 2 folds");
            if (static_cast<Eigen::Index>(folds) > n)
                throw std::invalid_argument("knn_evaluate: more folds than points");
            const Eigen::Index max_fold = (n + folds - 1) / folds;
            check_common(n - max_fold, dataset.dim(), config);

            const std::vector<Eigen::Index> order = shuffled_indices(n, config.protocol.seed);
            std::vector<std::vector<Eigen::Index>> test_folds(static_cast<std::size_t>(folds));
            for (Eigen::Index p = 0; p < n; ++p)
                test_folds[static_cast<std::size_t>(p % folds)].push_back(
                    order[static_cast<std::size_t>(p)]);
            return evaluate_split(dataset.points, labels, config, test_folds);
        }
        case KnnProtocolKind::HoldOut: {
            const double fraction = config.protocol.fraction;
            if (!(fraction > 0.0 && fraction < 1.0))
                throw std::invalid_argument("knn_evaluate: hold-out fraction must be in (0,1)");
            const auto test_size = std::max<Eigen::Index>(
                1, static_cast<Eigen::Index>(fraction * static_cast<double>(n)));
            if (test_size >= n)
                throw std::invalid_argument("knn_evaluate: hold-out leaves no training points");
            check_common(n - test_size, dataset.dim(), config);

            const std::vector<Eigen::Index> order = shuffled_indices(n, config.protocol.seed);
            std::vector<std::vector<Eigen::Index>> test_folds(1);
            test_folds[0].assign(order.begin(), order.begin() + test_size);
            return evaluate_split(dataset.points, labels, config, test_folds);
        }
    }
    throw std::logic_error("knn_evaluate: unknown protocol");
}

}  // namespace viewmetric
