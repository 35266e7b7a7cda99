#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "viewmetric/knn.hpp"
#include "viewmetric/rng.hpp"

#include <Eigen/Dense>

#include <numeric>
#include <vector>

using namespace viewmetric;

namespace {

Dataset blob_dataset(std::uint64_t seed, Eigen::Index per = 20) {
    SplitMix64 rng(seed);
    Dataset d;
    d.name = "blobs";
    d.points.resize(3 * per, 2);
    d.labels = std::vector<int>();
    const double centers[3][2] = {{0.0, 0.0}, {8.0, 8.0}, {-8.0, 9.0}};
    for (int c = 0; c < 3; ++c)
        for (Eigen::Index i = 0; i < per; ++i) {
            const Eigen::Index row = c * per + i;
            d.points(row, 0) = centers[c][0] + 0.4 * rng.next_gaussian();
            d.points(row, 1) = centers[c][1] + 0.4 * rng.next_gaussian();
            d.labels->push_back(c);
        }
    return d;
}

}  // namespace

TEST_CASE("classification of single queries") {
    const Dataset d = blob_dataset(61);
    KnnConfig config;
    config.k = 5;
    for (MetricKind metric : {MetricKind::Euclidean, MetricKind::View}) {
        config.metric = metric;
        CHECK(knn_classify(d.points, *d.labels, Eigen::RowVector2d(0.3, -0.2), config) == 0);
        CHECK(knn_classify(d.points, *d.labels, Eigen::RowVector2d(7.7, 8.4), config) == 1);
        CHECK(knn_classify(d.points, *d.labels, Eigen::RowVector2d(-8.1, 9.2), config) == 2);
    }
}

TEST_CASE("vote ties go to the lowest label") {
    Eigen::MatrixXd train(2, 2);
    train << 0.0, 0.0, 2.0, 0.0;
    const std::vector<int> labels = {1, 0};
    KnnConfig config;
    config.k = 2;
    // Equidistant from both neighbors: one vote each, label 0 wins.
    CHECK(knn_classify(train, labels, Eigen::RowVector2d(1.0, 0.0), config) == 0);
    config.k = 1;
    // Distance tie at k=1: the lower point index (label 1) is kept.
    CHECK(knn_classify(train, labels, Eigen::RowVector2d(1.0, 0.0), config) == 1);
}

TEST_CASE("leave-one-out on separable blobs is perfect") {
    const Dataset d = blob_dataset(62);
    KnnConfig config;
    config.k = 3;
    for (MetricKind metric : {MetricKind::Euclidean, MetricKind::View}) {
        config.metric = metric;
        const KnnEvaluation r = knn_evaluate(d, config);
        CHECK(r.accuracy == 1.0);
        CHECK(r.total == d.n());
        CHECK(r.correct == d.n());
        REQUIRE(r.folds.size() == 1);
        CHECK(r.folds[0].test_size == d.n());
    }
}

TEST_CASE("one-class dataset scores one under every protocol") {
    SplitMix64 rng(63);
    Dataset d;
    d.name = "mono";
    d.points.resize(12, 3);
    for (Eigen::Index i = 0; i < d.points.size(); ++i) d.points(i) = rng.next_gaussian();
    d.labels = std::vector<int>(12, 4);
    KnnConfig config;
    config.k = 3;
    config.protocol = KnnProtocol::leave_one_out();
    CHECK(knn_evaluate(d, config).accuracy == 1.0);
    config.protocol = KnnProtocol::k_fold(4, 5);
    CHECK(knn_evaluate(d, config).accuracy == 1.0);
    config.protocol = KnnProtocol::hold_out(0.25, 5);
    CHECK(knn_evaluate(d, config).accuracy == 1.0);
}

TEST_CASE("leave-one-out is invariant under row permutation") {
    const Dataset d = blob_dataset(64, 8);
    // Mix the blobs so labels interleave.
    SplitMix64 rng(65);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d.n()));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const std::size_t j = i + rng.next_index(order.size() - i);
        std::swap(order[i], order[j]);
    }
    Dataset shuffled = d;
    for (std::size_t i = 0; i < order.size(); ++i) {
        shuffled.points.row(static_cast<Eigen::Index>(i)) = d.points.row(order[i]);
        (*shuffled.labels)[i] = (*d.labels)[static_cast<std::size_t>(order[i])];
    }
    KnnConfig config;
    config.k = 5;
    config.metric = MetricKind::View;
    CHECK(knn_evaluate(d, config).accuracy == knn_evaluate(shuffled, config).accuracy);
}

TEST_CASE("at m=2 both metrics agree point for point") {
    SplitMix64 rng(66);
    Dataset d;
    d.name = "noisy";
    d.points.resize(40, 2);
    for (Eigen::Index i = 0; i < d.points.size(); ++i) d.points(i) = rng.next_gaussian();
    d.labels = std::vector<int>();
    for (int i = 0; i < 40; ++i) d.labels->push_back(static_cast<int>(rng.next_index(3)));
    KnnConfig euclid, view;
    euclid.k = view.k = 7;
    euclid.metric = MetricKind::Euclidean;
    view.metric = MetricKind::View;
    CHECK(knn_evaluate(d, euclid).accuracy == knn_evaluate(d, view).accuracy);
}

TEST_CASE("k-fold bookkeeping") {
    const Dataset d = blob_dataset(67, 7);  // n = 21
    KnnConfig config;
    config.k = 3;
    config.protocol = KnnProtocol::k_fold(4, 9);
    const KnnEvaluation r = knn_evaluate(d, config);
    REQUIRE(r.folds.size() == 4);
    Eigen::Index total = 0, correct = 0;
    for (const auto& f : r.folds) {
        CHECK(f.test_size >= 5);  // 21 points over 4 folds: sizes 5 or 6
        CHECK(f.test_size <= 6);
        CHECK(f.correct <= f.test_size);
        total += f.test_size;
        correct += f.correct;
    }
    CHECK(total == d.n());  // every point tested exactly once
    CHECK(r.total == d.n());
    CHECK(r.correct == correct);
    CHECK(r.accuracy == static_cast<double>(correct) / static_cast<double>(total));
    // Deterministic in the seed; a different seed may regroup the folds.
    const KnnEvaluation again = knn_evaluate(d, config);
    CHECK(again.accuracy == r.accuracy);
    CHECK(again.folds[0].correct == r.folds[0].correct);
}

TEST_CASE("hold-out bookkeeping") {
    const Dataset d = blob_dataset(68);
    KnnConfig config;
    config.k = 3;
    config.protocol = KnnProtocol::hold_out(0.25, 13);
    const KnnEvaluation r = knn_evaluate(d, config);
    REQUIRE(r.folds.size() == 1);
    CHECK(r.folds[0].test_size == 15);  // floor(0.25 * 60)
    CHECK(r.total == 15);
    CHECK(r.accuracy == 1.0);
    // Tiny fraction still tests at least one point.
    config.protocol = KnnProtocol::hold_out(0.001, 13);
    CHECK(knn_evaluate(d, config).total == 1);
}

TEST_CASE("input validation") {
    const Dataset d = blob_dataset(69, 4);  // n = 12
    KnnConfig config;
    config.k = 0;
    CHECK_THROWS_AS((void)knn_evaluate(d, config), std::invalid_argument);
    config.k = 12;  // LOO training sets have 11 points
    CHECK_THROWS_AS((void)knn_evaluate(d, config), std::invalid_argument);
    config.k = 11;
    CHECK_NOTHROW((void)knn_evaluate(d, config));
    config.k = 3;
    config.protocol = KnnProtocol::k_fold(1, 0);
    CHECK_THROWS_AS((void)knn_evaluate(d, config), std::invalid_argument);
    config.protocol = KnnProtocol::k_fold(13, 0);
    CHECK_THROWS_AS((void)knn_evaluate(d, config), std::invalid_argument);
    config.protocol = KnnProtocol::hold_out(0.0, 0);
    CHECK_THROWS_AS((void)knn_evaluate(d, config), std::invalid_argument);
    config.protocol = KnnProtocol::hold_out(1.0, 0);
    CHECK_THROWS_AS((void)knn_evaluate(d, config), std::invalid_argument);

    Dataset unlabeled = d;
    unlabeled.labels.reset();
    config.protocol = KnnProtocol::leave_one_out();
    CHECK_THROWS_AS((void)knn_evaluate(unlabeled, config), std::invalid_argument);

    Eigen::MatrixXd train(3, 2);
    train.setZero();
    CHECK_THROWS_AS((void)knn_classify(train, {0, 1}, Eigen::RowVector2d(0, 0), config),
                    std::invalid_argument);  // labels length mismatch
    CHECK_THROWS_AS(
        (void)knn_classify(train, {0, 1, 0}, Eigen::RowVector3d(0, 0, 0).eval(), config),
        std::invalid_argument);  // query dimension mismatch
}
