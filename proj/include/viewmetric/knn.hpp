#pragma once

#include "viewmetric/dataset.hpp"
#include "viewmetric/metric.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace viewmetric {

enum class KnnProtocolKind { LeaveOneOut, KFold, HoldOut };

struct KnnProtocol {
    KnnProtocolKind kind = KnnProtocolKind::LeaveOneOut;
    int folds = 5;           // KFold only
    double fraction = 0.2;   // HoldOut only: test share in (0,1)
    std::uint64_t seed = 0;  // split seed for KFold / HoldOut

    static KnnProtocol leave_one_out() { return {}; }
    static KnnProtocol k_fold(int folds, std::uint64_t seed) {
        return {KnnProtocolKind::KFold, folds, 0.2, seed};
    }
    static KnnProtocol hold_out(double fraction, std::uint64_t seed) {
        return {KnnProtocolKind::HoldOut, 5, fraction, seed};
    }
};

struct KnnConfig {
    int k = 5;
    MetricKind metric = MetricKind::Euclidean;
    KnnProtocol protocol;
};

struct KnnFoldResult {
    int fold = 0;
    Eigen::Index test_size = 0;
    Eigen::Index correct = 0;
    double accuracy = 0.0;
};

struct KnnEvaluation {
    double accuracy = 0.0;  // correct / total over the whole protocol
    Eigen::Index correct = 0;
    Eigen::Index total = 0;
    std::vector<KnnFoldResult> folds;
};

/// Majority label among the k nearest training points under config.metric.
/// Distance ties are broken by lower training index, vote ties by lowest
/// label value.
int knn_classify(const Eigen::Ref<const Eigen::MatrixXd>& train_points,
                 const std::vector<int>& train_labels,
                 const Eigen::Ref<const Eigen::RowVectorXd>& query, const KnnConfig& config);

/// Accuracy under the configured protocol. LeaveOneOut reuses one pairwise
/// distance matrix and is split-free; KFold/HoldOut shuffle with a seeded
/// portable generator, so results are identical across platforms.
KnnEvaluation knn_evaluate(const Dataset& dataset, const KnnConfig& config);

}  // namespace viewmetric
