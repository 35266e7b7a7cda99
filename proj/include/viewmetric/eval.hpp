#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace viewmetric {

using Labeling = std::vector<int>;

/// Cluster-vs-class count table: rows follow distinct truth labels in
/// ascending value order, columns distinct predicted labels likewise.
/// Every agreement index below is computed from this table alone.
struct ContingencyTable {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;  // r x c
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t n = 0;

    Eigen::Index rows() const { return counts.rows(); }
    Eigen::Index cols() const { return counts.cols(); }
};

ContingencyTable contingency(const Labeling& truth, const Labeling& pred);

/// Pair-counting index (Index - Expected) / (Max - Expected); 1 iff the
/// labelings agree up to relabeling, 0 in expectation for independent
/// labelings. Degenerate denominator (both labelings trivially identical)
/// returns 1.
double adjusted_rand_index(const ContingencyTable& table);

/// (homogeneity, completeness), natural-log entropies. homogeneity is 1
/// when H(C) = 0, completeness 1 when H(K) = 0.
std::pair<double, double> homogeneity_completeness(const ContingencyTable& table);

/// Harmonic mean of homogeneity and completeness; 0 when either is 0.
double v_measure(const ContingencyTable& table);

/// (MI - E[MI]) / (mean(H(C), H(K)) - E[MI]) with the exact hypergeometric
/// expectation and arithmetic-mean normalization. Identical non-constant
/// labelings give exactly 1; a zero denominator gives 0.
double adjusted_mutual_info(const ContingencyTable& table);

/// TP / sqrt((TP+FP)(TP+FN)) over point pairs; 0 when no pair is
/// co-clustered in both labelings.
double fowlkes_mallows(const ContingencyTable& table);

/// Fraction correctly labeled under the best injective cluster-to-class
/// assignment. Exhaustive search up to 8 labels, Hungarian assignment
/// above; both sides of the table must have at most 64 distinct labels.
double best_map_accuracy(const Labeling& truth, const Labeling& pred);

/// Unweighted mean over clusters of the population variance (divisor n)
/// of the manifold parameter t within the cluster. Labels must cover
/// 0..max(label); an empty cluster is an error.
double manifold_alignment(const Eigen::Ref<const Eigen::VectorXd>& t, const Labeling& labels);

namespace detail {

/// Max-sum assignment over the columns of a square value matrix; returns
/// the best total. O(s^3) shortest-augmenting-path form.
std::int64_t assignment_hungarian(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& values);

/// Same contract by exhaustive permutation search; s! permutations, meant
/// for s <= 8 and as an independent cross-check of the Hungarian path.
std::int64_t assignment_exhaustive(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& values);

}  // namespace detail

}  // namespace viewmetric
