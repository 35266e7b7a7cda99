#include "viewmetric/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace viewmetric {

namespace {

std::int64_t pairs_of(std::int64_t x) { return x * (x - 1) / 2; }

/// Sort-before-sum: the indices must be *exactly* invariant under label
/// permutations, which reorder the cells of the contingency table. The term
/// multiset is unchanged by such permutations, so summing in sorted order
/// gives a bitwise-reproducible total.
double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double v : terms) total += v;
    return total;
}

/// True when every row and every column holds exactly one nonzero entry,
/// i.e. the two labelings are identical up to relabeling.
bool is_permutation_table(const ContingencyTable& t) {
    if (t.rows() != t.cols()) return false;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        int nz = 0;
        for (Eigen::Index j = 0; j < t.cols(); ++j) nz += t.counts(i, j) != 0;
        if (nz != 1) return false;
    }
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        int nz = 0;
        for (Eigen::Index i = 0; i < t.rows(); ++i) nz += t.counts(i, j) != 0;
        if (nz != 1) return false;
    }
    return true;
}

double marginal_entropy(const std::vector<std::int64_t>& sums, std::int64_t n) {
    std::vector<double> terms;
    terms.reserve(sums.size());
    for (std::int64_t s : sums) {
        if (s == 0) continue;
        const double p = static_cast<double>(s) / static_cast<double>(n);
        terms.push_back(-p * std::log(p));
    }
    return sorted_sum(terms);
}

void require_nonempty(const ContingencyTable& t, const char* what) {
    if (t.n < 1) throw std::invalid_argument(std::string(what) + ": empty contingency table");
}

void require_pairs(const ContingencyTable& t, const char* what) {
    require_nonempty(t, what);
    if (t.n < 2) throw std::invalid_argument(std::string(what) + ": need n >= 2");
}

}  // namespace

ContingencyTable contingency(const Labeling& truth, const Labeling& pred) {
    if (truth.size() != pred.size())
        throw std::invalid_argument("contingency: length mismatch: " +
                                    std::to_string(truth.size()) + " vs " +
                                    std::to_string(pred.size()));
    if (truth.empty()) throw std::invalid_argument("contingency: empty labelings");

    std::map<int, Eigen::Index> row_of, col_of;
    for (int v : truth) row_of.emplace(v, 0);
    for (int v : pred) col_of.emplace(v, 0);
    Eigen::Index r = 0, c = 0;
    for (auto& [value, idx] : row_of) idx = r++;
    for (auto& [value, idx] : col_of) idx = c++;

    ContingencyTable t;
    t.counts.setZero(r, c);
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++t.counts(row_of.at(truth[i]), col_of.at(pred[i]));
    t.n = static_cast<std::int64_t>(truth.size());
    t.row_sums.resize(static_cast<std::size_t>(r));
    t.col_sums.resize(static_cast<std::size_t>(c));
    for (Eigen::Index i = 0; i < r; ++i)
        t.row_sums[static_cast<std::size_t>(i)] = t.counts.row(i).sum();
    for (Eigen::Index j = 0; j < c; ++j)
        t.col_sums[static_cast<std::size_t>(j)] = t.counts.col(j).sum();
    return t;
}

double adjusted_rand_index(const ContingencyTable& table) {
    require_pairs(table, "adjusted_rand_index");

    std::int64_t sum_cells = 0;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j) sum_cells += pairs_of(table.counts(i, j));
    std::int64_t sum_rows = 0, sum_cols = 0;
    for (std::int64_t s : table.row_sums) sum_rows += pairs_of(s);
    for (std::int64_t s : table.col_sums) sum_cols += pairs_of(s);

    // Clear the two fractions with the pair total: the index becomes a single
    // ratio of exact integers, so rational values (1, -1/2, ...) come out
    // exact. Magnitudes stay below pairs^2 ~ n^4/4, safe in 64 bits for the
    // n this library targets.
    const std::int64_t total_pairs = pairs_of(table.n);
    const std::int64_t numerator = 2 * (total_pairs * sum_cells - sum_rows * sum_cols);
    const std::int64_t denominator =
        total_pairs * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols;
    if (denominator == 0) return 1.0;  // both labelings constant and identical
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::pair<double, double> homogeneity_completeness(const ContingencyTable& table) {
    require_nonempty(table, "homogeneity_completeness");
    const double n = static_cast<double>(table.n);
    const double h_truth = marginal_entropy(table.row_sums, table.n);
    const double h_pred = marginal_entropy(table.col_sums, table.n);

    // Conditional entropies with the ratio inside a single log: pure
    // clusters/classes contribute exact zeros.
    std::vector<double> cond_truth, cond_pred;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            const std::int64_t nij = table.counts(i, j);
            if (nij == 0) continue;
            const double cell = static_cast<double>(nij);
            const double row = static_cast<double>(table.row_sums[static_cast<std::size_t>(i)]);
            const double col = static_cast<double>(table.col_sums[static_cast<std::size_t>(j)]);
            cond_truth.push_back(-(cell / n) * std::log(cell / col));
            cond_pred.push_back(-(cell / n) * std::log(cell / row));
        }
    const double h_truth_given_pred = sorted_sum(cond_truth);
    const double h_pred_given_truth = sorted_sum(cond_pred);

    const double homogeneity = h_truth == 0.0 ? 1.0 : 1.0 - h_truth_given_pred / h_truth;
    const double completeness = h_pred == 0.0 ? 1.0 : 1.0 - h_pred_given_truth / h_pred;
    return {std::clamp(homogeneity, 0.0, 1.0), std::clamp(completeness, 0.0, 1.0)};
}

double v_measure(const ContingencyTable& table) {
    const auto [h, c] = homogeneity_completeness(table);
    if (h + c == 0.0) return 0.0;
    return 2.0 * h * c / (h + c);
}

double adjusted_mutual_info(const ContingencyTable& table) {
    require_pairs(table, "adjusted_mutual_info");
    if (is_permutation_table(table) && table.rows() >= 2) return 1.0;

    const std::int64_t n = table.n;
    const double nd = static_cast<double>(n);
    std::vector<double> mi_terms;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            const std::int64_t nij = table.counts(i, j);
            if (nij == 0) continue;
            const double joint = static_cast<double>(nij * n) /
                                 static_cast<double>(table.row_sums[static_cast<std::size_t>(i)] *
                                                     table.col_sums[static_cast<std::size_t>(j)]);
            mi_terms.push_back(static_cast<double>(nij) / nd * std::log(joint));
        }
    const double mi = sorted_sum(mi_terms);

    // Exact expected MI under the fixed-marginals permutation model:
    // hypergeometric sum over admissible cell values, log-factorials via
    // lgamma to stay in range for large n.
    std::vector<double> lf(static_cast<std::size_t>(n) + 1);
    for (std::size_t k = 0; k < lf.size(); ++k) lf[k] = std::lgamma(static_cast<double>(k) + 1.0);
    std::vector<double> emi_terms;
    for (std::int64_t a : table.row_sums)
        for (std::int64_t b : table.col_sums) {
            const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
            const std::int64_t hi = std::min(a, b);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double log_prob =
                    lf[static_cast<std::size_t>(a)] + lf[static_cast<std::size_t>(b)] +
                    lf[static_cast<std::size_t>(n - a)] + lf[static_cast<std::size_t>(n - b)] -
                    lf[static_cast<std::size_t>(n)] - lf[static_cast<std::size_t>(nij)] -
                    lf[static_cast<std::size_t>(a - nij)] - lf[static_cast<std::size_t>(b - nij)] -
                    lf[static_cast<std::size_t>(n - a - b + nij)];
                emi_terms.push_back(static_cast<double>(nij) / nd *
                                    std::log(static_cast<double>(nij * n) /
                                             static_cast<double>(a * b)) *
                                    std::exp(log_prob));
            }
        }
    const double emi = sorted_sum(emi_terms);

    const double h_truth = marginal_entropy(table.row_sums, n);
    const double h_pred = marginal_entropy(table.col_sums, n);
    const double denom = 0.5 * (h_truth + h_pred) - emi;
    if (denom == 0.0) return 0.0;
    return (mi - emi) / denom;
}

double fowlkes_mallows(const ContingencyTable& table) {
    require_pairs(table, "fowlkes_mallows");

    std::int64_t tp = 0;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j) tp += pairs_of(table.counts(i, j));
    if (tp == 0) return 0.0;  // also covers the zero pair-denominator cases
    std::int64_t pairs_truth = 0, pairs_pred = 0;
    for (std::int64_t s : table.row_sums) pairs_truth += pairs_of(s);
    for (std::int64_t s : table.col_sums) pairs_pred += pairs_of(s);
    return static_cast<double>(tp) /
           std::sqrt(static_cast<double>(pairs_truth) * static_cast<double>(pairs_pred));
}

namespace detail {

std::int64_t assignment_hungarian(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& values) {
    const Eigen::Index s = values.rows();
    if (s == 0) return 0;
    const std::int64_t top = values.maxCoeff();

    // Minimize cost = top - value with the potential / shortest augmenting
    // path scheme; 1-based indices, column 0 is the virtual start.
    const auto cost = [&](Eigen::Index i, Eigen::Index j) {
        return static_cast<double>(top - values(i - 1, j - 1));
    };
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t m = static_cast<std::size_t>(s) + 1;
    std::vector<double> pot_row(m, 0.0), pot_col(m, 0.0);
    std::vector<Eigen::Index> matched(m, 0), pred(m, 0);

    for (Eigen::Index i = 1; i <= s; ++i) {
        matched[0] = i;
        Eigen::Index j0 = 0;
        std::vector<double> min_slack(m, inf);
        std::vector<bool> used(m, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const Eigen::Index i0 = matched[static_cast<std::size_t>(j0)];
            double delta = inf;
            Eigen::Index j1 = 0;
            for (Eigen::Index j = 1; j <= s; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0, j) - pot_row[static_cast<std::size_t>(i0)] -
                                   pot_col[static_cast<std::size_t>(j)];
                if (cur < min_slack[static_cast<std::size_t>(j)]) {
                    min_slack[static_cast<std::size_t>(j)] = cur;
                    pred[static_cast<std::size_t>(j)] = j0;
                }
                if (min_slack[static_cast<std::size_t>(j)] < delta) {
                    delta = min_slack[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (Eigen::Index j = 0; j <= s; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    pot_row[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)])] += delta;
                    pot_col[static_cast<std::size_t>(j)] -= delta;
                } else {
                    min_slack[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched[static_cast<std::size_t>(j0)] != 0);
        do {
            const Eigen::Index j1 = pred[static_cast<std::size_t>(j0)];
            matched[static_cast<std::size_t>(j0)] = matched[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::int64_t best = 0;
    for (Eigen::Index j = 1; j <= s; ++j)
        best += values(matched[static_cast<std::size_t>(j)] - 1, j - 1);
    return best;
}

std::int64_t assignment_exhaustive(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& values) {
    const Eigen::Index s = values.rows();
    if (s == 0) return 0;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(s));
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    do {
        std::int64_t total = 0;
        for (Eigen::Index j = 0; j < s; ++j) total += values(perm[static_cast<std::size_t>(j)], j);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace detail

double best_map_accuracy(const Labeling& truth, const Labeling& pred) {
    const ContingencyTable t = contingency(truth, pred);
    if (t.rows() > 64 || t.cols() > 64)
        throw std::invalid_argument("best_map_accuracy: more than 64 distinct labels (" +
                                    std::to_string(t.rows()) + " classes, " +
                                    std::to_string(t.cols()) + " clusters)");
    const Eigen::Index s = std::max(t.rows(), t.cols());
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> padded;
    padded.setZero(s, s);
    padded.topLeftCorner(t.rows(), t.cols()) = t.counts;
    const std::int64_t best =
        s <= 8 ? detail::assignment_exhaustive(padded) : detail::assignment_hungarian(padded);
    return static_cast<double>(best) / static_cast<double>(t.n);
}

double manifold_alignment(const Eigen::Ref<const Eigen::VectorXd>& t, const Labeling& labels) {
    if (static_cast<std::size_t>(t.size()) != labels.size())
        throw std::invalid_argument("manifold_alignment: length mismatch: " +
                                    std::to_string(t.size()) + " vs " +
                                    std::to_string(labels.size()));
    if (labels.empty()) throw std::invalid_argument("manifold_alignment: empty input");

    int k = 0;
    for (int l : labels) {
        if (l < 0) throw std::invalid_argument("manifold_alignment: negative label");
        k = std::max(k, l + 1);
    }
    std::vector<std::int64_t> count(static_cast<std::size_t>(k), 0);
    std::vector<double> mean(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ++count[static_cast<std::size_t>(labels[i])];
        mean[static_cast<std::size_t>(labels[i])] += t(static_cast<Eigen::Index>(i));
    }
    for (int j = 0; j < k; ++j) {
        if (count[static_cast<std::size_t>(j)] == 0)
            throw std::invalid_argument("manifold_alignment: cluster " + std::to_string(j) +
                                        " is empty");
        mean[static_cast<std::size_t>(j)] /=
            static_cast<double>(count[static_cast<std::size_t>(j)]);
    }
    // Population variance (divisor n), per the documented convention.
    std::vector<double> variance(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d =
            t(static_cast<Eigen::Index>(i)) - mean[static_cast<std::size_t>(labels[i])];
        variance[static_cast<std::size_t>(labels[i])] += d * d;
    }
    double total = 0.0;
    for (int j = 0; j < k; ++j)
        total += variance[static_cast<std::size_t>(j)] /
                 static_cast<double>(count[static_cast<std::size_t>(j)]);
    return total / static_cast<double>(k);
}

}  // namespace viewmetric
