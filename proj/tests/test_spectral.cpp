#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "viewmetric/metric.hpp"
#include "viewmetric/rng.hpp"
#include "viewmetric/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace viewmetric;

namespace {

Eigen::MatrixXd random_points(SplitMix64& rng, Eigen::Index n, Eigen::Index m) {
    Eigen::MatrixXd pts(n, m);
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = rng.next_gaussian();
    return pts;
}

}  // namespace

TEST_CASE("eigenvalues of the collinear 3-point distance matrix") {
    Eigen::Matrix3d M;
    M << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    const Eigen::VectorXd ev = symmetric_eigenvalues(M);
    REQUIRE(ev.size() == 3);
    // {1+sqrt(3), 1-sqrt(3), -2}, descending
    CHECK(ev(0) == doctest::Approx(2.73205080756887729352).epsilon(1e-10));
    CHECK(ev(1) == doctest::Approx(-0.73205080756887729352).epsilon(1e-10));
    CHECK(ev(2) == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("eigenvalue sums satisfy the trace and Frobenius identities") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_index(14));
        Eigen::MatrixXd A(n, n);
        for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = rng.next_gaussian();
        const Eigen::MatrixXd S = ((A + A.transpose()) / 2.0).eval();
        const Eigen::VectorXd ev = symmetric_eigenvalues(S);
        REQUIRE(ev.size() == n);
        for (Eigen::Index i = 0; i + 1 < n; ++i) CHECK(ev(i) >= ev(i + 1));  // descending
        const double scale = std::max(1.0, S.norm());
        CHECK(ev.sum() == doctest::Approx(S.trace()).epsilon(1e-10).scale(scale));
        CHECK(ev.squaredNorm() ==
              doctest::Approx(S.squaredNorm()).epsilon(1e-10).scale(scale * scale));
    }
}

TEST_CASE("asymmetric input is rejected") {
    Eigen::Matrix2d M;
    M << 0, 1, 2, 0;
    CHECK_THROWS_AS((void)symmetric_eigenvalues(M), std::invalid_argument);
    // Asymmetry below tol is symmetrized instead.
    Eigen::Matrix2d almost;
    almost << 0, 1, 1 + 1e-14, 0;
    const Eigen::VectorXd ev = symmetric_eigenvalues(almost, 1e-12);
    CHECK(ev(0) == doctest::Approx(1.0));
    CHECK(ev(1) == doctest::Approx(-1.0));
    Eigen::MatrixXd rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS((void)symmetric_eigenvalues(rect), std::invalid_argument);
}

TEST_CASE("distance-matrix validity on the collinear points") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 1, 0, 2, 0;  // the line 0, 1, 2
    const DistanceMatrix dm = pairwise_distances(pts, MetricKind::Euclidean);
    const DistanceMatrixValidity v = check_distance_matrix(dm);
    CHECK(v.nonnegative_symmetric);
    CHECK(v.zero_diagonal);
    CHECK(v.conditionally_one_sided);
    CHECK(v.observed_side == DistanceMatrixValidity::Side::NegativeSemidefinite);
    CHECK(v.pass());
    REQUIRE(v.projected_eigenvalues.size() == 3);
    // B = (I - e s^T) M (I - s e^T) for M = [[0,1,2],[1,0,1],[2,1,0]]
    CHECK(v.projected_eigenvalues(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(v.projected_eigenvalues(1) ==
          doctest::Approx(-0.76393202250021030359).epsilon(1e-9));
    CHECK(v.projected_eigenvalues(2) ==
          doctest::Approx(-5.23606797749978969641).epsilon(1e-9));
}

TEST_CASE("validity checks reject broken matrices") {
    DistanceMatrix bad;
    bad.metric = MetricKind::Euclidean;
    bad.entries.resize(2, 2);
    bad.entries << 0, -1, -1, 0;
    CHECK(!check_distance_matrix(bad).nonnegative_symmetric);
    bad.entries << 0.5, 1, 1, 0;
    CHECK(!check_distance_matrix(bad).zero_diagonal);
}

TEST_CASE("spectral radius is the largest eigenvalue of a distance matrix") {
    SplitMix64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.next_index(18));
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_index(5));
        const Eigen::MatrixXd pts = random_points(rng, n, m);
        for (MetricKind metric : {MetricKind::Euclidean, MetricKind::View}) {
            const DistanceMatrix dm = pairwise_distances(pts, metric);
            const Eigen::VectorXd ev = symmetric_eigenvalues(dm.entries);
            const double rho = spectral_radius(dm);
            CHECK(rho == doctest::Approx(ev(0)).epsilon(1e-9));
            CHECK(rho >= std::abs(ev(ev.size() - 1)) - 1e-9 * std::max(1.0, rho));
        }
    }
}

TEST_CASE("spectral report: one positive eigenvalue, zero trace, view radius dominates") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.next_index(18));
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_index(5));
        const Eigen::MatrixXd pts = random_points(rng, n, m);
        const SpectralReport report = spectral_report(pts);
        CHECK(report.positive_count_view == 1);
        CHECK(report.positive_count_euclid == 1);
        const double scale_v = std::max(1.0, report.eigenvalues_view.norm());
        const double scale_e = std::max(1.0, report.eigenvalues_euclid.norm());
        CHECK(std::abs(report.trace_view) <= 1e-9 * scale_v);
        CHECK(std::abs(report.trace_euclid) <= 1e-9 * scale_e);
        CHECK(std::abs(report.eigenvalues_view.sum()) <= 1e-8 * scale_v);
        CHECK(std::abs(report.eigenvalues_euclid.sum()) <= 1e-8 * scale_e);
        CHECK(report.rho_view == doctest::Approx(report.eigenvalues_view(0)).epsilon(1e-9));
        CHECK(report.rho_euclid == doctest::Approx(report.eigenvalues_euclid(0)).epsilon(1e-9));
        CHECK(report.rho_view >= report.rho_euclid - 1e-9 * std::max(1.0, report.rho_euclid));
        CHECK(report.conditional_nsd_pass_view);
        CHECK(report.conditional_nsd_pass_euclid);
    }
}

TEST_CASE("spectral report input validation") {
    CHECK_THROWS_AS((void)spectral_report(Eigen::MatrixXd::Zero(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS((void)spectral_report(Eigen::MatrixXd::Zero(5, 1)), std::invalid_argument);
}
