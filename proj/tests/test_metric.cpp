#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "viewmetric/metric.hpp"
#include "viewmetric/parallel.hpp"
#include "viewmetric/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>

using namespace viewmetric;

namespace {

Eigen::VectorXd random_vector(SplitMix64& rng, Eigen::Index m, double scale = 5.0) {
    Eigen::VectorXd x(m);
    for (Eigen::Index i = 0; i < m; ++i) x(i) = scale * (2.0 * rng.next_double() - 1.0);
    return x;
}

// Independent re-derivation of the view distance: explicit pair loop with
// long double accumulation in reverse pair order.
long double view_distance_reference(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    long double total = 0.0L;
    for (Eigen::Index i = x.size() - 1; i >= 0; --i)
        for (Eigen::Index j = i - 1; j >= 0; --j) {
            const long double a = static_cast<long double>(x(j)) - static_cast<long double>(y(j));
            const long double b = static_cast<long double>(x(i)) - static_cast<long double>(y(i));
            total += std::sqrt(a * a + b * b);
        }
    return total;
}

}  // namespace

TEST_CASE("hand-computed distances") {
    Eigen::Vector3d x(1.0, 2.0, 3.0), origin(0.0, 0.0, 0.0);
    // sqrt(5) + sqrt(10) + sqrt(13)
    CHECK(view_distance(x, origin) == doctest::Approx(9.00389691313215832152).epsilon(1e-14));
    // sqrt(14)
    CHECK(euclidean_distance(x, origin) ==
          doctest::Approx(3.74165738677394138558).epsilon(1e-14));
    CHECK(v_norm(x) == view_distance(x, origin));
    CHECK(v_norm(Eigen::Vector3d(1.0, 1.0, 1.0)) ==
          doctest::Approx(4.24264068711928514640).epsilon(1e-14));  // 3*sqrt(2)
    CHECK(distance(x, origin, MetricKind::View) == view_distance(x, origin));
    CHECK(distance(x, origin, MetricKind::Euclidean) == euclidean_distance(x, origin));
}

TEST_CASE("m=2 equivalence with the euclidean distance") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::VectorXd x = random_vector(rng, 2), y = random_vector(rng, 2);
        const double dv = view_distance(x, y), de = euclidean_distance(x, y);
        CHECK(std::abs(dv - de) <= 1e-12 * std::max(1.0, de));
    }
}

TEST_CASE("view distance matches an independent pair-loop oracle") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_index(9));
        const Eigen::VectorXd x = random_vector(rng, m), y = random_vector(rng, m);
        const double expected = static_cast<double>(view_distance_reference(x, y));
        CHECK(view_distance(x, y) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("metric axioms") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_index(9));
        const Eigen::VectorXd x = random_vector(rng, m), y = random_vector(rng, m),
                              z = random_vector(rng, m);
        const double dxy = view_distance(x, y);
        CHECK(dxy >= 0.0);
        CHECK(view_distance(x, x) == 0.0);
        CHECK(view_distance(y, x) == dxy);  // exact: term-by-term identical
        const double dxz = view_distance(x, z), dzy = view_distance(z, y);
        CHECK(dxy <= dxz + dzy + 1e-9 * std::max(1.0, dxz + dzy));
    }
}

TEST_CASE("identity of indiscernibles") {
    Eigen::Vector4d x(0.5, -1.0, 2.0, 0.0), y = x;
    y(2) += 1e-9;
    CHECK(view_distance(x, x) == 0.0);
    CHECK(view_distance(x, y) > 0.0);
}

TEST_CASE("view distance dominates the euclidean distance") {
    SplitMix64 rng(14);
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_index(9));
        const Eigen::VectorXd x = random_vector(rng, m), y = random_vector(rng, m);
        const double dv = view_distance(x, y), de = euclidean_distance(x, y);
        CHECK(dv - de >= -1e-12);
        // Strict when m > 2 and at least two coordinates differ: every extra
        // pair then contributes a positive term.
        int differing = 0;
        for (Eigen::Index i = 0; i < m; ++i) differing += x(i) != y(i);
        if (m > 2 && differing >= 2) CHECK(dv > de);
    }
}

TEST_CASE("dimension mismatch and undersized inputs are rejected") {
    Eigen::Vector2d a(1.0, 2.0);
    Eigen::Vector3d b(1.0, 2.0, 3.0);
    CHECK_THROWS_AS((void)view_distance(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)euclidean_distance(a, b), std::invalid_argument);
    Eigen::Matrix<double, 1, 1> s0, s1;
    s0 << 0.0;
    s1 << 1.0;
    CHECK_THROWS_AS((void)view_distance(s0, s1), std::invalid_argument);
    CHECK(euclidean_distance(s0, s1) == 1.0);  // 2-norm is fine in 1-D
    CHECK_THROWS_AS((void)v_norm(s1), std::invalid_argument);
}

TEST_CASE("v-norm is a norm") {
    SplitMix64 rng(15);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_index(7));
        const Eigen::VectorXd x = random_vector(rng, m), y = random_vector(rng, m);
        const double alpha = 4.0 * (2.0 * rng.next_double() - 1.0);
        const double nx = v_norm(x);
        CHECK(nx >= 0.0);
        // Absolute homogeneity.
        CHECK(v_norm((alpha * x).eval()) ==
              doctest::Approx(std::abs(alpha) * nx).epsilon(1e-12));
        // Triangle inequality.
        const double nxy = v_norm((x + y).eval());
        CHECK(nxy <= nx + v_norm(y) + 1e-9 * std::max(1.0, nx + v_norm(y)));
        // Dominates the 2-norm.
        CHECK(nx - x.norm() >= -1e-12);
        // Translation invariance of the induced distance.
        const Eigen::VectorXd shift = random_vector(rng, m);
        CHECK(view_distance((x + shift).eval(), (y + shift).eval()) ==
              doctest::Approx(view_distance(x, y)).epsilon(1e-12));
    }
    CHECK(v_norm(Eigen::Vector3d::Zero().eval()) == 0.0);
}

TEST_CASE("norm_of dispatches on the norm kind") {
    Eigen::Vector3d x(1.0, 2.0, 3.0);
    CHECK(norm_of(x, NormKind::TwoNorm) == x.norm());
    CHECK(norm_of(x, NormKind::VNorm) == v_norm(x));
}

TEST_CASE("similarity gain, appended coordinate: hand values") {
    Eigen::Vector2d x(1.0, 0.0);
    // base ||x||_2 = 1, extended (1,0,1): ||.||_2 = sqrt(2) -> gain sqrt(2)-1
    CHECK(dim_similarity_gain(x, 1.0, NormKind::TwoNorm) ==
          doctest::Approx(0.41421356237309504880).epsilon(1e-14));
    // base ||x||_v = 1, extended: 2 + sqrt(2) -> gain sqrt(2)+1
    CHECK(dim_similarity_gain(x, 1.0, NormKind::VNorm) ==
          doctest::Approx(2.41421356237309504880).epsilon(1e-14));
}

TEST_CASE("similarity gain: v-norm gain dominates the 2-norm gain") {
    SplitMix64 rng(16);
    for (int trial = 0; trial < 2000; ++trial) {
        Eigen::VectorXd x = random_vector(rng, 2);
        if (x.norm() == 0.0) x(0) = 1.0;
        const double t = 5.0 * (2.0 * rng.next_double() - 1.0);
        const double g2 = dim_similarity_gain(x, t, NormKind::TwoNorm);
        const double gv = dim_similarity_gain(x, t, NormKind::VNorm);
        CHECK(gv - g2 >= -1e-12);
    }
    CHECK_THROWS_AS((void)dim_similarity_gain(Eigen::Vector2d(0.0, 0.0), 1.0, NormKind::VNorm),
                    std::invalid_argument);
}

TEST_CASE("similarity gain, replaced trailing zero: hand values") {
    Eigen::Vector3d x(1.0, 1.0, 0.0);
    // base sqrt(2), replaced (1,1,1) -> sqrt(3): gain sqrt(3/2)-1
    CHECK(certain_dim_similarity_gain(x, 1.0, NormKind::TwoNorm) ==
          doctest::Approx(0.22474487139158904909).epsilon(1e-14));
    // base 2+sqrt(2), replaced 3*sqrt(2)
    CHECK(certain_dim_similarity_gain(x, 1.0, NormKind::VNorm) ==
          doctest::Approx(0.24264068711928514640).epsilon(1e-14));
    CHECK_THROWS_AS(
        (void)certain_dim_similarity_gain(Eigen::Vector3d(1.0, 1.0, 0.5), 1.0, NormKind::VNorm),
        std::invalid_argument);
    // Replacing the zero by zero is a no-op.
    CHECK(certain_dim_similarity_gain(x, 0.0, NormKind::VNorm) == 0.0);
}

TEST_CASE("metric kind parsing round-trips") {
    CHECK(parse_metric("euclidean") == MetricKind::Euclidean);
    CHECK(parse_metric("view") == MetricKind::View);
    CHECK(parse_metric(to_string(MetricKind::View)) == MetricKind::View);
    CHECK(parse_metric(to_string(MetricKind::Euclidean)) == MetricKind::Euclidean);
    CHECK(!parse_metric("manhattan").has_value());
}

TEST_CASE("pairwise distances: shape, symmetry, agreement with direct calls") {
    SplitMix64 rng(17);
    Eigen::MatrixXd pts(9, 4);
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = rng.next_gaussian();
    for (MetricKind metric : {MetricKind::Euclidean, MetricKind::View}) {
        const DistanceMatrix dm = pairwise_distances(pts, metric);
        REQUIRE(dm.n() == 9);
        CHECK(dm.metric == metric);
        for (Eigen::Index i = 0; i < 9; ++i) {
            CHECK(dm.entries(i, i) == 0.0);
            for (Eigen::Index j = 0; j < 9; ++j) {
                CHECK(dm.entries(i, j) == dm.entries(j, i));
                CHECK(dm.entries(i, j) == distance(pts.row(i), pts.row(j), metric));
            }
        }
    }
    CHECK_THROWS_AS((void)pairwise_distances(Eigen::MatrixXd(4, 1), MetricKind::View),
                    std::invalid_argument);
}

TEST_CASE("pairwise distances are independent of the thread count") {
    SplitMix64 rng(18);
    Eigen::MatrixXd pts(37, 3);
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = rng.next_gaussian();
    const int saved = thread_cap();
    set_thread_cap(1);
    const DistanceMatrix serial = pairwise_distances(pts, MetricKind::View);
    set_thread_cap(7);
    const DistanceMatrix threaded = pairwise_distances(pts, MetricKind::View);
    set_thread_cap(saved);
    CHECK(serial.entries == threaded.entries);  // bitwise
}

TEST_CASE("contour grid samples the distance-to-origin field") {
    const ContourGrid grid = contour_grid(4, {{1, 0.5}, {3, -2.0}}, {0, 2}, {-1.0, 1.0}, 5,
                                          MetricKind::View);
    CHECK(grid.axis_x == 0);
    CHECK(grid.axis_y == 2);
    REQUIRE(grid.xs.size() == 5);
    REQUIRE(grid.ys.size() == 5);
    CHECK(grid.xs(0) == -1.0);
    CHECK(grid.xs(4) == 1.0);  // inclusive endpoints
    CHECK(grid.xs(2) == doctest::Approx(0.0));
    Eigen::Vector4d probe(grid.xs(1), 0.5, grid.ys(3), -2.0);
    CHECK(grid.values(1, 3) ==
          view_distance(probe, Eigen::Vector4d::Zero().eval()));

    // m = 2: the two metrics coincide on the whole grid.
    const ContourGrid v2 = contour_grid(2, {}, {0, 1}, {-2.0, 2.0}, 9, MetricKind::View);
    const ContourGrid e2 = contour_grid(2, {}, {0, 1}, {-2.0, 2.0}, 9, MetricKind::Euclidean);
    for (Eigen::Index i = 0; i < 9; ++i)
        for (Eigen::Index j = 0; j < 9; ++j)
            CHECK(v2.values(i, j) ==
                  doctest::Approx(e2.values(i, j)).epsilon(1e-12));
}

TEST_CASE("contour grid validates its slice description") {
    CHECK_THROWS_AS((void)contour_grid(1, {}, {0, 1}, {-1, 1}, 3, MetricKind::View),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)contour_grid(2, {}, {0, 0}, {-1, 1}, 3, MetricKind::View),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)contour_grid(2, {}, {0, 2}, {-1, 1}, 3, MetricKind::View),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)contour_grid(3, {}, {0, 1}, {-1, 1}, 3, MetricKind::View),
                    std::invalid_argument);  // coordinate 2 not pinned
    CHECK_THROWS_AS((void)contour_grid(3, {{0, 1.0}}, {0, 1}, {-1, 1}, 3, MetricKind::View),
                    std::invalid_argument);  // pins a swept axis
    CHECK_THROWS_AS((void)contour_grid(2, {}, {0, 1}, {-1, 1}, 1, MetricKind::View),
                    std::invalid_argument);
}
