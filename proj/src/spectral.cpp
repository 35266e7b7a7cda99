#include "viewmetric/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

namespace viewmetric {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& M, double tol) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("symmetric_eigenvalues: matrix is " +
                                    std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
    if (M.rows() < 1) throw std::invalid_argument("symmetric_eigenvalues: empty matrix");
    const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol)
        throw std::invalid_argument("symmetric_eigenvalues: asymmetry " + std::to_string(asym) +
                                    " exceeds tolerance " + std::to_string(tol));
    const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric_eigenvalues: eigensolver did not converge");
    return solver.eigenvalues().reverse();
}

namespace {

void require_distance_matrix_shape(const DistanceMatrix& M, const char* what) {
    if (M.entries.rows() != M.entries.cols())
        throw std::invalid_argument(std::string(what) + ": matrix is not square");
    if (M.entries.rows() < 1) throw std::invalid_argument(std::string(what) + ": empty matrix");
}

}  // namespace

DistanceMatrixValidity check_distance_matrix(const DistanceMatrix& M, double tol) {
    require_distance_matrix_shape(M, "check_distance_matrix");
    const auto& E = M.entries;
    const Index n = E.rows();

    DistanceMatrixValidity v;
    v.nonnegative_symmetric =
        E.minCoeff() >= 0.0 && (E - E.transpose()).cwiseAbs().maxCoeff() <= 1e-12;
    v.zero_diagonal = E.diagonal().cwiseAbs().maxCoeff() == 0.0;

    // B = (I - e s^T) M (I - s e^T): zeroes the first row/column's
    // contribution of the embedding, symmetric whenever M is.
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    P.col(0) -= Eigen::VectorXd::Ones(n);
    const Eigen::MatrixXd B = P * E.selfadjointView<Eigen::Lower>() * P.transpose();
    v.projected_eigenvalues = symmetric_eigenvalues(B, 1e-9 * std::max(1.0, B.norm()));

    const double threshold = tol * E.norm();
    const double lo = v.projected_eigenvalues.minCoeff();
    const double hi = v.projected_eigenvalues.maxCoeff();
    const bool nsd = hi <= threshold;
    const bool psd = lo >= -threshold;
    v.conditionally_one_sided = nsd || psd;
    if (nsd)
        v.observed_side = DistanceMatrixValidity::Side::NegativeSemidefinite;
    else if (psd)
        v.observed_side = DistanceMatrixValidity::Side::PositiveSemidefinite;
    else
        v.observed_side = DistanceMatrixValidity::Side::Indefinite;
    return v;
}

double spectral_radius(const DistanceMatrix& M) {
    require_distance_matrix_shape(M, "spectral_radius");
    const Eigen::VectorXd eig = symmetric_eigenvalues(M.entries);
    return eig.cwiseAbs().maxCoeff();
}

SpectralReport spectral_report(const Eigen::Ref<const Eigen::MatrixXd>& points, double tol) {
    if (points.rows() < 2)
        throw std::invalid_argument("spectral_report: need at least two points, got " +
                                    std::to_string(points.rows()));
    const DistanceMatrix V = pairwise_distances(points, MetricKind::View);
    const DistanceMatrix E = pairwise_distances(points, MetricKind::Euclidean);

    SpectralReport report;
    report.eigenvalues_view = symmetric_eigenvalues(V.entries);
    report.eigenvalues_euclid = symmetric_eigenvalues(E.entries);
    report.trace_view = V.entries.trace();
    report.trace_euclid = E.entries.trace();
    report.rho_view = report.eigenvalues_view.cwiseAbs().maxCoeff();
    report.rho_euclid = report.eigenvalues_euclid.cwiseAbs().maxCoeff();

    const double thresh_view = tol * V.entries.norm();
    const double thresh_euclid = tol * E.entries.norm();
    report.positive_count_view = static_cast<int>(
        (report.eigenvalues_view.array() > thresh_view).count());
    report.positive_count_euclid = static_cast<int>(
        (report.eigenvalues_euclid.array() > thresh_euclid).count());
    report.conditional_nsd_pass_view =
        check_distance_matrix(V, tol).observed_side ==
        DistanceMatrixValidity::Side::NegativeSemidefinite;
    report.conditional_nsd_pass_euclid =
        check_distance_matrix(E, tol).observed_side ==
        DistanceMatrixValidity::Side::NegativeSemidefinite;
    return report;
}

}  // namespace viewmetric
