#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "viewmetric/metric.hpp"

namespace viewmetric {

/// Raised when an eigendecomposition fails to converge. The CLI maps this
/// to its numerical-failure exit code.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All real eigenvalues of a symmetric matrix, sorted descending.
/// Asymmetry beyond `tol` (absolute, max |M - M^T|) is an error; within
/// tol the matrix is symmetrized before decomposition. Each eigenvalue is
/// accurate to 1e-10 * ||M||_F or better.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& M,
                                      double tol = 1e-12);

/// Result of the three distance-matrix validity conditions. Condition (3)
/// examines B = (I - e s^T) M (I - s e^T), e the all-ones vector, s the
/// first standard basis vector, and passes when all eigenvalues of B lie
/// on one side of zero (within tol * ||M||_F). The observed side is
/// reported: for genuine distance matrices B comes out negative
/// semidefinite.
struct DistanceMatrixValidity {
    enum class Side { NegativeSemidefinite, PositiveSemidefinite, Indefinite };

    bool nonnegative_symmetric = false;
    bool zero_diagonal = false;
    bool conditionally_one_sided = false;
    Side observed_side = Side::Indefinite;
    Eigen::VectorXd projected_eigenvalues;  // eigenvalues of B, descending

    bool pass() const { return nonnegative_symmetric && zero_diagonal && conditionally_one_sided; }
};

DistanceMatrixValidity check_distance_matrix(const DistanceMatrix& M, double tol = 1e-9);

/// Maximum |eigenvalue|. For a distance matrix of distinct points this is
/// its unique positive eigenvalue.
double spectral_radius(const DistanceMatrix& M);

/// Paired eigenstructure diagnostics of the view and Euclidean distance
/// matrices of one point set. positive_count_* uses the relative threshold
/// tol * ||M||_F; trace_* is the matrix trace (zero by construction, kept
/// for eigensolver sanity checks against the eigenvalue sums).
struct SpectralReport {
    Eigen::VectorXd eigenvalues_view;    // descending
    Eigen::VectorXd eigenvalues_euclid;  // descending
    int positive_count_view = 0;
    int positive_count_euclid = 0;
    double rho_view = 0.0;
    double rho_euclid = 0.0;
    double trace_view = 0.0;
    double trace_euclid = 0.0;
    bool conditional_nsd_pass_view = false;
    bool conditional_nsd_pass_euclid = false;
};

/// Builds both pairwise matrices for `points` (rows are points, dimension
/// >= 2, n >= 2) and reports their spectra side by side.
SpectralReport spectral_report(const Eigen::Ref<const Eigen::MatrixXd>& points,
                               double tol = 1e-9);

}  // namespace viewmetric
